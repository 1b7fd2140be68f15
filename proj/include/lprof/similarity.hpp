#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lprof/mtslp.hpp"

namespace lprof {

/// Non-negative weights summing to 1, one per principal component.
struct ErosWeights {
    Row5 w{};
};

enum class SimilarityMethod { Eros, Pcas };

std::string_view method_name(SimilarityMethod m);
std::optional<SimilarityMethod> parse_similarity_method(std::string_view name);

enum class PcasNormalization {
    /// Divide by k: identical subspaces score 1 for every k.
    ByK,
    /// Divide by the number of variables (5) regardless of k.
    ByVariableCount,
};

/// Sum of squared cosines between the first k components of each basis,
/// normalised. Throws std::out_of_range unless 1 <= k <= 5.
double pcas(const EigenDecomposition& a, const EigenDecomposition& b, std::size_t k,
            PcasNormalization norm = PcasNormalization::ByK);

/// Per-learner eigenvalues normalised to sum 1 (all-zero -> uniform), averaged,
/// renormalised. With `raw_eigenvalues` the per-learner step is skipped.
/// Throws std::invalid_argument on an empty set.
ErosWeights eros_weights(std::span<const Row5> eigenvalues, bool raw_eigenvalues = false);

/// Sum_i w_i |a_i . b_i|.
double eros(const EigenDecomposition& a, const EigenDecomposition& b, const ErosWeights& w);

struct SimilarityConfig {
    SimilarityMethod method = SimilarityMethod::Eros;
    std::size_t k = 5;
    PcasNormalization pcas_norm = PcasNormalization::ByK;
    bool raw_eigenvalue_weights = false;
    /// Exclude learners whose covariance is identically zero instead of
    /// scoring them with the identity basis.
    bool strict = false;
};

struct SimilarityMatrix {
    SimilarityMethod method = SimilarityMethod::Eros;
    std::vector<LearnerId> learners;
    /// values[i][j], symmetric.
    std::vector<std::vector<double>> values;
};

struct LearnerNote {
    LearnerId learner;
    std::string reason;
};

struct SimilarityResult {
    SimilarityMatrix matrix;
    std::optional<ErosWeights> weights;
    /// Learners left out of the matrix.
    std::vector<LearnerNote> excluded;
    /// Learners scored under the zero-covariance convention.
    std::vector<LearnerNote> degenerate;
};

class IneligibleLearners : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pairwise similarity of every learner with at least two sessions.
/// Throws IneligibleLearners if fewer than two remain.
SimilarityResult similarity_matrix(const std::vector<Mtslp>& learners, const SimilarityConfig& config);

}  // namespace lprof
