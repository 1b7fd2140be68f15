#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "lprof/acts.hpp"

namespace lprof {

inline constexpr std::size_t kIndexCount = 5;

using Row5 = std::array<double, kIndexCount>;
/// Row-major 5x5 matrix.
using Matrix5 = std::array<Row5, kIndexCount>;

/// Multivariate time series of one learner's profile indices: one row per
/// attended session, columns collaboration, animation, check, quest,
/// independence.
struct Mtslp {
    LearnerId learner;
    std::vector<std::string> sessions;
    std::vector<Row5> rows;

    std::size_t size() const { return rows.size(); }
    /// Eigenanalysis needs at least two sessions.
    bool sufficient() const { return rows.size() >= 2; }
};

struct SessionIndices {
    std::string session_id;
    Row5 indices{};
};

/// Stacks the per-session vectors in the given order. Throws
/// std::invalid_argument on empty input.
Mtslp build_mtslp(const LearnerId& learner, const std::vector<SessionIndices>& sessions);

class TooFewSessions : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotSymmetric : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sample covariance (divisor rows - 1). Throws TooFewSessions below 2 rows.
Matrix5 covariance(const Mtslp& m);

struct EigenDecomposition {
    /// Descending.
    Row5 values{};
    /// vectors[r][c]: component r of the eigenvector for values[c].
    Matrix5 vectors{};

    Row5 column(std::size_t c) const;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
/// 1e-12. Eigenpairs sorted by descending eigenvalue, each eigenvector's
/// first non-zero component made non-negative, eigenvalues in [-1e-12, 0)
/// snapped to 0. Throws NotSymmetric if |C - C^T| exceeds 1e-12.
EigenDecomposition sym_eigendecompose(const Matrix5& c);

/// Column means of the series; the per-learner clustering feature.
Row5 session_mean(const Mtslp& m);

}  // namespace lprof
