#pragma once

// CSV readers and writers for the pipeline artifacts. Numbers are written in
// shortest round-trip form, so write-then-read reproduces every value.
// Readers skip blank lines and lines starting with '#'.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lprof/clustering.hpp"
#include "lprof/mtslp.hpp"
#include "lprof/pipeline.hpp"
#include "lprof/similarity.hpp"

namespace lprof {

inline constexpr std::string_view kToolVersion = "0.1.0";

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what);
    /// 1-based; 0 when not tied to a line.
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// "# lprof <version> config=<16 hex digits>\n", the digits being a hash of `config`.
std::string provenance_line(std::string_view config);

/// session,collaboration,animation,check,quest,independence
std::string write_mtslp_csv(const Mtslp& series, std::string_view header = {});
Mtslp read_mtslp_csv(std::string_view text, const LearnerId& learner);

/// learner,<id>,<id>,... followed by one row per learner.
std::string write_similarity_csv(const SimilarityMatrix& matrix, std::string_view header = {});
/// The method is not stored; the result carries the default.
SimilarityMatrix read_similarity_csv(std::string_view text);

/// learner,collaboration,animation,check,quest,independence
std::string write_features_csv(const std::vector<LearnerId>& learners, const std::vector<Point>& points,
                               std::string_view header = {});
void read_features_csv(std::string_view text, std::vector<LearnerId>& learners, std::vector<Point>& points);

struct ClusterTable {
    std::vector<LearnerId> learners;
    std::vector<int> labels;
    /// Soft assignments, one row per learner; empty for hard clusterings.
    std::vector<std::vector<double>> memberships;

    bool operator==(const ClusterTable&) const = default;
};

/// learner,cluster  or  learner,cluster1..clusterC,cluster
std::string write_clusters_csv(const ClusterTable& table, std::string_view header = {});
ClusterTable read_clusters_csv(std::string_view text);

/// One row per (session, learner): crisp coefficients, the five indices and
/// the percentage of every output label, columns named <index>_<label>.
std::string write_profiles_csv(const std::vector<ProfileRow>& rows, const FuzzySystems& systems,
                               std::string_view header = {});
/// Restores coefficients, indices and percentages (strengths stay empty).
std::vector<ProfileRow> read_profiles_csv(std::string_view text);

}  // namespace lprof
