#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lprof {

using Point = std::vector<double>;

class ClusteringError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws ClusteringError on a length mismatch.
double euclidean_distance(std::span<const double> x, std::span<const double> y);

/// Dense symmetric distance matrix.
using DistanceMatrix = std::vector<std::vector<double>>;

DistanceMatrix pairwise_distances(const std::vector<Point>& points);

enum class Linkage { Single, Complete, Average };

std::string_view linkage_name(Linkage l);
std::optional<Linkage> parse_linkage(std::string_view name);

/// One agglomeration step. Leaves are 0..n-1; the cluster formed by merge
/// i gets id n + i.
struct Merge {
    std::size_t a = 0;  // smaller id
    std::size_t b = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<Merge> merges;
};

/// Repeatedly merges the closest pair of clusters; ties go to the lowest
/// (smaller id, larger id) pair. Throws ClusteringError below 2 points.
Dendrogram hac(const DistanceMatrix& distances, Linkage linkage);
/// hac over the Euclidean distances between points.
Dendrogram hac_points(const std::vector<Point>& points, Linkage linkage);

/// Flat clusters from undoing the last k-1 merges. Labels are numbered by
/// the order in which clusters first appear among points 0..n-1.
std::vector<int> cut(const Dendrogram& tree, std::size_t k);

/// Merge height at which each pair of leaves first shares a cluster.
DistanceMatrix cophenetic(const Dendrogram& tree);

std::string dendrogram_to_dot(const Dendrogram& tree, std::span<const std::string> labels);

struct KMeansOptions {
    std::size_t k = 3;
    std::uint64_t seed = 0;
    int max_iter = 100;
    /// Called after every centroid update with the iteration number and objective.
    std::function<void(int, double)> on_iteration;
};

struct KMeansResult {
    std::vector<int> labels;
    std::vector<Point> centroids;
    /// Sum of squared distances to the assigned centroid, after each update.
    std::vector<double> objective;
    int iterations = 0;
    bool converged = false;
};

/// Lloyd iterations from k distinct random points; an emptied cluster is
/// reseeded with the point farthest from its centroid.
/// Throws ClusteringError unless 1 <= k <= n.
KMeansResult kmeans(const std::vector<Point>& points, const KMeansOptions& options);

struct FcmOptions {
    std::size_t c = 3;
    double m = 2.0;
    double beta = 1e-5;
    int max_iter = 100;
    std::uint64_t seed = 0;
    /// Called once per iteration with the memberships and the new centers.
    std::function<void(int, const std::vector<std::vector<double>>&, const std::vector<Point>&)> on_iteration;
};

struct FcmResult {
    /// memberships[i][j]: degree of point i in cluster j; rows sum to 1.
    std::vector<std::vector<double>> memberships;
    std::vector<Point> centers;
    int iterations = 0;
    /// True when the center change fell below beta; false when max_iter stopped it.
    bool converged = false;

    /// Arg-max cluster per point (lowest index on ties).
    std::vector<int> hard_labels() const;
};

/// Memberships of every point given fixed centers. A point coinciding with
/// one or more centers splits its membership evenly among them.
std::vector<std::vector<double>> fcm_memberships(const std::vector<Point>& points,
                                                 const std::vector<Point>& centers, double m);

/// Fuzzy c-means. Throws ClusteringError unless 1 <= c <= n and m > 1.
FcmResult fcm(const std::vector<Point>& points, const FcmOptions& options);

/// Chance-corrected agreement of two labelings; 1 for identical partitions.
/// Throws ClusteringError on a size mismatch.
double adjusted_rand_index(std::span<const int> assignment, std::span<const int> reference);

}  // namespace lprof
