#include "lprof/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "lprof/random.hpp"
#include "lprof/text.hpp"

namespace lprof {

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ClusteringError("euclidean_distance: lengths " + std::to_string(x.size()) + " and " +
                              std::to_string(y.size()) + " differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

DistanceMatrix pairwise_distances(const std::vector<Point>& points) {
    const std::size_t n = points.size();
    DistanceMatrix d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = euclidean_distance(points[i], points[j]);
    }
    return d;
}

std::string_view linkage_name(Linkage l) {
    switch (l) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
    }
    return "?";
}

std::optional<Linkage> parse_linkage(std::string_view name) {
    if (name == "single") return Linkage::Single;
    if (name == "complete") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Agglomerative hierarchy

Dendrogram hac(const DistanceMatrix& distances, Linkage linkage) {
    const std::size_t n = distances.size();
    if (n < 2) throw ClusteringError("hac: need at least 2 points");
    for (const auto& row : distances) {
        if (row.size() != n) throw ClusteringError("hac: distance matrix is not square");
    }

    const std::size_t total = 2 * n - 1;
    std::vector<std::vector<double>> d(total, std::vector<double>(total, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i][j] = distances[i][j];
    }
    std::vector<std::size_t> size(total, 1);
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);

    Dendrogram tree;
    tree.leaves = n;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        // `active` stays sorted by id, so the first strict minimum is the
        // lexicographically smallest tied pair.
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const double dist = d[active[x]][active[y]];
                if (dist < best) {
                    best = dist;
                    ba = active[x];
                    bb = active[y];
                }
            }
        }

        const std::size_t id = n + step;
        size[id] = size[ba] + size[bb];
        for (std::size_t other : active) {
            if (other == ba || other == bb) continue;
            double nd = 0.0;
            switch (linkage) {
                case Linkage::Single: nd = std::min(d[ba][other], d[bb][other]); break;
                case Linkage::Complete: nd = std::max(d[ba][other], d[bb][other]); break;
                case Linkage::Average:
                    nd = (static_cast<double>(size[ba]) * d[ba][other] + static_cast<double>(size[bb]) * d[bb][other]) /
                         static_cast<double>(size[id]);
                    break;
            }
            d[id][other] = d[other][id] = nd;
        }
        std::erase_if(active, [&](std::size_t c) { return c == ba || c == bb; });
        active.push_back(id);
        tree.merges.push_back({ba, bb, best, size[id]});
    }
    return tree;
}

Dendrogram hac_points(const std::vector<Point>& points, Linkage linkage) {
    if (points.size() < 2) throw ClusteringError("hac: need at least 2 points");
    return hac(pairwise_distances(points), linkage);
}

namespace {

std::vector<int> first_appearance_labels(const std::vector<std::size_t>& roots) {
    std::map<std::size_t, int> ids;
    std::vector<int> labels(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(roots[i], static_cast<int>(ids.size()));
        labels[i] = it->second;
    }
    return labels;
}

}  // namespace

std::vector<int> cut(const Dendrogram& tree, std::size_t k) {
    const std::size_t n = tree.leaves;
    if (k < 1 || k > n) throw ClusteringError("cut: k must be in 1.." + std::to_string(n));
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i + k < n; ++i) {
        const auto& m = tree.merges[i];
        parent[m.a] = parent[m.b] = n + i;
    }
    std::vector<std::size_t> roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = i;
        while (parent[r] != r) r = parent[r];
        roots[i] = r;
    }
    return first_appearance_labels(roots);
}

DistanceMatrix cophenetic(const Dendrogram& tree) {
    const std::size_t n = tree.leaves;
    std::vector<std::vector<std::size_t>> members(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};
    DistanceMatrix c(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < tree.merges.size(); ++s) {
        const auto& m = tree.merges[s];
        for (std::size_t x : members[m.a]) {
            for (std::size_t y : members[m.b]) c[x][y] = c[y][x] = m.height;
        }
        auto& joined = members[n + s];
        joined = members[m.a];
        joined.insert(joined.end(), members[m.b].begin(), members[m.b].end());
    }
    return c;
}

std::string dendrogram_to_dot(const Dendrogram& tree, std::span<const std::string> labels) {
    std::ostringstream out;
    out << "digraph dendrogram {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < tree.leaves; ++i) {
        const std::string name = i < labels.size() ? labels[i] : std::to_string(i);
        out << "  n" << i << " [label=\"" << name << "\"];\n";
    }
    for (std::size_t s = 0; s < tree.merges.size(); ++s) {
        const auto& m = tree.merges[s];
        const std::size_t id = tree.leaves + s;
        out << "  n" << id << " [shape=ellipse, label=\"" << format_double(m.height) << "\"];\n";
        out << "  n" << id << " -> n" << m.a << ";\n";
        out << "  n" << id << " -> n" << m.b << ";\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// K-means

namespace {

std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(k);
    return idx;
}

double squared_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void check_dimensions(const std::vector<Point>& points) {
    for (const auto& p : points) {
        if (p.size() != points.front().size()) throw ClusteringError("points differ in dimension");
    }
}

}  // namespace

KMeansResult kmeans(const std::vector<Point>& points, const KMeansOptions& opt) {
    const std::size_t n = points.size();
    if (opt.k < 1 || opt.k > n) {
        throw ClusteringError("kmeans: k=" + std::to_string(opt.k) + " outside 1.." + std::to_string(n));
    }
    check_dimensions(points);
    const std::size_t dim = points.front().size();

    Rng rng(opt.seed);
    KMeansResult res;
    for (std::size_t i : distinct_indices(n, opt.k, rng)) res.centroids.push_back(points[i]);
    res.labels.assign(n, -1);

    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        res.iterations = iter;
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = squared_distance(points[i], res.centroids[0]);
            for (std::size_t j = 1; j < opt.k; ++j) {
                const double dj = squared_distance(points[i], res.centroids[j]);
                if (dj < best_d) {
                    best_d = dj;
                    best = static_cast<int>(j);
                }
            }
            if (res.labels[i] != best) {
                res.labels[i] = best;
                changed = true;
            }
        }
        if (!changed) {
            res.converged = true;
            break;
        }

        std::vector<std::size_t> counts(opt.k, 0);
        for (int l : res.labels) ++counts[static_cast<std::size_t>(l)];
        for (std::size_t j = 0; j < opt.k; ++j) {
            if (counts[j] != 0) continue;
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto l = static_cast<std::size_t>(res.labels[i]);
                if (counts[l] < 2) continue;
                const double di = squared_distance(points[i], res.centroids[l]);
                if (di > far_d) {
                    far_d = di;
                    far = i;
                }
            }
            if (far == n) continue;
            --counts[static_cast<std::size_t>(res.labels[far])];
            res.labels[far] = static_cast<int>(j);
            counts[j] = 1;
        }

        for (auto& c : res.centroids) std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = res.centroids[static_cast<std::size_t>(res.labels[i])];
            for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
        }
        for (std::size_t j = 0; j < opt.k; ++j) {
            for (auto& x : res.centroids[j]) x /= static_cast<double>(counts[j]);
        }

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            objective += squared_distance(points[i], res.centroids[static_cast<std::size_t>(res.labels[i])]);
        }
        res.objective.push_back(objective);
        if (opt.on_iteration) opt.on_iteration(iter, objective);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Fuzzy c-means

std::vector<int> FcmResult::hard_labels() const {
    std::vector<int> labels;
    labels.reserve(memberships.size());
    for (const auto& row : memberships) {
        labels.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
    return labels;
}

std::vector<std::vector<double>> fcm_memberships(const std::vector<Point>& points,
                                                 const std::vector<Point>& centers, double m) {
    const std::size_t c = centers.size();
    const double exponent = 2.0 / (m - 1.0);
    std::vector<std::vector<double>> u(points.size(), std::vector<double>(c, 0.0));
    std::vector<double> dist(c);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::size_t coincident = 0;
        for (std::size_t j = 0; j < c; ++j) {
            dist[j] = euclidean_distance(points[i], centers[j]);
            coincident += dist[j] == 0.0;
        }
        if (coincident > 0) {
            for (std::size_t j = 0; j < c; ++j) {
                u[i][j] = dist[j] == 0.0 ? 1.0 / static_cast<double>(coincident) : 0.0;
            }
            continue;
        }
        for (std::size_t j = 0; j < c; ++j) {
            double denom = 0.0;
            for (std::size_t k = 0; k < c; ++k) denom += std::pow(dist[j] / dist[k], exponent);
            u[i][j] = 1.0 / denom;
        }
    }
    return u;
}

FcmResult fcm(const std::vector<Point>& points, const FcmOptions& opt) {
    const std::size_t n = points.size();
    if (opt.c < 1 || opt.c > n) {
        throw ClusteringError("fcm: c=" + std::to_string(opt.c) + " outside 1.." + std::to_string(n));
    }
    if (!(opt.m > 1.0)) throw ClusteringError("fcm: fuzziness m must exceed 1");
    check_dimensions(points);
    const std::size_t dim = points.front().size();

    Rng rng(opt.seed);
    FcmResult res;
    for (std::size_t i : distinct_indices(n, opt.c, rng)) res.centers.push_back(points[i]);

    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        res.iterations = iter;
        const auto u = fcm_memberships(points, res.centers, opt.m);

        std::vector<Point> next = res.centers;
        for (std::size_t j = 0; j < opt.c; ++j) {
            Point num(dim, 0.0);
            double den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = std::pow(u[i][j], opt.m);
                den += w;
                for (std::size_t d = 0; d < dim; ++d) num[d] += w * points[i][d];
            }
            if (den > 0.0) {
                for (std::size_t d = 0; d < dim; ++d) next[j][d] = num[d] / den;
            }
        }

        double shift = 0.0;
        for (std::size_t j = 0; j < opt.c; ++j) {
            for (std::size_t d = 0; d < dim; ++d) shift = std::max(shift, std::abs(next[j][d] - res.centers[j][d]));
        }
        if (opt.on_iteration) opt.on_iteration(iter, u, next);
        res.centers = std::move(next);
        if (shift < opt.beta) {
            res.converged = true;
            break;
        }
    }
    res.memberships = fcm_memberships(points, res.centers, opt.m);
    return res;
}

// ---------------------------------------------------------------------------

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw ClusteringError("adjusted_rand_index: labelings differ in size");
    const double n = static_cast<double>(a.size());
    if (a.size() < 2) return 1.0;

    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [_, v] : joint) index += pairs(v);
    for (const auto& [_, v] : rows) sum_rows += pairs(v);
    for (const auto& [_, v] : cols) sum_cols += pairs(v);
    const double expected = sum_rows * sum_cols / pairs(n);
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

}  // namespace lprof
