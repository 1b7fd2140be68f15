#include "lprof/similarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lprof {

std::string_view method_name(SimilarityMethod m) { return m == SimilarityMethod::Eros ? "eros" : "pcas"; }

std::optional<SimilarityMethod> parse_similarity_method(std::string_view name) {
    if (name == "eros") return SimilarityMethod::Eros;
    if (name == "pcas") return SimilarityMethod::Pcas;
    return std::nullopt;
}

namespace {

double column_dot(const EigenDecomposition& a, std::size_t i, const EigenDecomposition& b, std::size_t j) {
    double d = 0.0;
    for (std::size_t r = 0; r < kIndexCount; ++r) d += a.vectors[r][i] * b.vectors[r][j];
    return d;
}

}  // namespace

double pcas(const EigenDecomposition& a, const EigenDecomposition& b, std::size_t k, PcasNormalization norm) {
    if (k < 1 || k > kIndexCount) throw std::out_of_range("pcas: k must be in 1..5");
    std::array<double, kIndexCount * kIndexCount> terms{};
    std::size_t count = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double c = column_dot(a, i, b, j);
            terms[count++] = c * c;
        }
    }
    // Summing in sorted order makes pcas(a, b) and pcas(b, a) bit-identical.
    std::sort(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(count));
    double sum = 0.0;
    for (std::size_t t = 0; t < count; ++t) sum += terms[t];
    const double denom = norm == PcasNormalization::ByK ? static_cast<double>(k) : static_cast<double>(kIndexCount);
    return std::min(1.0, sum / denom);
}

ErosWeights eros_weights(std::span<const Row5> eigenvalues, bool raw_eigenvalues) {
    if (eigenvalues.empty()) throw std::invalid_argument("eros_weights: no learners");
    Row5 acc{};
    for (const auto& lambda : eigenvalues) {
        Row5 v = lambda;
        for (auto& x : v) x = std::max(x, 0.0);
        if (!raw_eigenvalues) {
            double total = 0.0;
            for (double x : v) total += x;
            if (total > 0.0) {
                for (auto& x : v) x /= total;
            } else {
                v.fill(1.0 / static_cast<double>(kIndexCount));
            }
        }
        for (std::size_t i = 0; i < kIndexCount; ++i) acc[i] += v[i];
    }
    for (auto& x : acc) x /= static_cast<double>(eigenvalues.size());

    double total = 0.0;
    for (double x : acc) total += x;
    ErosWeights w;
    if (total > 0.0) {
        for (std::size_t i = 0; i < kIndexCount; ++i) w.w[i] = acc[i] / total;
    } else {
        w.w.fill(1.0 / static_cast<double>(kIndexCount));
    }
    return w;
}

double eros(const EigenDecomposition& a, const EigenDecomposition& b, const ErosWeights& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < kIndexCount; ++i) s += w.w[i] * std::abs(column_dot(a, i, b, i));
    return std::min(1.0, s);
}

SimilarityResult similarity_matrix(const std::vector<Mtslp>& learners, const SimilarityConfig& cfg) {
    SimilarityResult result;
    result.matrix.method = cfg.method;

    std::vector<EigenDecomposition> eig;
    for (const auto& m : learners) {
        if (!m.sufficient()) {
            result.excluded.push_back({m.learner, "fewer than 2 sessions (" + std::to_string(m.size()) + ")"});
            continue;
        }
        const auto cov = covariance(m);
        bool zero = true;
        for (const auto& row : cov) {
            for (double x : row) zero = zero && x == 0.0;
        }
        if (zero) {
            if (cfg.strict) {
                result.excluded.push_back({m.learner, "zero covariance (identical profile every session)"});
                continue;
            }
            result.degenerate.push_back({m.learner, "zero covariance, identity basis assumed"});
        }
        result.matrix.learners.push_back(m.learner);
        eig.push_back(sym_eigendecompose(cov));
    }

    const std::size_t n = eig.size();
    if (n < 2) {
        throw IneligibleLearners("similarity needs at least 2 eligible learners, found " + std::to_string(n));
    }

    if (cfg.method == SimilarityMethod::Eros) {
        std::vector<Row5> values;
        values.reserve(n);
        for (const auto& e : eig) values.push_back(e.values);
        result.weights = eros_weights(values, cfg.raw_eigenvalue_weights);
    }

    auto& v = result.matrix.values;
    v.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double s = cfg.method == SimilarityMethod::Eros ? eros(eig[i], eig[j], *result.weights)
                                                                  : pcas(eig[i], eig[j], cfg.k, cfg.pcas_norm);
            v[i][j] = v[j][i] = s;
        }
    }
    return result;
}

}  // namespace lprof
