#include "lprof/mtslp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lprof {

Mtslp build_mtslp(const LearnerId& learner, const std::vector<SessionIndices>& sessions) {
    if (sessions.empty()) throw std::invalid_argument("build_mtslp: learner '" + learner + "' has no sessions");
    Mtslp m;
    m.learner = learner;
    m.sessions.reserve(sessions.size());
    m.rows.reserve(sessions.size());
    for (const auto& s : sessions) {
        m.sessions.push_back(s.session_id);
        m.rows.push_back(s.indices);
    }
    return m;
}

Matrix5 covariance(const Mtslp& m) {
    const std::size_t n = m.rows.size();
    if (n < 2) {
        throw TooFewSessions("covariance: learner '" + m.learner + "' has " + std::to_string(n) +
                             " session(s), need 2");
    }
    Row5 mean = session_mean(m);
    Matrix5 c{};
    for (std::size_t i = 0; i < kIndexCount; ++i) {
        for (std::size_t j = i; j < kIndexCount; ++j) {
            double acc = 0.0;
            for (const auto& row : m.rows) acc += (row[i] - mean[i]) * (row[j] - mean[j]);
            c[i][j] = acc / static_cast<double>(n - 1);
            c[j][i] = c[i][j];
        }
    }
    return c;
}

Row5 EigenDecomposition::column(std::size_t c) const {
    Row5 v{};
    for (std::size_t r = 0; r < kIndexCount; ++r) v[r] = vectors[r][c];
    return v;
}

namespace {

double off_diagonal_norm(const Matrix5& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < kIndexCount; ++i) {
        for (std::size_t j = 0; j < kIndexCount; ++j) {
            if (i != j) s += a[i][j] * a[i][j];
        }
    }
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eigendecompose(const Matrix5& c) {
    constexpr std::size_t n = kIndexCount;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(std::abs(c[i][j] - c[j][i]) <= 1e-12)) {
                throw NotSymmetric("sym_eigendecompose: matrix is not symmetric");
            }
        }
    }

    Matrix5 a = c;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) a[i][j] = a[j][i] = 0.5 * (c[i][j] + c[j][i]);
    }
    Matrix5 v{};
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) >= 1e-12; ++sweep) {
        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                // Rotation angle that zeroes a[p][q] (Golub & Van Loan, sym.schur2).
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                a[p][q] = a[q][p] = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = cs * vkp - sn * vkq;
                    v[k][q] = sn * vkp + cs * vkq;
                }
            }
        }
    }

    std::array<std::size_t, n> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });

    EigenDecomposition out;
    for (std::size_t c_out = 0; c_out < n; ++c_out) {
        const std::size_t src = order[c_out];
        double lambda = a[src][src];
        if (lambda < 0.0 && lambda >= -1e-12) lambda = 0.0;
        out.values[c_out] = lambda;

        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (std::abs(v[r][src]) > 1e-12) {
                sign = v[r][src] < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) out.vectors[r][c_out] = sign * v[r][src] + 0.0;
    }
    return out;
}

Row5 session_mean(const Mtslp& m) {
    Row5 mean{};
    if (m.rows.empty()) return mean;
    for (const auto& row : m.rows) {
        for (std::size_t i = 0; i < kIndexCount; ++i) mean[i] += row[i];
    }
    for (auto& x : mean) x /= static_cast<double>(m.rows.size());
    return mean;
}

}  // namespace lprof
