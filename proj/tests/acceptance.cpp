// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "lprof/clustering.hpp"
#include "lprof/fuzzy.hpp"
#include "lprof/mtslp.hpp"
#include "lprof/pipeline.hpp"
#include "lprof/random.hpp"
#include "lprof/session_fsm.hpp"
#include "lprof/similarity.hpp"

using namespace lprof;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// Degree in [0,1]; a third of the draws come from a small set so Min/Max ties happen.
double random_degree(Rng& rng) {
    static constexpr double kCoarse[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    return rng.chance(0.33) ? kCoarse[rng.below(5)] : rng.uniform();
}

// 1 ------------------------------------------------------------------------

Outcome closed_forms() {
    using std::max;
    using std::min;
    const auto sys = FuzzySystems::standard();
    const auto& org = sys.organizer;
    const auto& col = sys.collaborator;
    Rng rng(101);
    int mismatches = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < 1000; ++t) {
        const double xo1 = random_degree(rng), xo2 = random_degree(rng);
        const double ro1 = random_degree(rng), ro2 = random_degree(rng);
        const double i1 = random_degree(rng), i2 = random_degree(rng), i3 = random_degree(rng);
        // Term order: Passive/Active, Negative/Positive, Low/Average/Important.
        const Degrees d = {{xo2, xo1}, {ro2, ro1}, {i3, i2, i1}};
        const auto s = infer_minmax(org, d);
        const double yo1 = min({xo1, ro1, i1});
        const double yo2 = max({min({xo1, ro1, i2}), min({xo1, ro2, i1}), min({xo2, ro1, i1})});
        const double yo3 = max({min({xo1, ro1, i3}), min({xo2, ro1, i2}), min({xo1, ro2, i2})});
        const double yo4 = max({min({xo1, ro2, i3}), min({xo2, ro2, i1}), min({xo2, ro2, i2}), min({xo2, ro1, i3})});
        const double yo5 = min({xo2, ro2, i3});
        mismatches += s[org.output.term_index("Good_o")] != yo1;
        mismatches += s[org.output.term_index("Satisfactory_o")] != yo2;
        mismatches += s[org.output.term_index("Medium_o")] != yo3;
        mismatches += s[org.output.term_index("Insufficient_o")] != yo4;
        mismatches += s[org.output.term_index("Weak_o")] != yo5;

        const double x1 = random_degree(rng), x2 = random_degree(rng);
        const double y1 = random_degree(rng), y2 = random_degree(rng);
        const auto c = infer_minmax(col, Degrees{{x2, x1}, {y2, y1}});
        mismatches += c[col.output.term_index("Good_c")] != min(x1, y1);
        mismatches += c[col.output.term_index("Average_c")] != max(min(x1, y2), min(x2, y1));
        mismatches += c[col.output.term_index("Weak_c")] != min(x2, y2);
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 1.0,
            "1000 degree vectors, " + std::to_string(mismatches) + " mismatches, " + fmt("%.3f s", secs) + " (< 1 s)"};
}

// 2 ------------------------------------------------------------------------

Outcome membership_sanity() {
    const auto sys = FuzzySystems::standard();
    const auto active = sys.organizer.inputs[0].terms[1].mf;
    bool ok = std::abs(active(0.5) - 0.5) <= 1e-12;
    std::size_t functions = 0;
    double worst_outside = 0.0;
    double worst_peak = 0.0;
    const std::vector<const FisSpec*> all = {&sys.organizer, &sys.verifier, &sys.seeker, &sys.independent,
                                             &sys.collaborator};
    for (const FisSpec* fis : all) {
        std::vector<const LinguisticVariable*> vars;
        for (const auto& v : fis->inputs) vars.push_back(&v);
        vars.push_back(&fis->output);
        for (const auto* v : vars) {
            for (const auto& term : v->terms) {
                ++functions;
                if (term.mf.kind() == MembershipFunction::Kind::Gaussian) {
                    worst_peak = std::max(worst_peak, std::abs(term.mf(term.mf.center()) - 1.0));
                }
                for (int i = 0; i < 10000; ++i) {
                    const double x = v->domain.lo + (v->domain.hi - v->domain.lo) * i / 9999.0;
                    const double y = term.mf(x);
                    if (!(y >= 0.0 && y <= 1.0)) worst_outside = std::max(worst_outside, std::abs(y - 0.5) + 1.0);
                }
            }
        }
    }
    ok = ok && worst_peak <= 1e-12 && worst_outside == 0.0;
    return {ok, "Active(0.5)=" + fmt("%.17g", active(0.5)) + ", max |G(mu)-1|=" + fmt("%.1e", worst_peak) + ", " +
                    std::to_string(functions) + " functions x 10^4 points in [0,1]"};
}

// 3 ------------------------------------------------------------------------

/// Mean of the grid points at which the clipped output aggregate attains its maximum.
double grid_mom(const LinguisticVariable& out, const std::vector<double>& s) {
    constexpr int n = 1000000;
    double best = -1.0, sum = 0.0;
    long count = 0;
    for (int i = 0; i < n; ++i) {
        const double x = out.domain.lo + (out.domain.hi - out.domain.lo) * i / (n - 1);
        double agg = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s[j] <= agg) continue;
            agg = std::max(agg, std::min(s[j], out.terms[j].mf(x)));
        }
        if (agg > best) {
            best = agg;
            sum = x;
            count = 1;
        } else if (agg == best) {
            sum += x;
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

Outcome mom_oracle() {
    const auto sys = FuzzySystems::standard();
    Rng rng(303);
    double worst = 0.0;
    int ties = 0;
    for (int t = 0; t < 200; ++t) {
        const FisSpec& fis = t % 4 == 3 ? sys.collaborator : sys.behavioral(kProfiles[t % 4]);
        std::vector<double> s(fis.output.terms.size());
        for (auto& x : s) x = rng.chance(0.2) ? 0.0 : 0.01 + 0.98 * rng.uniform();
        if (t % 3 == 0) {
            // Tie two terms at the top strength.
            const std::size_t a = rng.below(s.size());
            std::size_t b = rng.below(s.size() - 1);
            if (b >= a) ++b;
            const double top = *std::max_element(s.begin(), s.end());
            s[a] = s[b] = std::max(top, 0.05);
            ++ties;
        }
        worst = std::max(worst, std::abs(defuzzify_mom(fis, s).value - grid_mom(fis.output, s)));
    }
    return {worst <= 1e-3, "200 strength vectors (" + std::to_string(ties) + " with ties), 10^6-point grid, max |diff|=" +
                               fmt("%.2e", worst) + " (<= 1e-3)"};
}

// 4 ------------------------------------------------------------------------

Outcome eigensolver() {
    Rng rng(404);
    double recon = 0.0, trace = 0.0, resid = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < 500; ++t) {
        Matrix5 c{};
        const double scale = std::pow(10.0, rng.uniform() * 4.0 - 2.0);
        for (std::size_t i = 0; i < kIndexCount; ++i) {
            for (std::size_t j = i; j < kIndexCount; ++j) c[i][j] = c[j][i] = scale * (2.0 * rng.uniform() - 1.0);
        }
        const auto e = sym_eigendecompose(c);
        double tr = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < kIndexCount; ++i) {
            tr += c[i][i];
            sum += e.values[i];
            for (std::size_t j = 0; j < kIndexCount; ++j) {
                double r = 0.0, cv = 0.0;
                for (std::size_t k = 0; k < kIndexCount; ++k) {
                    r += e.vectors[i][k] * e.values[k] * e.vectors[j][k];
                    cv += c[i][k] * e.vectors[k][j];
                }
                recon = std::max(recon, std::abs(r - c[i][j]));
                resid = std::max(resid, std::abs(cv - e.values[j] * e.vectors[i][j]));
            }
        }
        trace = std::max(trace, std::abs(tr - sum));
    }
    const double secs = seconds_since(t0);
    return {recon <= 1e-8 && trace <= 1e-10 && resid <= 1e-8 && secs < 2.0,
            "500 matrices: reconstruction " + fmt("%.1e", recon) + ", trace " + fmt("%.1e", trace) + ", residual " +
                fmt("%.1e", resid) + ", " + fmt("%.3f s", secs)};
}

// 5, 6 ---------------------------------------------------------------------

Mtslp random_series(Rng& rng, int rows) {
    Mtslp m;
    for (int i = 0; i < rows; ++i) {
        Row5 r;
        for (auto& x : r) x = rng.uniform() * 12.0;
        m.rows.push_back(r);
    }
    return m;
}

Outcome eros_properties() {
    Rng rng(505);
    double self = 0.0, weight_sum = 0.0;
    bool symmetric = true, in_range = true;
    for (int t = 0; t < 500; ++t) {
        const auto a = sym_eigendecompose(covariance(random_series(rng, 2 + static_cast<int>(rng.below(10)))));
        const auto b = sym_eigendecompose(covariance(random_series(rng, 2 + static_cast<int>(rng.below(10)))));
        const auto w = eros_weights(std::vector<Row5>{a.values, b.values});
        double ws = 0.0;
        for (double x : w.w) ws += x;
        weight_sum = std::max(weight_sum, std::abs(ws - 1.0));
        self = std::max({self, std::abs(eros(a, a, w) - 1.0), std::abs(eros(b, b, w) - 1.0)});
        const double ab = eros(a, b, w), ba = eros(b, a, w);
        symmetric = symmetric && ab == ba;
        in_range = in_range && ab >= 0.0 && ab <= 1.0;
    }
    return {self <= 1e-9 && symmetric && in_range && weight_sum <= 1e-12,
            "500 pairs: max |self-1|=" + fmt("%.1e", self) + ", symmetric " + (symmetric ? "exact" : "NO") +
                ", range " + (in_range ? "[0,1]" : "VIOLATED") + ", max |sum w-1|=" + fmt("%.1e", weight_sum)};
}

Outcome pcas_oracle() {
    Rng rng(606);
    double worst = 0.0, self = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto a = sym_eigendecompose(covariance(random_series(rng, 3 + static_cast<int>(rng.below(8)))));
        const auto b = sym_eigendecompose(covariance(random_series(rng, 3 + static_cast<int>(rng.below(8)))));
        for (std::size_t k : {1u, 3u, 5u}) {
            double sum = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    double dot = 0.0;
                    for (std::size_t r = 0; r < kIndexCount; ++r) dot += a.vectors[r][i] * b.vectors[r][j];
                    sum += dot * dot;
                }
            }
            worst = std::max(worst, std::abs(pcas(a, b, k) - sum / static_cast<double>(k)));
            self = std::max(self, std::abs(pcas(a, a, k) - 1.0));
        }
    }
    return {worst <= 1e-12 && self <= 1e-12,
            "200 pairs x k in {1,3,5}: max |diff|=" + fmt("%.1e", worst) + ", max |self-1|=" + fmt("%.1e", self)};
}

// 7, 8, 9 ------------------------------------------------------------------

std::vector<Point> blobs(Rng& rng, const std::vector<Point>& centers, int per, double sigma, std::vector<int>& truth) {
    std::vector<Point> pts;
    truth.clear();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (int i = 0; i < per; ++i) {
            Point p = centers[c];
            for (auto& x : p) x += sigma * rng.normal();
            pts.push_back(p);
            truth.push_back(static_cast<int>(c));
        }
    }
    return pts;
}

Outcome fcm_invariants() {
    Rng rng(707);
    double worst_row = 0.0;
    int max_iter_used = 0;
    bool all_converged = true;
    std::vector<int> truth;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto pts = blobs(rng, {{0, 0, 0, 0, 0}, {6, 0, 0, 0, 0}, {0, 6, 6, 0, 0}}, 15, 1.0, truth);
        FcmOptions opt;
        opt.c = 3;
        opt.m = 2.0;
        opt.beta = 1e-5;
        opt.max_iter = 100;
        opt.seed = seed;
        opt.on_iteration = [&](int, const std::vector<std::vector<double>>& u, const std::vector<Point>&) {
            for (const auto& row : u) {
                double s = 0.0;
                for (double x : row) s += x;
                worst_row = std::max(worst_row, std::abs(s - 1.0));
            }
        };
        const auto r = fcm(pts, opt);
        all_converged = all_converged && r.converged;
        max_iter_used = std::max(max_iter_used, r.iterations);
    }
    const auto single = fcm_memberships({{1, 2}}, {{5, 5}, {1, 2}, {0, 0}}, 2.0);
    const auto shared = fcm_memberships({{1, 2}}, {{1, 2}, {9, 9}, {1, 2}}, 2.0);
    const bool zero_ok = single[0] == std::vector<double>{0.0, 1.0, 0.0} &&
                         shared[0] == std::vector<double>{0.5, 0.0, 0.5};
    return {worst_row <= 1e-9 && all_converged && zero_ok,
            "10 seeds on 3 blobs: max |row sum-1|=" + fmt("%.1e", worst_row) + ", converged " +
                (all_converged ? "all" : "NOT all") + " within " + std::to_string(max_iter_used) +
                " of 100 iterations, zero-distance " + (zero_ok ? "ok" : "WRONG")};
}

Outcome kmeans_checks() {
    int increases = 0, perfect = 0;
    std::vector<int> truth;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(800 + seed);
        // Unit sigma, centers 12 apart.
        const auto pts = blobs(rng, {{0, 0, 0, 0, 0}, {12, 0, 0, 0, 0}}, 20, 1.0, truth);
        KMeansOptions opt;
        opt.k = 2;
        opt.seed = seed;
        double prev = INFINITY;
        opt.on_iteration = [&](int, double obj) {
            increases += obj > prev;
            prev = obj;
        };
        perfect += adjusted_rand_index(kmeans(pts, opt).labels, truth) == 1.0;
    }
    return {increases == 0 && perfect == 20, "objective increases: " + std::to_string(increases) +
                                                 ", ARI = 1 on " + std::to_string(perfect) + "/20 seeds"};
}

Outcome hac_checks() {
    bool counts = true, monotone = true;
    int perfect = 0;
    std::vector<int> truth;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(900 + seed);
        const auto pts = blobs(rng, {{0, 0, 0, 0, 0}, {0, 0, 12, 0, 0}}, 10 + static_cast<int>(seed), 1.0, truth);
        const auto tree = hac_points(pts, Linkage::Average);
        counts = counts && tree.merges.size() == pts.size() - 1;
        for (std::size_t i = 1; i < tree.merges.size(); ++i) {
            monotone = monotone && tree.merges[i].height >= tree.merges[i - 1].height;
        }
        perfect += adjusted_rand_index(cut(tree, 2), truth) == 1.0;
    }
    return {counts && monotone && perfect == 20,
            std::string("20 datasets: n-1 merges ") + (counts ? "yes" : "NO") + ", heights non-decreasing " +
                (monotone ? "yes" : "NO") + ", 2-cut ARI = 1 on " + std::to_string(perfect) + "/20"};
}

// 10 -----------------------------------------------------------------------

Outcome archetype_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto systems = FuzzySystems::standard();
    double hac_sum = 0.0, km_sum = 0.0, fcm_sum = 0.0;
    int nonconformant = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SimulationSpec spec;
        spec.seed = seed;
        spec.learners = 24;
        spec.group_size = 4;
        spec.sessions = 8;
        spec.archetypes = {Profile::Organizer, Profile::Verifier, Profile::Independent};
        const auto sim = simulate(spec);
        for (const auto& log : sim.logs) nonconformant += !validate_session(log).conformant();
        const auto series = build_mtslps(profile_sessions(sim.logs, systems));
        std::vector<LearnerId> ids;
        for (const auto& m : series) ids.push_back(m.learner);
        const auto truth = truth_labels(sim.truth, ids);
        const auto pts = mean_features(series);

        hac_sum += adjusted_rand_index(cut(hac_points(pts, Linkage::Average), 3), truth);
        KMeansOptions ko;
        ko.k = 3;
        ko.seed = seed;
        km_sum += adjusted_rand_index(kmeans(pts, ko).labels, truth);
        FcmOptions fo;
        fo.c = 3;
        fo.seed = seed;
        fcm_sum += adjusted_rand_index(fcm(pts, fo).hard_labels(), truth);
    }
    const double secs = seconds_since(t0);
    const double h = hac_sum / 10, k = km_sum / 10, f = fcm_sum / 10;
    return {h >= 0.6 && k >= 0.6 && f >= 0.6 && secs < 60.0 && nonconformant == 0,
            "mean ARI over seeds 1-10: hac " + fmt("%.3f", h) + ", kmeans " + fmt("%.3f", k) + ", fcm " +
                fmt("%.3f", f) + " (>= 0.6), " + fmt("%.2f s", secs) + " (< 60 s)"};
}

// 11 -----------------------------------------------------------------------

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "lprof_acceptance_determinism";
    fs::remove_all(root);
    std::ostringstream sink;
    int codes = 0;
    for (const char* run : {"a", "b"}) {
        codes += cli::run({"lprof", "report", "--seed", "7", "--out", (root / run).string()}, sink, sink);
        for (const char* method : {"eros", "pcas"}) {
            codes += cli::run({"lprof", "cluster", "--similarity", (root / run / ("similarity_" + std::string(method) + ".csv")).string(),
                               "--method", "hac", "--out", (root / run / method).string()},
                              sink, sink);
        }
    }
    std::size_t files = 0, differing = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
        if (!e.is_regular_file()) continue;
        ++files;
        differing += read_file(e.path()) != read_file(root / "b" / fs::relative(e.path(), root / "a"));
    }
    fs::remove_all(root);
    return {codes == 0 && files > 0 && differing == 0,
            std::to_string(files) + " output files per run, " + std::to_string(differing) + " differ"};
}

// 12 -----------------------------------------------------------------------

/// Reorders whole records, renumbering seq by position and remapping reply_to.
SessionLog shuffled(const SessionLog& log, Rng& rng) {
    std::vector<std::size_t> order(log.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    std::map<std::int64_t, std::int64_t> new_seq;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        new_seq[log.records[order[pos]].seq] = static_cast<std::int64_t>(pos) + 1;
    }
    SessionLog out = log;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        auto r = log.records[order[pos]];
        r.seq = static_cast<std::int64_t>(pos) + 1;
        if (r.reply_to) r.reply_to = new_seq.at(*r.reply_to);
        out.records[pos] = r;
    }
    return out;
}

bool same_content(const SessionLog& a, const SessionLog& b) {
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto &x = a.records[i], &y = b.records[i];
        if (x.actor != y.actor || x.act != y.act || x.reply_to != y.reply_to || x.timeout != y.timeout) return false;
    }
    return true;
}

Outcome fsm_adjunction() {
    const std::vector<LearnerId> pool = {"a", "b", "c", "d", "e", "f"};
    Rng rng(1212);
    int generated_bad = 0, shuffles_missed = 0, shuffles = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        GeneratorOptions opt;
        opt.seed = seed;
        opt.session_id = "s" + std::to_string(seed);
        const std::size_t n = 2 + rng.below(pool.size() - 1);
        opt.roster.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
        opt.leader = opt.roster[rng.below(n)];
        for (const auto& id : opt.roster) opt.archetypes[id] = kProfiles[rng.below(4)];
        opt.length_budget = 10 + static_cast<int>(rng.below(70));
        const auto log = generate_session(opt);
        generated_bad += !validate_session(log).findings.empty();

        SessionLog mixed = shuffled(log, rng);
        for (int attempt = 0; attempt < 100 && same_content(mixed, log); ++attempt) mixed = shuffled(log, rng);
        if (same_content(mixed, log)) continue;
        ++shuffles;
        shuffles_missed += validate_session(mixed).findings.empty();
    }
    return {generated_bad == 0 && shuffles == 1000 && shuffles_missed == 0,
            "1000 generated sessions, " + std::to_string(generated_bad) + " with findings; " +
                std::to_string(shuffles) + " shuffles, " + std::to_string(shuffles_missed) + " undetected"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"fuzzy closed-form equivalence", closed_forms},
        {"membership sanity", membership_sanity},
        {"mean-of-maxima vs grid oracle", mom_oracle},
        {"eigensolver accuracy", eigensolver},
        {"eros properties", eros_properties},
        {"pcas vs brute force", pcas_oracle},
        {"fuzzy c-means invariants", fcm_invariants},
        {"k-means monotone objective and recovery", kmeans_checks},
        {"hierarchical clustering", hac_checks},
        {"end-to-end archetype recovery", archetype_recovery},
        {"pipeline determinism", determinism},
        {"generator/validator adjunction", fsm_adjunction},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  #%-2zu %-42s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
