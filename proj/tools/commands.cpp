#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lprof/csv_io.hpp"
#include "lprof/pipeline.hpp"
#include "lprof/similarity.hpp"
#include "lprof/text.hpp"

namespace lprof::cli {

namespace fs = std::filesystem;

namespace {

/// Controlled early exit with a message for stderr.
struct Failure {
    int code;
    std::string message;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kError, "cannot read '" + path.string() + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{kError, "cannot write '" + path.string() + "'"};
    out << content;
    if (!out) throw Failure{kError, "write failed for '" + path.string() + "'"};
}

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("LPROF_OUT_DIR"); env && *env) return env;
    return ".";
}

LogFormat format_of(const std::string& path, const std::string& flag) {
    if (!flag.empty()) {
        auto f = parse_log_format(flag);
        if (!f) throw Failure{kError, "unknown log format '" + flag + "'"};
        return *f;
    }
    return fs::path(path).extension() == ".jsonl" ? LogFormat::Jsonl : LogFormat::Csv;
}

std::vector<SessionLog> load_logs(const std::vector<std::string>& files, const std::string& manifest_path,
                                  const std::string& format) {
    const Manifest manifest = parse_manifest(read_file(manifest_path));
    std::vector<SessionLog> logs;
    for (const auto& f : files) {
        try {
            auto part = parse_session_log(read_file(f), format_of(f, format), manifest);
            logs.insert(logs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        } catch (const LogError& e) {
            throw Failure{kError, f + ": " + e.what()};
        }
    }
    return logs;
}

std::vector<Mtslp> load_mtslp_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Failure{kError, "not a directory: '" + dir.string() + "'"};
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Mtslp> series;
    for (const auto& f : files) {
        try {
            series.push_back(read_mtslp_csv(read_file(f), f.stem().string()));
        } catch (const CsvError& e) {
            throw Failure{kError, f.string() + ": " + e.what()};
        }
    }
    if (series.empty()) throw Failure{kError, "no .csv series in '" + dir.string() + "'"};
    return series;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::vector<std::string> logs;
    std::string manifest;
    std::string format;
    std::string report;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    const auto logs = load_logs(a.logs, a.manifest, a.format);
    std::vector<ValidationReport> reports;
    bool ok = true;
    for (const auto& log : logs) {
        reports.push_back(validate_session(log));
        ok = ok && reports.back().conformant();
    }
    const std::string json = report_to_json(reports);
    if (!a.report.empty()) write_file(a.report, json);
    out << json;
    return ok ? kOk : kRejected;
}

struct SimulateArgs {
    std::uint64_t seed = 0;
    int learners = 24;
    int group_size = 4;
    int sessions = 8;
    std::vector<std::string> archetypes{"organizer", "verifier", "independent"};
    int length_budget = 60;
    std::string format = "csv";
    std::string out;
};

SimulationSpec spec_of(const SimulateArgs& a) {
    SimulationSpec spec;
    spec.seed = a.seed;
    spec.learners = a.learners;
    spec.group_size = a.group_size;
    spec.sessions = a.sessions;
    spec.length_budget = a.length_budget;
    spec.archetypes.clear();
    for (const auto& name : a.archetypes) {
        auto p = parse_profile(name);
        if (!p) throw Failure{kError, "unknown archetype '" + name + "'"};
        spec.archetypes.push_back(*p);
    }
    return spec;
}

/// Writes the simulated logs, manifest and truth; returns the log path.
fs::path write_simulation(const Simulation& sim, const fs::path& dir, LogFormat format) {
    const fs::path log_path = dir / (format == LogFormat::Jsonl ? "sessions.jsonl" : "sessions.csv");
    write_file(log_path, write_session_log(sim.logs, format));
    write_file(dir / "manifest.json", write_manifest(manifest_of(sim.logs)));
    write_file(dir / "truth.json", truth_to_json(sim.truth));
    return log_path;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    auto format = parse_log_format(a.format);
    if (!format) throw Failure{kError, "unknown log format '" + a.format + "'"};
    const auto sim = simulate(spec_of(a));
    const fs::path dir = output_dir(a.out);
    const fs::path log_path = write_simulation(sim, dir, *format);
    out << "wrote " << sim.logs.size() << " sessions for " << sim.truth.size() << " learners to "
        << log_path.string() << "\n";
    return kOk;
}

struct ProfileArgs {
    std::vector<std::string> logs;
    std::string manifest;
    std::string format;
    std::string fis = "default";
    std::string out;
};

struct ProfileOutputs {
    std::vector<ProfileRow> rows;
    std::vector<Mtslp> series;
};

ProfileOutputs write_profiles(const std::vector<SessionLog>& logs, const std::string& fis, const fs::path& dir) {
    const FuzzySystems systems = load_fuzzy_systems(fis);
    ProfileOutputs o;
    o.rows = profile_sessions(logs, systems);
    o.series = build_mtslps(o.rows);
    const std::string header = provenance_line("profile fis=" + fuzzy_systems_to_json(systems));
    write_file(dir / "profiles.csv", write_profiles_csv(o.rows, systems, header));
    std::vector<LearnerId> learners;
    for (const auto& m : o.series) {
        write_file(dir / "mtslp" / (m.learner + ".csv"), write_mtslp_csv(m, header));
        learners.push_back(m.learner);
    }
    write_file(dir / "features.csv", write_features_csv(learners, mean_features(o.series), header));
    return o;
}

int cmd_profile(const ProfileArgs& a, std::ostream& out) {
    const auto logs = load_logs(a.logs, a.manifest, a.format);
    const fs::path dir = output_dir(a.out);
    const auto o = write_profiles(logs, a.fis, dir);
    out << "profiled " << o.rows.size() << " learner-sessions, " << o.series.size() << " learners\n";
    return kOk;
}

struct SimilarityArgs {
    std::string mtslp;
    std::string method = "eros";
    std::size_t k = 5;
    std::string pcas_norm = "k";
    bool raw_weights = false;
    bool strict = false;
    std::string out;
};

SimilarityConfig similarity_config(const SimilarityArgs& a) {
    SimilarityConfig cfg;
    auto m = parse_similarity_method(a.method);
    if (!m) throw Failure{kError, "unknown similarity method '" + a.method + "'"};
    cfg.method = *m;
    if (a.k < 1 || a.k > kIndexCount) throw Failure{kError, "--k must be in 1..5"};
    cfg.k = a.k;
    if (a.pcas_norm == "k") {
        cfg.pcas_norm = PcasNormalization::ByK;
    } else if (a.pcas_norm == "vars") {
        cfg.pcas_norm = PcasNormalization::ByVariableCount;
    } else {
        throw Failure{kError, "--pcas-norm must be 'k' or 'vars'"};
    }
    cfg.raw_eigenvalue_weights = a.raw_weights;
    cfg.strict = a.strict;
    return cfg;
}

std::string similarity_fingerprint(const SimilarityConfig& c) {
    return "similarity method=" + std::string(method_name(c.method)) + " k=" + std::to_string(c.k) +
           " norm=" + (c.pcas_norm == PcasNormalization::ByK ? "k" : "vars") +
           " raw=" + std::to_string(c.raw_eigenvalue_weights) + " strict=" + std::to_string(c.strict);
}

fs::path write_similarity(const std::vector<Mtslp>& series, const SimilarityConfig& cfg, const fs::path& dir,
                          std::ostream& err) {
    const auto result = similarity_matrix(series, cfg);
    for (const auto& n : result.excluded) err << "excluded " << n.learner << ": " << n.reason << "\n";
    for (const auto& n : result.degenerate) err << "note " << n.learner << ": " << n.reason << "\n";
    const fs::path path = dir / ("similarity_" + std::string(method_name(cfg.method)) + ".csv");
    write_file(path, write_similarity_csv(result.matrix, provenance_line(similarity_fingerprint(cfg))));
    return path;
}

int cmd_similarity(const SimilarityArgs& a, std::ostream& out, std::ostream& err) {
    const auto cfg = similarity_config(a);
    const auto series = load_mtslp_dir(a.mtslp);
    const auto path = write_similarity(series, cfg, output_dir(a.out), err);
    out << "wrote " << path.string() << "\n";
    return kOk;
}

struct ClusterArgs {
    std::string mtslp;
    std::string features;
    std::string similarity;
    std::string method = "hac";
    std::size_t k = 3;
    std::string linkage = "average";
    double m = 2.0;
    double beta = 1e-5;
    int max_iter = 100;
    std::optional<std::uint64_t> seed;
    std::string truth;
    std::string out;
};

struct ClusterInput {
    std::vector<LearnerId> learners;
    std::vector<Point> points;
    /// Set for similarity input: HAC runs on these distances directly.
    std::optional<DistanceMatrix> distances;
};

ClusterInput load_cluster_input(const ClusterArgs& a) {
    const int given = !a.mtslp.empty() + !a.features.empty() + !a.similarity.empty();
    if (given != 1) throw Failure{kError, "give exactly one of --mtslp, --features, --similarity"};
    ClusterInput in;
    try {
        if (!a.mtslp.empty()) {
            const auto series = load_mtslp_dir(a.mtslp);
            for (const auto& s : series) in.learners.push_back(s.learner);
            in.points = mean_features(series);
        } else if (!a.features.empty()) {
            read_features_csv(read_file(a.features), in.learners, in.points);
        } else {
            const auto s = read_similarity_csv(read_file(a.similarity));
            in.learners = s.learners;
            in.points = dissimilarity_rows(s.values);
            in.distances = in.points;
        }
    } catch (const CsvError& e) {
        throw Failure{kError, e.what()};
    }
    return in;
}

std::string cluster_fingerprint(const ClusterArgs& a) {
    std::string s = "cluster method=" + a.method + " k=" + std::to_string(a.k);
    if (a.method == "hac") s += " linkage=" + a.linkage;
    if (a.method == "fcm") s += " m=" + format_double(a.m) + " beta=" + format_double(a.beta);
    if (a.method != "hac") s += " max_iter=" + std::to_string(a.max_iter) + " seed=" + std::to_string(*a.seed);
    s += a.similarity.empty() ? " input=features" : " input=similarity";
    return s;
}

struct ClusterOutcome {
    ClusterTable table;
    std::optional<std::string> dot;
};

ClusterOutcome run_clusterer(const ClusterArgs& a, const ClusterInput& in) {
    ClusterOutcome o;
    o.table.learners = in.learners;
    if (a.method == "hac") {
        auto linkage = parse_linkage(a.linkage);
        if (!linkage) throw Failure{kError, "unknown linkage '" + a.linkage + "'"};
        const auto tree = in.distances ? hac(*in.distances, *linkage) : hac_points(in.points, *linkage);
        o.table.labels = cut(tree, a.k);
        o.dot = dendrogram_to_dot(tree, in.learners);
    } else if (a.method == "kmeans") {
        KMeansOptions opt;
        opt.k = a.k;
        opt.seed = *a.seed;
        opt.max_iter = a.max_iter;
        o.table.labels = kmeans(in.points, opt).labels;
    } else {
        FcmOptions opt;
        opt.c = a.k;
        opt.m = a.m;
        opt.beta = a.beta;
        opt.max_iter = a.max_iter;
        opt.seed = *a.seed;
        const auto r = fcm(in.points, opt);
        o.table.memberships = r.memberships;
        o.table.labels = r.hard_labels();
    }
    return o;
}

void check_cluster_args(const ClusterArgs& a) {
    if (a.method != "hac" && a.method != "kmeans" && a.method != "fcm") {
        throw Failure{kError, "unknown clustering method '" + a.method + "'"};
    }
    if (a.method != "hac" && !a.seed) throw Failure{kError, "--seed is required for " + a.method};
    if (a.max_iter < 1) throw Failure{kError, "--max-iter must be positive"};
}

void write_cluster_outcome(const ClusterArgs& a, const ClusterOutcome& o, const fs::path& dir) {
    write_file(dir / ("clusters_" + a.method + ".csv"),
               write_clusters_csv(o.table, provenance_line(cluster_fingerprint(a))));
    if (o.dot) write_file(dir / "dendrogram.dot", *o.dot);
}

int cmd_cluster(const ClusterArgs& a, std::ostream& out) {
    check_cluster_args(a);
    const auto in = load_cluster_input(a);
    const auto o = run_clusterer(a, in);
    const fs::path dir = output_dir(a.out);
    write_cluster_outcome(a, o, dir);
    out << "wrote " << (dir / ("clusters_" + a.method + ".csv")).string() << "\n";
    if (!a.truth.empty()) {
        const auto truth = truth_from_json(read_file(a.truth));
        out << "ari " << format_double(adjusted_rand_index(o.table.labels, truth_labels(truth, in.learners)))
            << "\n";
    }
    return kOk;
}

struct ReportArgs {
    SimulateArgs sim;
    std::vector<std::string> logs;
    std::string manifest;
    std::string truth;
    std::string fis = "default";
    std::size_t k = 3;
    std::string out;
};

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
    const fs::path dir = output_dir(a.out);
    std::vector<SessionLog> logs;
    std::optional<ArchetypeMix> truth;
    if (a.logs.empty()) {
        const auto sim = simulate(spec_of(a.sim));
        write_simulation(sim, dir, LogFormat::Csv);
        logs = sim.logs;
        truth = sim.truth;
    } else {
        if (a.manifest.empty()) throw Failure{kError, "--manifest is required with --logs"};
        logs = load_logs(a.logs, a.manifest, "");
    }
    if (!a.truth.empty()) truth = truth_from_json(read_file(a.truth));

    nlohmann::ordered_json report;
    report["seed"] = a.sim.seed;
    std::vector<ValidationReport> validations;
    std::size_t conformant = 0;
    for (const auto& log : logs) {
        validations.push_back(validate_session(log));
        conformant += validations.back().conformant();
    }
    write_file(dir / "validation.json", report_to_json(validations));
    report["sessions"] = logs.size();
    report["conformant_sessions"] = conformant;

    const auto profiled = write_profiles(logs, a.fis, dir);
    report["learners"] = profiled.series.size();

    for (const char* method : {"eros", "pcas"}) {
        SimilarityArgs s;
        s.method = method;
        try {
            write_similarity(profiled.series, similarity_config(s), dir, err);
        } catch (const IneligibleLearners& e) {
            err << method << ": " << e.what() << "\n";
        }
    }

    ClusterInput in;
    for (const auto& m : profiled.series) in.learners.push_back(m.learner);
    in.points = mean_features(profiled.series);
    auto ari = nlohmann::ordered_json::object();
    for (const char* method : {"hac", "kmeans", "fcm"}) {
        ClusterArgs c;
        c.method = method;
        c.k = a.k;
        c.seed = a.sim.seed;
        c.features = "features.csv";
        const auto o = run_clusterer(c, in);
        write_cluster_outcome(c, o, dir);
        if (truth) ari[method] = adjusted_rand_index(o.table.labels, truth_labels(*truth, in.learners));
    }
    if (truth) report["ari"] = ari;
    const std::string json = report.dump(2) + "\n";
    write_file(dir / "report.json", json);
    out << json;
    return conformant == logs.size() ? kOk : kRejected;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learner profiling from speech-act logs of collaborative sessions", "lprof"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "Check session logs against the session protocol");
    validate->add_option("logs", va.logs, "Log files (.csv or .jsonl)")->required();
    validate->add_option("--manifest", va.manifest, "Roster and leader per session (JSON)")->required();
    validate->add_option("--format", va.format, "csv or jsonl; default from the file extension");
    validate->add_option("--report", va.report, "Also write the JSON report here");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Generate protocol-conformant logs from learner archetypes");
    sim->add_option("--seed", sa.seed, "Random seed")->required();
    sim->add_option("--learners", sa.learners, "Number of learners")->capture_default_str();
    sim->add_option("--group-size", sa.group_size, "Learners per group")->capture_default_str();
    sim->add_option("--sessions", sa.sessions, "Sessions per group")->capture_default_str();
    sim->add_option("--archetypes", sa.archetypes, "Archetypes assigned round-robin")->delimiter(',');
    sim->add_option("--length-budget", sa.length_budget, "Soft cap on records per session")->capture_default_str();
    sim->add_option("--format", sa.format, "csv or jsonl")->capture_default_str();
    sim->add_option("--out", sa.out, "Output directory (default $LPROF_OUT_DIR or .)");

    ProfileArgs pa;
    auto* prof = app.add_subcommand("profile", "Fuzzy profile per learner and session, plus per-learner series");
    prof->add_option("logs", pa.logs, "Log files (.csv or .jsonl)")->required();
    prof->add_option("--manifest", pa.manifest, "Roster and leader per session (JSON)")->required();
    prof->add_option("--format", pa.format, "csv or jsonl; default from the file extension");
    prof->add_option("--fis", pa.fis, "'default' or a fuzzy system JSON file")->capture_default_str();
    prof->add_option("--out", pa.out, "Output directory (default $LPROF_OUT_DIR or .)");

    SimilarityArgs ya;
    auto* simil = app.add_subcommand("similarity", "Learner-to-learner similarity of profile series");
    simil->add_option("--mtslp", ya.mtslp, "Directory of per-learner series CSVs")->required();
    simil->add_option("--method", ya.method, "eros or pcas")->capture_default_str();
    simil->add_option("--k", ya.k, "Components compared by pcas")->capture_default_str();
    simil->add_option("--pcas-norm", ya.pcas_norm, "Divide pcas by k or by the variable count (vars)")
        ->capture_default_str();
    simil->add_flag("--raw-weights", ya.raw_weights, "Eros weights from raw eigenvalues");
    simil->add_flag("--strict", ya.strict, "Exclude learners with zero covariance");
    simil->add_option("--out", ya.out, "Output directory (default $LPROF_OUT_DIR or .)");

    ClusterArgs ca;
    auto* clus = app.add_subcommand("cluster", "Cluster learners by profile features or similarity");
    clus->add_option("--mtslp", ca.mtslp, "Directory of series; clusters their session means");
    clus->add_option("--features", ca.features, "Feature CSV (learner + five indices)");
    clus->add_option("--similarity", ca.similarity, "Similarity CSV; clusters 1 - similarity");
    clus->add_option("--method", ca.method, "hac, kmeans or fcm")->capture_default_str();
    clus->add_option("--k", ca.k, "Number of clusters")->capture_default_str();
    clus->add_option("--linkage", ca.linkage, "single, complete or average")->capture_default_str();
    clus->add_option("--m", ca.m, "Fuzzy c-means exponent")->capture_default_str();
    clus->add_option("--beta", ca.beta, "Fuzzy c-means center tolerance")->capture_default_str();
    clus->add_option("--max-iter", ca.max_iter, "Iteration cap")->capture_default_str();
    clus->add_option("--seed", ca.seed, "Random seed (kmeans, fcm)");
    clus->add_option("--truth", ca.truth, "Archetype JSON; prints the adjusted Rand index");
    clus->add_option("--out", ca.out, "Output directory (default $LPROF_OUT_DIR or .)");

    ReportArgs ra;
    auto* rep = app.add_subcommand("report", "Simulate (or load), validate, profile, compare and cluster");
    rep->add_option("--seed", ra.sim.seed, "Random seed")->required();
    rep->add_option("--learners", ra.sim.learners, "Number of simulated learners")->capture_default_str();
    rep->add_option("--group-size", ra.sim.group_size, "Learners per group")->capture_default_str();
    rep->add_option("--sessions", ra.sim.sessions, "Sessions per group")->capture_default_str();
    rep->add_option("--archetypes", ra.sim.archetypes, "Archetypes assigned round-robin")->delimiter(',');
    rep->add_option("--logs", ra.logs, "Existing log files instead of a simulation");
    rep->add_option("--manifest", ra.manifest, "Manifest for --logs");
    rep->add_option("--truth", ra.truth, "Archetype JSON for --logs");
    rep->add_option("--fis", ra.fis, "'default' or a fuzzy system JSON file")->capture_default_str();
    rep->add_option("--k", ra.k, "Number of clusters")->capture_default_str();
    rep->add_option("--out", ra.out, "Output directory (default $LPROF_OUT_DIR or .)");

    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }

    try {
        if (*validate) return cmd_validate(va, out);
        if (*sim) return cmd_simulate(sa, out);
        if (*prof) return cmd_profile(pa, out);
        if (*simil) return cmd_similarity(ya, out, err);
        if (*clus) return cmd_cluster(ca, out);
        if (*rep) return cmd_report(ra, out, err);
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const IneligibleLearners& e) {
        err << "error: " << e.what() << "\n";
        return kRejected;
    } catch (const ClusteringError& e) {
        err << "error: " << e.what() << "\n";
        return kRejected;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}

}  // namespace lprof::cli
