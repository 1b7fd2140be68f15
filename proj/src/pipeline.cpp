#include "lprof/pipeline.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "lprof/random.hpp"

namespace lprof {

std::vector<ProfileRow> profile_sessions(const std::vector<SessionLog>& logs, const FuzzySystems& systems,
                                         const GridTable& grid) {
    std::vector<ProfileRow> rows;
    for (const auto& log : logs) {
        const double avg = group_average(log);
        if (!(avg > 0.0)) continue;
        for (const auto& learner : log.roster) {
            ProfileRow row;
            row.session_id = log.session_id;
            row.learner = learner;
            row.coefficients = compute_coefficients(tally_acts(log, learner, grid), avg);
            row.vector = evaluate_learner(systems, row.coefficients);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<Mtslp> build_mtslps(const std::vector<ProfileRow>& rows) {
    std::map<LearnerId, std::vector<SessionIndices>> by_learner;
    for (const auto& r : rows) by_learner[r.learner].push_back({r.session_id, r.vector.indices()});
    std::vector<Mtslp> out;
    out.reserve(by_learner.size());
    for (const auto& [learner, sessions] : by_learner) out.push_back(build_mtslp(learner, sessions));
    return out;
}

std::vector<Point> mean_features(const std::vector<Mtslp>& series) {
    std::vector<Point> points;
    points.reserve(series.size());
    for (const auto& m : series) {
        const Row5 mean = session_mean(m);
        points.emplace_back(mean.begin(), mean.end());
    }
    return points;
}

std::vector<Point> dissimilarity_rows(const std::vector<std::vector<double>>& similarity) {
    std::vector<Point> rows = similarity;
    for (auto& row : rows) {
        for (auto& x : row) x = 1.0 - x;
    }
    return rows;
}

namespace {

std::string numbered(char prefix, int value, int width) {
    std::string digits_str = std::to_string(value);
    if (static_cast<int>(digits_str.size()) < width) {
        digits_str.insert(0, static_cast<std::size_t>(width) - digits_str.size(), '0');
    }
    return prefix + digits_str;
}

int digits(int n) {
    int d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

}  // namespace

Simulation simulate(const SimulationSpec& spec) {
    if (spec.learners < 1) throw std::invalid_argument("simulate: need at least one learner");
    if (spec.group_size < 1) throw std::invalid_argument("simulate: group size must be positive");
    if (spec.sessions < 1) throw std::invalid_argument("simulate: need at least one session");
    if (spec.archetypes.empty()) throw std::invalid_argument("simulate: archetype mix is empty");

    Simulation sim;
    std::vector<LearnerId> learners;
    const int width = std::max(2, digits(spec.learners));
    for (int i = 0; i < spec.learners; ++i) {
        learners.push_back(numbered('L', i + 1, width));
        sim.truth[learners.back()] = spec.archetypes[static_cast<std::size_t>(i) % spec.archetypes.size()];
    }

    Rng rng(spec.seed);
    const int session_width = std::max(2, digits(spec.sessions));
    int group = 0;
    for (int start = 0; start < spec.learners; start += spec.group_size) {
        ++group;
        const auto first = learners.begin() + start;
        const auto last = learners.begin() + std::min(spec.learners, start + spec.group_size);
        const std::vector<LearnerId> roster(first, last);
        for (int s = 0; s < spec.sessions; ++s) {
            GeneratorOptions opt;
            opt.seed = rng.bits();
            opt.session_id = "g" + std::to_string(group) + numbered('s', s + 1, session_width);
            opt.roster = roster;
            opt.leader = roster[static_cast<std::size_t>(s) % roster.size()];
            opt.length_budget = spec.length_budget;
            for (const auto& id : roster) opt.archetypes[id] = sim.truth[id];
            sim.logs.push_back(generate_session(opt));
        }
    }
    return sim;
}

std::string truth_to_json(const ArchetypeMix& truth) {
    nlohmann::ordered_json learners = nlohmann::ordered_json::object();
    for (const auto& [id, p] : truth) learners[id] = std::string(profile_name(p));
    nlohmann::ordered_json j;
    j["learners"] = learners;
    return j.dump(2) + "\n";
}

ArchetypeMix truth_from_json(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("truth: ") + e.what());
    }
    if (!j.is_object() || !j.contains("learners") || !j["learners"].is_object()) {
        throw std::invalid_argument("truth: expected an object with a \"learners\" object");
    }
    ArchetypeMix truth;
    for (const auto& [id, v] : j["learners"].items()) {
        if (!v.is_string()) throw std::invalid_argument("truth: archetype of '" + id + "' is not a string");
        auto p = parse_profile(v.get<std::string>());
        if (!p) throw std::invalid_argument("truth: unknown archetype '" + v.get<std::string>() + "'");
        truth[id] = *p;
    }
    return truth;
}

std::vector<int> truth_labels(const ArchetypeMix& truth, const std::vector<LearnerId>& learners) {
    std::map<Profile, int> ids;
    std::vector<int> labels;
    labels.reserve(learners.size());
    for (const auto& id : learners) {
        auto it = truth.find(id);
        if (it == truth.end()) throw std::invalid_argument("truth: no archetype for learner '" + id + "'");
        auto [slot, _] = ids.try_emplace(it->second, static_cast<int>(ids.size()));
        labels.push_back(slot->second);
    }
    return labels;
}

}  // namespace lprof
