#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lprof/acts.hpp"
#include "lprof/clustering.hpp"
#include "lprof/coefficients.hpp"
#include "lprof/fuzzy.hpp"
#include "lprof/mtslp.hpp"
#include "lprof/session_fsm.hpp"

namespace lprof {

/// Profile of one learner in one session.
struct ProfileRow {
    std::string session_id;
    LearnerId learner;
    ProfileCoefficients coefficients;
    FuzzyProfileVector vector;
};

/// One row per (session, roster member), sessions in input order and
/// members in roster order. A session in which nobody acted yields no rows.
std::vector<ProfileRow> profile_sessions(const std::vector<SessionLog>& logs, const FuzzySystems& systems,
                                         const GridTable& grid = GridTable::hybrid());

/// One series per learner, learners sorted by id, sessions in row order.
std::vector<Mtslp> build_mtslps(const std::vector<ProfileRow>& rows);

/// Session-mean feature vector per series.
std::vector<Point> mean_features(const std::vector<Mtslp>& series);

/// Rows of 1 - similarity, used as points or as a distance matrix.
std::vector<Point> dissimilarity_rows(const std::vector<std::vector<double>>& similarity);

struct SimulationSpec {
    std::uint64_t seed = 0;
    int learners = 24;
    int group_size = 4;
    int sessions = 8;
    /// Assigned round-robin by learner index.
    std::vector<Profile> archetypes = {Profile::Organizer, Profile::Verifier, Profile::Independent};
    int length_budget = 60;
};

struct Simulation {
    std::vector<SessionLog> logs;
    /// Learner -> archetype the generator used.
    ArchetypeMix truth;
};

/// Learners L01.. split into fixed consecutive groups; each group meets
/// `sessions` times with the leader rotating through its roster. Session
/// ids read g<group>s<session>. Throws std::invalid_argument on a bad spec.
Simulation simulate(const SimulationSpec& spec);

std::string truth_to_json(const ArchetypeMix& truth);
/// Throws std::invalid_argument on malformed input or unknown archetypes.
ArchetypeMix truth_from_json(std::string_view json_text);

/// Labels of `learners` numbered by first appearance of each archetype.
/// Throws std::invalid_argument if a learner is missing from `truth`.
std::vector<int> truth_labels(const ArchetypeMix& truth, const std::vector<LearnerId>& learners);

}  // namespace lprof
