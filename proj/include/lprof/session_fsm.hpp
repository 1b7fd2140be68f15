#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lprof/acts.hpp"

namespace lprof {

/// Phases of a leader-coordinated collaborative session.
///
///   Exposition        leader states the problem (Propose)
///   RoundTable        every other member, in roster order, gives one opinion
///                     (any act except Propose; StandMute passes the turn)
///   LeaderConclusion  a member (leader included) tables a Propose
///   Evaluation        the other members answer in roster order:
///                     Approve, Disapprove (-> new RoundTable) or
///                     Elucidate (-> ClarificationRequested);
///                     the leader may adopt by timeout at any point
///   ClarificationRequested
///                     the initiator answers with Decline, Elucidate or
///                     Demonstrate, then evaluation restarts
///   Solved, TimeoutAdopted  terminal
enum class Phase {
    Exposition,
    RoundTable,
    LeaderConclusion,
    Evaluation,
    ClarificationRequested,
    Solved,
    TimeoutAdopted,
};

std::string_view phase_name(Phase p);
constexpr bool is_terminal(Phase p) { return p == Phase::Solved || p == Phase::TimeoutAdopted; }

struct SessionState {
    Phase phase = Phase::Exposition;
    /// Set exactly in Evaluation and ClarificationRequested.
    std::optional<std::int64_t> pending_proposal;
    /// Member expected to speak next (RoundTable, Evaluation, ClarificationRequested).
    std::optional<LearnerId> turn;
    std::optional<LearnerId> initiator;
    std::optional<std::int64_t> clarification_request;

    bool operator==(const SessionState&) const = default;
};

class IllegalTransition : public std::runtime_error {
public:
    IllegalTransition(Phase phase, SpeechAct act, LearnerId actor, const std::string& why);

    Phase phase() const { return phase_; }
    SpeechAct act() const { return act_; }
    const LearnerId& actor() const { return actor_; }

private:
    Phase phase_;
    SpeechAct act_;
    LearnerId actor_;
};

/// Advances the protocol by one record. `log` supplies roster, leader and
/// earlier records for reply_to resolution. Throws IllegalTransition.
SessionState fsm_step(const SessionState& state, const SpeechActRecord& record,
                      const SessionLog& log);

struct Finding {
    /// Offending record; absent for end-of-log findings.
    std::optional<std::int64_t> seq;
    Phase phase = Phase::Exposition;
    std::string message;
};

struct ValidationReport {
    std::string session_id;
    std::vector<Finding> findings;
    Phase final_phase = Phase::Exposition;

    bool conformant() const { return findings.empty() && is_terminal(final_phase); }
};

/// Replays the log through fsm_step. Illegal records are reported and
/// skipped; a log that never reaches a terminal phase gets a final finding.
ValidationReport validate_session(const SessionLog& log);

std::string report_to_json(const std::vector<ValidationReport>& reports);

using ArchetypeMix = std::map<LearnerId, Profile>;

struct GeneratorOptions {
    std::uint64_t seed = 0;
    std::string session_id = "s1";
    std::vector<LearnerId> roster;
    LearnerId leader;
    /// Learners missing from the map behave as verifiers.
    ArchetypeMix archetypes;
    /// Soft cap on record count; once reached the session is driven to a
    /// timeout adoption as quickly as the protocol allows.
    int length_budget = 60;
};

/// Produces a protocol-conformant session whose act frequencies are biased
/// by each learner's archetype. Throws std::invalid_argument on an empty
/// roster or a leader outside it.
SessionLog generate_session(const GeneratorOptions& options);

}  // namespace lprof
