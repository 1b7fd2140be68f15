#include "lprof/session_fsm.hpp"

#include <algorithm>

#include <json.hpp>

namespace lprof {

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::Exposition: return "Exposition";
        case Phase::RoundTable: return "RoundTable";
        case Phase::LeaderConclusion: return "LeaderConclusion";
        case Phase::Evaluation: return "Evaluation";
        case Phase::ClarificationRequested: return "ClarificationRequested";
        case Phase::Solved: return "Solved";
        case Phase::TimeoutAdopted: return "TimeoutAdopted";
    }
    return "?";
}

IllegalTransition::IllegalTransition(Phase phase, SpeechAct act, LearnerId actor, const std::string& why)
    : std::runtime_error(std::string(phase_name(phase)) + ": " + std::string(act_name(act)) + " by " +
                         actor + " rejected (" + why + ")"),
      phase_(phase),
      act_(act),
      actor_(std::move(actor)) {}

namespace {

/// Next roster member after `after` (or the first if absent), skipping `excluded`.
std::optional<LearnerId> next_speaker(const std::vector<LearnerId>& roster, const LearnerId& excluded,
                                      const std::optional<LearnerId>& after) {
    std::size_t start = 0;
    if (after) {
        auto it = std::find(roster.begin(), roster.end(), *after);
        start = it == roster.end() ? roster.size() : static_cast<std::size_t>(it - roster.begin()) + 1;
    }
    for (std::size_t i = start; i < roster.size(); ++i) {
        if (roster[i] != excluded) return roster[i];
    }
    return std::nullopt;
}

SessionState open_round_table(const SessionLog& log) {
    SessionState s;
    s.turn = next_speaker(log.roster, log.leader, std::nullopt);
    s.phase = s.turn ? Phase::RoundTable : Phase::LeaderConclusion;
    return s;
}

SessionState open_evaluation(std::int64_t proposal, const LearnerId& initiator, const SessionLog& log) {
    SessionState s;
    s.turn = next_speaker(log.roster, initiator, std::nullopt);
    if (!s.turn) {
        s.phase = Phase::Solved;
        return s;
    }
    s.phase = Phase::Evaluation;
    s.pending_proposal = proposal;
    s.initiator = initiator;
    return s;
}

}  // namespace

SessionState fsm_step(const SessionState& state, const SpeechActRecord& r, const SessionLog& log) {
    auto reject = [&](const std::string& why) -> IllegalTransition {
        return IllegalTransition(state.phase, r.act, r.actor, why);
    };

    if (is_terminal(state.phase)) throw reject("session already closed");
    if (!log.in_roster(r.actor)) throw reject("actor not in roster");
    if (r.reply_to) {
        auto target = log.find_seq(*r.reply_to);
        if (!target || log.records[*target].seq >= r.seq) {
            throw reject("reply_to does not name an earlier record");
        }
    }
    if (r.timeout) {
        if (r.actor != log.leader) throw reject("only the leader may conclude by timeout");
        if (r.act != SpeechAct::Propose) throw reject("timeout adoption must be a Propose");
        if (state.phase != Phase::Evaluation) throw reject("timeout adoption needs a pending proposal");
        SessionState next;
        next.phase = Phase::TimeoutAdopted;
        return next;
    }

    switch (state.phase) {
        case Phase::Exposition: {
            if (r.actor != log.leader) throw reject("only the leader exposes the problem");
            if (r.act != SpeechAct::Propose || r.reply_to) throw reject("exposition must be a fresh Propose");
            return open_round_table(log);
        }
        case Phase::RoundTable: {
            if (r.actor != state.turn) throw reject("not this member's turn (expected " + *state.turn + ")");
            if (r.act == SpeechAct::Propose) throw reject("proposals wait for the leader's conclusion");
            SessionState next = state;
            next.turn = next_speaker(log.roster, log.leader, state.turn);
            if (!next.turn) next.phase = Phase::LeaderConclusion;
            return next;
        }
        case Phase::LeaderConclusion: {
            if (r.act != SpeechAct::Propose) throw reject("a proposal must be tabled");
            return open_evaluation(r.seq, r.actor, log);
        }
        case Phase::Evaluation: {
            if (r.actor != state.turn) throw reject("not this evaluator's turn (expected " + *state.turn + ")");
            if (r.reply_to && r.reply_to != state.pending_proposal) {
                throw reject("evaluation must answer the pending proposal");
            }
            switch (r.act) {
                case SpeechAct::Approve: {
                    SessionState next = state;
                    next.turn = next_speaker(log.roster, *state.initiator, state.turn);
                    if (!next.turn) {
                        next = SessionState{};
                        next.phase = Phase::Solved;
                    }
                    return next;
                }
                case SpeechAct::Disapprove:
                    return open_round_table(log);
                case SpeechAct::Elucidate: {
                    SessionState next = state;
                    next.phase = Phase::ClarificationRequested;
                    next.clarification_request = r.seq;
                    next.turn = state.initiator;
                    return next;
                }
                default:
                    throw reject("evaluators approve, disapprove or ask for clarification");
            }
        }
        case Phase::ClarificationRequested: {
            if (r.actor != state.initiator) throw reject("only the initiator answers a clarification request");
            if (r.act != SpeechAct::Decline && r.act != SpeechAct::Elucidate &&
                r.act != SpeechAct::Demonstrate) {
                throw reject("initiator must decline, elucidate or demonstrate");
            }
            if (r.reply_to && r.reply_to != state.clarification_request) {
                throw reject("answer must reply to the clarification request");
            }
            return open_evaluation(*state.pending_proposal, *state.initiator, log);
        }
        case Phase::Solved:
        case Phase::TimeoutAdopted:
            break;
    }
    throw reject("session already closed");
}

ValidationReport validate_session(const SessionLog& log) {
    ValidationReport report;
    report.session_id = log.session_id;
    SessionState state;
    std::optional<std::int64_t> last_seq;
    for (const auto& r : log.records) {
        if (last_seq && r.seq <= *last_seq) {
            report.findings.push_back({r.seq, state.phase, "seq not strictly increasing"});
            continue;
        }
        last_seq = r.seq;
        try {
            state = fsm_step(state, r, log);
        } catch (const IllegalTransition& e) {
            report.findings.push_back({r.seq, state.phase, e.what()});
        }
    }
    report.final_phase = state.phase;
    if (!is_terminal(state.phase)) {
        report.findings.push_back(
            {std::nullopt, state.phase,
             "log ends in non-terminal phase " + std::string(phase_name(state.phase))});
    }
    return report;
}

std::string report_to_json(const std::vector<ValidationReport>& reports) {
    nlohmann::ordered_json out;
    bool all_ok = true;
    auto sessions = nlohmann::ordered_json::array();
    for (const auto& rep : reports) {
        all_ok = all_ok && rep.conformant();
        auto findings = nlohmann::ordered_json::array();
        for (const auto& f : rep.findings) {
            findings.push_back({{"seq", f.seq ? nlohmann::ordered_json(*f.seq) : nlohmann::ordered_json()},
                                {"phase", phase_name(f.phase)},
                                {"message", f.message}});
        }
        sessions.push_back({{"session_id", rep.session_id},
                            {"conformant", rep.conformant()},
                            {"final_phase", phase_name(rep.final_phase)},
                            {"findings", std::move(findings)}});
    }
    out["conformant"] = all_ok;
    out["sessions"] = std::move(sessions);
    return out.dump(2) + '\n';
}

}  // namespace lprof
