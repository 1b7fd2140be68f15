#include <algorithm>
#include <array>

#include "lprof/random.hpp"
#include "lprof/session_fsm.hpp"

namespace lprof {

namespace {

// Weight arrays are indexed like kAllActs: P, A, D, C, E, S, M.
using ActWeights = std::array<double, 7>;

struct Style {
    double propose_weight;
    ActWeights opinion;   // round-table contribution (P must stay 0)
    ActWeights clarify;   // answer to a clarification request (C, E, M only)
    double approve;       // evaluation response weights
    double disapprove;
    double elucidate;
    double appeal;        // multiplies peers' approve weight on this learner's proposals
    double answered;      // probability peers link their reply to this learner's record
};

// Organizer: proposes a lot and is answered positively.
// Verifier: approves and demonstrates, peers rarely react.
// Seeker: quiet, asks for clarification, gets answered with demonstrations.
// Independent: stands mute, left unanswered.
constexpr std::array<Style, 4> kStyles = {{
    {6.0, {0, 1.5, 1.0, 0.2, 1.0, 0.2, 3.0}, {0, 0, 0, 0.1, 0.4, 0, 1.0}, 0.60, 0.30, 0.10, 2.0, 0.90},
    {1.0, {0, 4.0, 2.0, 0.3, 0.5, 0.2, 3.0}, {0, 0, 0, 0.4, 0.6, 0, 0.6}, 0.55, 0.35, 0.10, 1.0, 0.15},
    {0.6, {0, 0.6, 0.3, 0.3, 5.0, 1.0, 0.6}, {0, 0, 0, 0.2, 0.8, 0, 0.4}, 0.40, 0.10, 0.50, 1.0, 0.90},
    {0.1, {0, 0.4, 0.2, 2.0, 0.3, 6.0, 0.1}, {0, 0, 0, 0.8, 0.2, 0, 0.1}, 0.85, 0.10, 0.05, 0.5, 0.05},
}};

SpeechAct act_at(std::size_t i) { return kAllActs[i]; }

}  // namespace

SessionLog generate_session(const GeneratorOptions& opt) {
    if (opt.roster.empty()) throw std::invalid_argument("generate_session: empty roster");
    if (std::find(opt.roster.begin(), opt.roster.end(), opt.leader) == opt.roster.end()) {
        throw std::invalid_argument("generate_session: leader not in roster");
    }

    Rng rng(opt.seed);
    SessionLog log;
    log.session_id = opt.session_id;
    log.roster = opt.roster;
    log.leader = opt.leader;

    auto style_of = [&](const LearnerId& id) -> const Style& {
        auto it = opt.archetypes.find(id);
        return kStyles[index_of(it == opt.archetypes.end() ? Profile::Verifier : it->second)];
    };
    auto actor_of = [&](std::int64_t seq) -> const LearnerId& {
        return log.records[*log.find_seq(seq)].actor;
    };

    SessionState state;
    std::int64_t topic = 0;  // record the current round table discusses
    std::int64_t next_seq = 1;
    // Hard stop well past the soft budget; the protocol always closes long before.
    const int hard_cap = std::max(opt.length_budget, 0) + 4 * static_cast<int>(opt.roster.size()) + 16;

    while (!is_terminal(state.phase) && static_cast<int>(log.records.size()) < hard_cap) {
        const bool over_budget = static_cast<int>(log.records.size()) >= opt.length_budget;
        SpeechActRecord r;
        r.session_id = opt.session_id;
        r.seq = next_seq;

        switch (state.phase) {
            case Phase::Exposition:
                r.actor = opt.leader;
                r.act = SpeechAct::Propose;
                break;
            case Phase::RoundTable: {
                r.actor = *state.turn;
                const auto& st = style_of(r.actor);
                r.act = act_at(rng.pick(st.opinion));
                const auto& topic_actor = actor_of(topic);
                if (topic_actor != r.actor && rng.chance(style_of(topic_actor).answered)) r.reply_to = topic;
                break;
            }
            case Phase::LeaderConclusion: {
                if (over_budget) {
                    r.actor = opt.leader;
                } else {
                    std::vector<double> w;
                    w.reserve(opt.roster.size());
                    for (const auto& id : opt.roster) w.push_back(style_of(id).propose_weight);
                    r.actor = opt.roster[rng.pick(w)];
                }
                r.act = SpeechAct::Propose;
                break;
            }
            case Phase::Evaluation: {
                if (over_budget) {
                    r.actor = opt.leader;
                    r.act = SpeechAct::Propose;
                    r.timeout = true;
                    break;
                }
                r.actor = *state.turn;
                const auto& st = style_of(r.actor);
                const auto& init = style_of(*state.initiator);
                const std::array<double, 3> w = {st.approve * init.appeal, st.disapprove, st.elucidate};
                constexpr std::array<SpeechAct, 3> acts = {SpeechAct::Approve, SpeechAct::Disapprove,
                                                           SpeechAct::Elucidate};
                r.act = acts[rng.pick(w)];
                if (rng.chance(init.answered)) r.reply_to = state.pending_proposal;
                break;
            }
            case Phase::ClarificationRequested: {
                r.actor = *state.initiator;
                r.act = act_at(rng.pick(style_of(r.actor).clarify));
                const auto& requester = actor_of(*state.clarification_request);
                if (rng.chance(style_of(requester).answered)) r.reply_to = state.clarification_request;
                break;
            }
            case Phase::Solved:
            case Phase::TimeoutAdopted:
                break;
        }

        log.records.push_back(r);
        state = fsm_step(state, log.records.back(), log);
        ++next_seq;
        if (r.act == SpeechAct::Propose && !r.timeout) topic = r.seq;
    }
    return log;
}

}  // namespace lprof
