#include "lprof/acts.hpp"

#include <algorithm>
#include <unordered_map>

namespace lprof {

char act_code(SpeechAct act) {
    switch (act) {
        case SpeechAct::Propose: return 'P';
        case SpeechAct::Approve: return 'A';
        case SpeechAct::Disapprove: return 'D';
        case SpeechAct::Decline: return 'C';
        case SpeechAct::Elucidate: return 'E';
        case SpeechAct::StandMute: return 'S';
        case SpeechAct::Demonstrate: return 'M';
    }
    return '?';
}

std::string_view act_name(SpeechAct act) {
    switch (act) {
        case SpeechAct::Propose: return "Propose";
        case SpeechAct::Approve: return "Approve";
        case SpeechAct::Disapprove: return "Disapprove";
        case SpeechAct::Decline: return "Decline";
        case SpeechAct::Elucidate: return "Elucidate";
        case SpeechAct::StandMute: return "StandMute";
        case SpeechAct::Demonstrate: return "Demonstrate";
    }
    return "?";
}

std::optional<SpeechAct> parse_act(std::string_view token) {
    if (token.size() != 1) return std::nullopt;
    for (SpeechAct a : kAllActs) {
        if (act_code(a) == token[0]) return a;
    }
    return std::nullopt;
}

std::string_view profile_name(Profile p) {
    switch (p) {
        case Profile::Organizer: return "organizer";
        case Profile::Verifier: return "verifier";
        case Profile::Seeker: return "seeker";
        case Profile::Independent: return "independent";
    }
    return "?";
}

std::optional<Profile> parse_profile(std::string_view name) {
    for (Profile p : kProfiles) {
        if (profile_name(p) == name) return p;
    }
    return std::nullopt;
}

GridTable GridTable::hybrid() {
    using enum SpeechAct;
    GridTable g;
    g.profiles[index_of(Profile::Organizer)] = {{Propose}, {Elucidate}, {Approve, Demonstrate}, {}};
    g.profiles[index_of(Profile::Verifier)] = {
        {Approve, Demonstrate}, {Disapprove, Elucidate}, {}, {StandMute, Decline}};
    g.profiles[index_of(Profile::Seeker)] = {{}, {Elucidate}, {Demonstrate}, {}};
    g.profiles[index_of(Profile::Independent)] = {{}, {StandMute}, {}, {StandMute, Decline}};
    g.orientation_pos = {Propose, Demonstrate};
    g.orientation_neg = {Elucidate, Decline};
    g.decision_pos = {Approve};
    g.decision_neg = {Disapprove, StandMute};
    return g;
}

bool SessionLog::in_roster(const LearnerId& id) const {
    return std::find(roster.begin(), roster.end(), id) != roster.end();
}

std::optional<std::size_t> SessionLog::find_seq(std::int64_t seq) const {
    auto it = std::lower_bound(records.begin(), records.end(), seq,
                               [](const SpeechActRecord& r, std::int64_t s) { return r.seq < s; });
    if (it != records.end() && it->seq == seq) {
        return static_cast<std::size_t>(it - records.begin());
    }
    // Records are seq-sorted after parsing; fall back to a scan for hand-built logs.
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].seq == seq) return i;
    }
    return std::nullopt;
}

std::string_view log_error_kind_name(LogErrorKind kind) {
    switch (kind) {
        case LogErrorKind::Malformed: return "Malformed";
        case LogErrorKind::UnknownActCode: return "UnknownActCode";
        case LogErrorKind::DuplicateSeq: return "DuplicateSeq";
        case LogErrorKind::DanglingReplyTo: return "DanglingReplyTo";
        case LogErrorKind::ActorNotInRoster: return "ActorNotInRoster";
        case LogErrorKind::UnknownSession: return "UnknownSession";
        case LogErrorKind::BadManifest: return "BadManifest";
    }
    return "?";
}

namespace {
std::string format_log_error(LogErrorKind kind, std::size_t row, const std::string& what) {
    std::string out(log_error_kind_name(kind));
    if (row > 0) out += " at row " + std::to_string(row);
    out += ": " + what;
    return out;
}
}  // namespace

LogError::LogError(LogErrorKind kind, std::size_t row, const std::string& what)
    : std::runtime_error(format_log_error(kind, row, what)), kind_(kind), row_(row) {}

ActCounts& ActCounts::operator+=(const ActCounts& o) {
    orientation_pos += o.orientation_pos;
    orientation_neg += o.orientation_neg;
    decision_pos += o.decision_pos;
    decision_neg += o.decision_neg;
    for (std::size_t p = 0; p < 4; ++p) {
        intervention[p] += o.intervention[p];
        reaction[p] += o.reaction[p];
    }
    total += o.total;
    return *this;
}

ActCounts operator+(ActCounts a, const ActCounts& b) { return a += b; }

ActCounts tally_acts(const SessionLog& log, const LearnerId& learner, const GridTable& grid) {
    if (!log.in_roster(learner)) {
        throw std::invalid_argument("learner '" + learner + "' is not in the roster of session " +
                                    log.session_id);
    }

    std::unordered_map<std::int64_t, const SpeechActRecord*> by_seq;
    by_seq.reserve(log.records.size());
    for (const auto& r : log.records) by_seq.emplace(r.seq, &r);

    ActCounts c;
    for (const auto& r : log.records) {
        if (r.actor == learner) {
            ++c.total;
            c.orientation_pos += grid.orientation_pos.contains(r.act);
            c.orientation_neg += grid.orientation_neg.contains(r.act);
            c.decision_pos += grid.decision_pos.contains(r.act);
            c.decision_neg += grid.decision_neg.contains(r.act);
            if (!r.reply_to) {
                for (Profile p : kProfiles) {
                    const auto& sets = grid[p];
                    c.intervention[index_of(p)] +=
                        sets.intervention_pos.contains(r.act) + sets.intervention_neg.contains(r.act);
                }
            }
            continue;
        }
        if (!r.reply_to) continue;
        auto target = by_seq.find(*r.reply_to);
        if (target == by_seq.end() || target->second->actor != learner) continue;
        for (Profile p : kProfiles) {
            const auto& sets = grid[p];
            c.reaction[index_of(p)] +=
                sets.reaction_pos.contains(r.act) + sets.reaction_neg.contains(r.act);
        }
    }
    return c;
}

}  // namespace lprof
