#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lprof {

using LearnerId = std::string;

/// The seven speech acts a learner can emit in the structured chat tool.
/// Only the act code is ever analysed, never the message body.
enum class SpeechAct : std::uint8_t {
    Propose,
    Approve,
    Disapprove,
    Decline,
    Elucidate,
    StandMute,
    Demonstrate,
};

inline constexpr std::array<SpeechAct, 7> kAllActs = {
    SpeechAct::Propose,   SpeechAct::Approve,   SpeechAct::Disapprove, SpeechAct::Decline,
    SpeechAct::Elucidate, SpeechAct::StandMute, SpeechAct::Demonstrate,
};

/// Single-letter log code (P, A, D, C, E, S, M).
char act_code(SpeechAct act);
std::string_view act_name(SpeechAct act);
/// Accepts exactly one of the seven single-letter codes.
std::optional<SpeechAct> parse_act(std::string_view token);

/// Bit set over the seven acts.
class ActSet {
public:
    constexpr ActSet() = default;
    constexpr ActSet(std::initializer_list<SpeechAct> acts) {
        for (SpeechAct a : acts) bits_ |= bit(a);
    }

    constexpr bool contains(SpeechAct a) const { return (bits_ & bit(a)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool operator==(const ActSet&) const = default;

private:
    static constexpr std::uint8_t bit(SpeechAct a) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(a));
    }
    std::uint8_t bits_ = 0;
};

enum class Profile : std::uint8_t { Organizer, Verifier, Seeker, Independent };

inline constexpr std::array<Profile, 4> kProfiles = {
    Profile::Organizer, Profile::Verifier, Profile::Seeker, Profile::Independent};

std::string_view profile_name(Profile p);
std::optional<Profile> parse_profile(std::string_view name);

constexpr std::size_t index_of(Profile p) { return static_cast<std::size_t>(p); }

/// Act sets of one behavioural profile row of the hybrid grid.
struct ProfileActSets {
    ActSet intervention_pos;
    ActSet intervention_neg;
    ActSet reaction_pos;
    ActSet reaction_neg;
};

/// The hybrid interaction-analysis grid: which acts count as evidence for
/// each behavioural profile, plus the orientation/decision act sets of the
/// relational profile. Empty grid cells are empty sets.
struct GridTable {
    std::array<ProfileActSets, 4> profiles;
    ActSet orientation_pos;
    ActSet orientation_neg;
    ActSet decision_pos;
    ActSet decision_neg;

    const ProfileActSets& operator[](Profile p) const { return profiles[index_of(p)]; }

    static GridTable hybrid();
};

struct SpeechActRecord {
    std::string session_id;
    std::int64_t seq = 0;
    LearnerId actor;
    SpeechAct act = SpeechAct::Propose;
    /// Absent: an intervention. Present: a driven reaction to that record.
    std::optional<std::int64_t> reply_to;
    /// Leader-emitted adoption of the pending proposal when time runs out.
    bool timeout = false;

    bool operator==(const SpeechActRecord&) const = default;
};

/// One collaborative session. `roster` keeps manifest order; that order is
/// also the turn order used by the session protocol.
struct SessionLog {
    std::string session_id;
    std::vector<SpeechActRecord> records;
    std::vector<LearnerId> roster;
    LearnerId leader;

    bool in_roster(const LearnerId& id) const;
    /// Index into `records` of the record with the given seq, if any.
    std::optional<std::size_t> find_seq(std::int64_t seq) const;

    bool operator==(const SessionLog&) const = default;
};

struct SessionInfo {
    std::vector<LearnerId> roster;
    LearnerId leader;

    bool operator==(const SessionInfo&) const = default;
};

/// session_id -> roster and leader.
using Manifest = std::map<std::string, SessionInfo>;

enum class LogErrorKind {
    Malformed,
    UnknownActCode,
    DuplicateSeq,
    DanglingReplyTo,
    ActorNotInRoster,
    UnknownSession,
    BadManifest,
};

std::string_view log_error_kind_name(LogErrorKind kind);

class LogError : public std::runtime_error {
public:
    LogError(LogErrorKind kind, std::size_t row, const std::string& what);

    LogErrorKind kind() const { return kind_; }
    /// 1-based input row/line; 0 when not tied to a row.
    std::size_t row() const { return row_; }

private:
    LogErrorKind kind_;
    std::size_t row_;
};

enum class LogFormat { Csv, Jsonl };

std::optional<LogFormat> parse_log_format(std::string_view name);

/// Parses a session log and groups it by session. Sessions come back in
/// order of first appearance, records sorted by seq.
std::vector<SessionLog> parse_session_log(std::string_view text, LogFormat format,
                                          const Manifest& manifest);

std::string write_session_log(const std::vector<SessionLog>& logs, LogFormat format);

Manifest parse_manifest(std::string_view json_text);
std::string write_manifest(const Manifest& manifest);
Manifest manifest_of(const std::vector<SessionLog>& logs);

/// Per-learner act tallies for one session.
struct ActCounts {
    int orientation_pos = 0;
    int orientation_neg = 0;
    int decision_pos = 0;
    int decision_neg = 0;
    /// Own non-reply acts matching each profile's intervention sets.
    std::array<int, 4> intervention{};
    /// Peers' replies to this learner's records matching each profile's reaction sets.
    std::array<int, 4> reaction{};
    /// Every act the learner emitted in the session.
    int total = 0;

    ActCounts& operator+=(const ActCounts& other);
    bool operator==(const ActCounts&) const = default;
};

ActCounts operator+(ActCounts a, const ActCounts& b);

/// Throws std::invalid_argument if `learner` is not in the roster.
ActCounts tally_acts(const SessionLog& log, const LearnerId& learner,
                     const GridTable& grid = GridTable::hybrid());

}  // namespace lprof
