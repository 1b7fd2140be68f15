#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "lprof/acts.hpp"

namespace lprof::test {

inline std::string fixture(const std::string& name) {
    std::ifstream in(std::string(LPROF_FIXTURES) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Builds a record; reply_to 0 means "no reply".
inline SpeechActRecord rec(std::int64_t seq, const std::string& actor, char code, std::int64_t reply_to = 0,
                           bool timeout = false) {
    SpeechActRecord r;
    r.session_id = "s1";
    r.seq = seq;
    r.actor = actor;
    r.act = *parse_act(std::string(1, code));
    if (reply_to) r.reply_to = reply_to;
    r.timeout = timeout;
    return r;
}

inline SessionLog session(std::vector<LearnerId> roster, LearnerId leader, std::vector<SpeechActRecord> records) {
    SessionLog log;
    log.session_id = "s1";
    log.roster = std::move(roster);
    log.leader = std::move(leader);
    log.records = std::move(records);
    return log;
}

}  // namespace lprof::test
