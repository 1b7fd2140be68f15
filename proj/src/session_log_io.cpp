#include <algorithm>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "lprof/acts.hpp"
#include "lprof/text.hpp"

namespace lprof {

std::optional<LogFormat> parse_log_format(std::string_view name) {
    if (name == "csv") return LogFormat::Csv;
    if (name == "jsonl") return LogFormat::Jsonl;
    return std::nullopt;
}

namespace {

struct RawRecord {
    SpeechActRecord record;
    std::size_t row = 0;
};

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_flag(std::string_view s) {
    if (s.empty() || s == "0" || s == "false") return false;
    if (s == "1" || s == "true" || s == "timeout") return true;
    return std::nullopt;
}

SpeechAct require_act(std::string_view token, std::size_t row) {
    auto act = parse_act(token);
    if (!act) {
        throw LogError(LogErrorKind::UnknownActCode, row,
                       "'" + std::string(token) + "' is not one of P,A,D,C,E,S,M");
    }
    return *act;
}

std::vector<RawRecord> read_csv(std::string_view text) {
    std::vector<RawRecord> out;
    bool have_header = false;
    std::size_t columns = 0;
    std::size_t row = 0;
    for (std::string_view line : split_lines(text)) {
        ++row;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto fields = split(line, ',');
        for (auto& f : fields) f = trim(f);
        if (!have_header) {
            const bool base = fields.size() >= 5 && fields[0] == "session_id" && fields[1] == "seq" &&
                              fields[2] == "actor" && fields[3] == "act" && fields[4] == "reply_to";
            const bool ok = base && (fields.size() == 5 || (fields.size() == 6 && fields[5] == "timeout"));
            if (!ok) {
                throw LogError(LogErrorKind::Malformed, row,
                               "expected header session_id,seq,actor,act,reply_to[,timeout]");
            }
            columns = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != columns) {
            throw LogError(LogErrorKind::Malformed, row,
                           "expected " + std::to_string(columns) + " fields, got " +
                               std::to_string(fields.size()));
        }
        RawRecord raw;
        raw.row = row;
        auto& r = raw.record;
        r.session_id = std::string(fields[0]);
        if (r.session_id.empty()) throw LogError(LogErrorKind::Malformed, row, "empty session_id");
        auto seq = parse_int(fields[1]);
        if (!seq) throw LogError(LogErrorKind::Malformed, row, "seq is not an integer");
        r.seq = *seq;
        r.actor = std::string(fields[2]);
        if (r.actor.empty()) throw LogError(LogErrorKind::Malformed, row, "empty actor");
        r.act = require_act(fields[3], row);
        if (!fields[4].empty()) {
            auto rt = parse_int(fields[4]);
            if (!rt) throw LogError(LogErrorKind::Malformed, row, "reply_to is not an integer");
            r.reply_to = *rt;
        }
        if (columns == 6) {
            auto flag = parse_flag(fields[5]);
            if (!flag) throw LogError(LogErrorKind::Malformed, row, "bad timeout marker");
            r.timeout = *flag;
        }
        out.push_back(std::move(raw));
    }
    if (!have_header) throw LogError(LogErrorKind::Malformed, 0, "missing CSV header");
    return out;
}

std::vector<RawRecord> read_jsonl(std::string_view text) {
    using nlohmann::json;
    std::vector<RawRecord> out;
    std::size_t row = 0;
    for (std::string_view line : split_lines(text)) {
        ++row;
        line = trim(line);
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw LogError(LogErrorKind::Malformed, row, e.what());
        }
        RawRecord raw;
        raw.row = row;
        auto& r = raw.record;
        try {
            r.session_id = j.at("session_id").get<std::string>();
            r.seq = j.at("seq").get<std::int64_t>();
            r.actor = j.at("actor").get<std::string>();
            const auto act = j.at("act").get<std::string>();
            r.act = require_act(act, row);
            if (auto it = j.find("reply_to"); it != j.end() && !it->is_null()) {
                r.reply_to = it->get<std::int64_t>();
            }
            if (auto it = j.find("timeout"); it != j.end()) r.timeout = it->get<bool>();
        } catch (const json::exception& e) {
            throw LogError(LogErrorKind::Malformed, row, e.what());
        }
        if (r.session_id.empty() || r.actor.empty()) {
            throw LogError(LogErrorKind::Malformed, row, "empty session_id or actor");
        }
        out.push_back(std::move(raw));
    }
    return out;
}

}  // namespace

std::vector<SessionLog> parse_session_log(std::string_view text, LogFormat format,
                                          const Manifest& manifest) {
    auto raws = format == LogFormat::Csv ? read_csv(text) : read_jsonl(text);

    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<RawRecord>> groups;
    for (auto& raw : raws) {
        auto [it, inserted] = groups.try_emplace(raw.record.session_id);
        if (inserted) order.push_back(raw.record.session_id);
        it->second.push_back(std::move(raw));
    }

    std::vector<SessionLog> logs;
    logs.reserve(order.size());
    for (const auto& sid : order) {
        auto& group = groups[sid];
        auto info = manifest.find(sid);
        if (info == manifest.end()) {
            throw LogError(LogErrorKind::UnknownSession, group.front().row,
                           "session '" + sid + "' has no manifest entry");
        }
        std::stable_sort(group.begin(), group.end(), [](const RawRecord& a, const RawRecord& b) {
            return a.record.seq < b.record.seq;
        });

        SessionLog log;
        log.session_id = sid;
        log.roster = info->second.roster;
        log.leader = info->second.leader;

        std::unordered_set<std::int64_t> seen;
        for (std::size_t i = 0; i < group.size(); ++i) {
            const auto& raw = group[i];
            const auto& r = raw.record;
            if (i > 0 && group[i - 1].record.seq == r.seq) {
                const auto later = std::max(raw.row, group[i - 1].row);
                throw LogError(LogErrorKind::DuplicateSeq, later,
                               "seq " + std::to_string(r.seq) + " repeated in session " + sid);
            }
            if (r.reply_to && (*r.reply_to >= r.seq || !seen.contains(*r.reply_to))) {
                throw LogError(LogErrorKind::DanglingReplyTo, raw.row,
                               "reply_to " + std::to_string(*r.reply_to) +
                                   " does not name an earlier record of session " + sid);
            }
            if (!log.in_roster(r.actor)) {
                throw LogError(LogErrorKind::ActorNotInRoster, raw.row,
                               "actor '" + r.actor + "' not in roster of session " + sid);
            }
            seen.insert(r.seq);
            log.records.push_back(r);
        }
        logs.push_back(std::move(log));
    }
    return logs;
}

std::string write_session_log(const std::vector<SessionLog>& logs, LogFormat format) {
    std::string out;
    if (format == LogFormat::Csv) {
        out += "session_id,seq,actor,act,reply_to,timeout\n";
        for (const auto& log : logs) {
            for (const auto& r : log.records) {
                out += r.session_id + ',' + std::to_string(r.seq) + ',' + r.actor + ',' +
                       act_code(r.act) + ',' + (r.reply_to ? std::to_string(*r.reply_to) : "") + ',' +
                       (r.timeout ? "1" : "0") + '\n';
            }
        }
        return out;
    }
    for (const auto& log : logs) {
        for (const auto& r : log.records) {
            nlohmann::ordered_json j;
            j["session_id"] = r.session_id;
            j["seq"] = r.seq;
            j["actor"] = r.actor;
            j["act"] = std::string(1, act_code(r.act));
            j["reply_to"] = r.reply_to ? nlohmann::ordered_json(*r.reply_to) : nlohmann::ordered_json();
            j["timeout"] = r.timeout;
            out += j.dump() + '\n';
        }
    }
    return out;
}

Manifest parse_manifest(std::string_view json_text) {
    using nlohmann::json;
    Manifest m;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw LogError(LogErrorKind::BadManifest, 0, e.what());
    }
    if (!j.is_object()) throw LogError(LogErrorKind::BadManifest, 0, "manifest must be a JSON object");
    for (const auto& [sid, entry] : j.items()) {
        SessionInfo info;
        try {
            info.roster = entry.at("roster").get<std::vector<std::string>>();
            info.leader = entry.at("leader").get<std::string>();
        } catch (const json::exception& e) {
            throw LogError(LogErrorKind::BadManifest, 0, "session '" + sid + "': " + e.what());
        }
        if (info.roster.empty()) {
            throw LogError(LogErrorKind::BadManifest, 0, "session '" + sid + "' has an empty roster");
        }
        std::unordered_set<std::string> uniq(info.roster.begin(), info.roster.end());
        if (uniq.size() != info.roster.size()) {
            throw LogError(LogErrorKind::BadManifest, 0, "session '" + sid + "' repeats a roster entry");
        }
        if (!uniq.contains(info.leader)) {
            throw LogError(LogErrorKind::BadManifest, 0,
                           "leader of session '" + sid + "' is not in its roster");
        }
        m.emplace(sid, std::move(info));
    }
    return m;
}

std::string write_manifest(const Manifest& manifest) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [sid, info] : manifest) {
        j[sid] = {{"roster", info.roster}, {"leader", info.leader}};
    }
    return j.dump(2) + '\n';
}

Manifest manifest_of(const std::vector<SessionLog>& logs) {
    Manifest m;
    for (const auto& log : logs) m[log.session_id] = {log.roster, log.leader};
    return m;
}

}  // namespace lprof
