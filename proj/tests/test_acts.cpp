#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "lprof/acts.hpp"
#include "lprof/random.hpp"

using namespace lprof;
using lprof::test::rec;
using lprof::test::session;

namespace {

Manifest one_session(const std::string& id, std::vector<LearnerId> roster) {
    Manifest m;
    m[id] = SessionInfo{roster, roster.front()};
    return m;
}

LogErrorKind error_kind_of(std::string_view text, const Manifest& m, LogFormat f = LogFormat::Csv) {
    try {
        parse_session_log(text, f, m);
    } catch (const LogError& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return LogErrorKind::Malformed;
}

}  // namespace

TEST_SUITE("acts") {

TEST_CASE("act codes round-trip") {
    for (SpeechAct a : kAllActs) {
        CHECK(parse_act(std::string(1, act_code(a))) == a);
    }
    CHECK_FALSE(parse_act("Q"));
    CHECK_FALSE(parse_act("PP"));
    CHECK_FALSE(parse_act(""));
}

TEST_CASE("hybrid grid cells") {
    const auto g = GridTable::hybrid();
    using A = SpeechAct;
    CHECK(g[Profile::Organizer].intervention_pos == ActSet{A::Propose});
    CHECK(g[Profile::Organizer].intervention_neg == ActSet{A::Elucidate});
    CHECK(g[Profile::Organizer].reaction_pos == ActSet{A::Approve, A::Demonstrate});
    CHECK(g[Profile::Organizer].reaction_neg.empty());
    CHECK(g[Profile::Verifier].intervention_pos == ActSet{A::Approve, A::Demonstrate});
    CHECK(g[Profile::Verifier].intervention_neg == ActSet{A::Disapprove, A::Elucidate});
    CHECK(g[Profile::Verifier].reaction_neg == ActSet{A::StandMute, A::Decline});
    CHECK(g[Profile::Seeker].intervention_pos.empty());
    CHECK(g[Profile::Seeker].intervention_neg == ActSet{A::Elucidate});
    CHECK(g[Profile::Seeker].reaction_pos == ActSet{A::Demonstrate});
    CHECK(g[Profile::Independent].intervention_neg == ActSet{A::StandMute});
    CHECK(g[Profile::Independent].reaction_neg == ActSet{A::StandMute, A::Decline});
    CHECK(g.orientation_pos == ActSet{A::Propose, A::Demonstrate});
    CHECK(g.orientation_neg == ActSet{A::Elucidate, A::Decline});
    CHECK(g.decision_pos == ActSet{A::Approve});
    CHECK(g.decision_neg == ActSet{A::Disapprove, A::StandMute});
}

TEST_CASE("csv row maps field by field") {
    const auto logs = parse_session_log("session_id,seq,actor,act,reply_to\ns1,3,alice,P,\n", LogFormat::Csv,
                                        one_session("s1", {"alice"}));
    REQUIRE(logs.size() == 1);
    REQUIRE(logs[0].records.size() == 1);
    const auto& r = logs[0].records[0];
    CHECK(r.session_id == "s1");
    CHECK(r.seq == 3);
    CHECK(r.actor == "alice");
    CHECK(r.act == SpeechAct::Propose);
    CHECK_FALSE(r.reply_to);
    CHECK_FALSE(r.timeout);
}

TEST_CASE("parse errors") {
    const auto m = one_session("s1", {"alice", "bob"});
    const std::string head = "session_id,seq,actor,act,reply_to\n";
    CHECK(error_kind_of(head + "s1,1,alice,Q,\n", m) == LogErrorKind::UnknownActCode);
    CHECK(error_kind_of(head + "s1,1,alice,P,\ns1,4,bob,A,\ns1,5,bob,A,9\n", m) ==
          LogErrorKind::DanglingReplyTo);
    CHECK(error_kind_of(head + "s1,1,alice,P,\ns1,1,bob,A,\n", m) == LogErrorKind::DuplicateSeq);
    CHECK(error_kind_of(head + "s1,1,carol,P,\n", m) == LogErrorKind::ActorNotInRoster);
    CHECK(error_kind_of(head + "s2,1,alice,P,\n", m) == LogErrorKind::UnknownSession);
    CHECK(error_kind_of(head + "s1,x,alice,P,\n", m) == LogErrorKind::Malformed);
    CHECK(error_kind_of(head + "s1,1,alice\n", m) == LogErrorKind::Malformed);
    CHECK(error_kind_of("{\"session_id\":\"s1\",\"seq\":1,\"actor\":\"alice\",\"act\":\"Z\"}\n", m,
                        LogFormat::Jsonl) == LogErrorKind::UnknownActCode);
}

TEST_CASE("error rows are 1-based input lines") {
    const auto m = one_session("s1", {"alice"});
    try {
        parse_session_log("session_id,seq,actor,act,reply_to\n# note\ns1,1,alice,X,\n", LogFormat::Csv, m);
        FAIL("expected an error");
    } catch (const LogError& e) {
        CHECK(e.row() == 3);
    }
}

TEST_CASE("records are grouped by session and sorted by seq") {
    Manifest m;
    m["a"] = SessionInfo{{"x", "y"}, "x"};
    m["b"] = SessionInfo{{"x"}, "x"};
    const auto logs = parse_session_log(
        "session_id,seq,actor,act,reply_to\nb,2,x,S,\na,2,y,A,1\nb,1,x,P,\na,1,x,P,\n", LogFormat::Csv, m);
    REQUIRE(logs.size() == 2);
    CHECK(logs[0].session_id == "b");
    CHECK(logs[0].records[0].seq == 1);
    CHECK(logs[1].session_id == "a");
    CHECK(logs[1].records[1].reply_to == 1);
    CHECK(logs[1].roster == std::vector<LearnerId>{"x", "y"});
}

TEST_CASE("csv and jsonl writers round-trip") {
    const auto m = parse_manifest(lprof::test::fixture("manifest.json"));
    const auto logs = parse_session_log(lprof::test::fixture("conformant.csv"), LogFormat::Csv, m);
    REQUIRE(logs.size() == 2);
    for (LogFormat f : {LogFormat::Csv, LogFormat::Jsonl}) {
        CHECK(parse_session_log(write_session_log(logs, f), f, m) == logs);
    }
    CHECK(parse_manifest(write_manifest(m)) == m);
    CHECK(manifest_of(logs) == m);
}

TEST_CASE("bad manifests") {
    CHECK_THROWS_AS(parse_manifest("{\"s\":{\"roster\":[],\"leader\":\"a\"}}"), LogError);
    CHECK_THROWS_AS(parse_manifest("{\"s\":{\"roster\":[\"a\"],\"leader\":\"b\"}}"), LogError);
    CHECK_THROWS_AS(parse_manifest("{\"s\":{\"roster\":[\"a\",\"a\"],\"leader\":\"a\"}}"), LogError);
    CHECK_THROWS_AS(parse_manifest("not json"), LogError);
}

TEST_CASE("tally: orientation of own acts") {
    const auto log = session({"alice"}, "alice",
                             {rec(1, "alice", 'P'), rec(2, "alice", 'P'), rec(3, "alice", 'M'), rec(4, "alice", 'E')});
    const auto c = tally_acts(log, "alice");
    CHECK(c.orientation_pos == 3);
    CHECK(c.orientation_neg == 1);
    CHECK(c.total == 4);
}

TEST_CASE("tally: empty log counts nothing") {
    CHECK(tally_acts(session({"alice"}, "alice", {}), "alice") == ActCounts{});
}

TEST_CASE("tally: a reply credits the target's reaction and the replier's decision") {
    const auto log = session({"alice", "bob"}, "alice", {rec(1, "alice", 'P'), rec(2, "bob", 'A', 1)});
    const auto alice = tally_acts(log, "alice");
    const auto bob = tally_acts(log, "bob");
    CHECK(alice.reaction[index_of(Profile::Organizer)] == 1);
    CHECK(alice.intervention[index_of(Profile::Organizer)] == 1);
    CHECK(bob.decision_pos == 1);
    CHECK(bob.total == 1);
    // A reply is not an intervention.
    CHECK(bob.intervention[index_of(Profile::Verifier)] == 0);
}

TEST_CASE("tally: learner outside the roster") {
    CHECK_THROWS_AS(tally_acts(session({"alice"}, "alice", {}), "zed"), std::invalid_argument);
}

TEST_CASE("tally properties on random logs") {
    Rng rng(11);
    const std::vector<LearnerId> roster = {"a", "b", "c", "d"};
    const std::string codes = "PADCESM";
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SpeechActRecord> first, second;
        const int n = 1 + static_cast<int>(rng.below(30));
        for (int i = 1; i <= 2 * n; ++i) {
            const std::int64_t reply = i > 1 && rng.chance(0.5) ? 1 + static_cast<std::int64_t>(rng.below(i - 1)) : 0;
            auto r = rec(i, roster[rng.below(4)], codes[rng.below(7)], reply);
            // Keep replies inside their own half so the halves stand alone.
            if (i > n && r.reply_to && *r.reply_to <= n) r.reply_to.reset();
            (i <= n ? first : second).push_back(r);
        }
        std::vector<SpeechActRecord> all = first;
        all.insert(all.end(), second.begin(), second.end());
        const auto whole = session(roster, "a", all);

        int totals = 0;
        for (const auto& id : roster) {
            const auto c = tally_acts(whole, id);
            CHECK(c == tally_acts(session(roster, "a", first), id) + tally_acts(session(roster, "a", second), id));
            totals += c.total;
        }
        CHECK(totals == static_cast<int>(all.size()));

        // Renaming learners renames their tallies.
        const std::vector<LearnerId> renamed = {"d", "a", "b", "c"};
        auto relabelled = whole;
        for (auto& r : relabelled.records) {
            r.actor = renamed[static_cast<std::size_t>(std::find(roster.begin(), roster.end(), r.actor) - roster.begin())];
        }
        for (std::size_t i = 0; i < roster.size(); ++i) {
            CHECK(tally_acts(relabelled, renamed[i]) == tally_acts(whole, roster[i]));
        }
    }
}

}  // TEST_SUITE
