#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "quench/attack_graph.hpp"

using namespace quench;
using nlohmann::json;

namespace {

// Smallest legal graph: initial condition -> exploit -> consequence condition.
const char* kMinimalGraph = R"({
  "exploits": [{"id": "e_ftp", "vuln": "ftp_rhosts", "src": "*", "dst": "10.0.0.2"}],
  "conditions": [
    {"id": "c_reach", "predicate": "reachable", "host": "10.0.0.2", "initial": true},
    {"id": "c_trust", "predicate": "rhosts_trust", "host": "10.0.0.2", "initial": false}
  ],
  "edges": [["c_reach", "e_ftp"], ["e_ftp", "c_trust"]],
  "mapping": [{"signature": "ftp_rhosts_probe", "exploit": "e_ftp"}]
})";

// Two exploits whose consequences join at one condition (disjunctive join).
const char* kDisjunctiveGraph = R"({
  "exploits": [
    {"id": "e_sadmind", "vuln": "sadmind_overflow", "src": "*", "dst": "10.0.0.2"},
    {"id": "e_sendmail", "vuln": "sendmail_exploit", "src": "*", "dst": "10.0.0.2"}
  ],
  "conditions": [{"id": "c_root", "predicate": "root_privileges", "host": "10.0.0.2", "initial": false}],
  "edges": [["e_sadmind", "c_root"], ["e_sendmail", "c_root"]],
  "mapping": [
    {"signature": "sadmind_overflow", "exploit": "e_sadmind"},
    {"signature": "sendmail_exploit", "exploit": "e_sendmail"}
  ]
})";

Alert make_alert(std::string sig, std::string src, std::string dst) {
    Alert a;
    a.id = 1;
    a.signature = std::move(sig);
    a.src = std::move(src);
    a.dst = std::move(dst);
    a.ts = 1'000'000;
    return a;
}

bool graphs_equal(const AttackGraph& a, const AttackGraph& b) {
    if (a.exploits().size() != b.exploits().size() || a.conditions().size() != b.conditions().size() ||
        a.edges() != b.edges() || a.mapping().size() != b.mapping().size())
        return false;
    for (std::size_t i = 0; i < a.exploits().size(); ++i) {
        const auto& x = a.exploits()[i];
        const auto& y = b.exploits()[i];
        if (x.id != y.id || x.vuln != y.vuln || x.src != y.src || x.dst != y.dst)
            return false;
    }
    for (std::size_t i = 0; i < a.conditions().size(); ++i) {
        const auto& x = a.conditions()[i];
        const auto& y = b.conditions()[i];
        if (x.id != y.id || x.predicate != y.predicate || x.host != y.host || x.initial != y.initial)
            return false;
    }
    for (std::size_t i = 0; i < a.mapping().size(); ++i)
        if (a.mapping()[i].signature != b.mapping()[i].signature ||
            a.mapping()[i].exploit_id != b.mapping()[i].exploit_id)
            return false;
    return true;
}

} // namespace

TEST_CASE("smallest legal graph loads with 3 vertices and 2 edges") {
    const AttackGraph g = AttackGraph::load(kMinimalGraph);
    CHECK(g.exploits().size() == 1);
    CHECK(g.conditions().size() == 2);
    CHECK(g.edges().size() == 2);
    const std::size_t e = *g.exploit_index("e_ftp");
    CHECK(g.prereq_conditions(e).size() == 1);
    CHECK(g.consequence_conditions(e).size() == 1);
}

TEST_CASE("disjunctive join: two exploits entering one condition") {
    const AttackGraph g = AttackGraph::load(kDisjunctiveGraph);
    CHECK(g.exploits().size() == 2);
    const std::size_t c = *g.condition_index("c_root");
    CHECK(c == 0);
    // both exploits list c_root as their consequence
    CHECK(g.consequence_conditions(*g.exploit_index("e_sadmind")) ==
          std::vector<std::size_t>{c});
    CHECK(g.consequence_conditions(*g.exploit_index("e_sendmail")) ==
          std::vector<std::size_t>{c});
}

TEST_CASE("exploit -> exploit edge is rejected and named") {
    json doc = json::parse(kDisjunctiveGraph);
    doc["edges"].push_back({"e_sadmind", "e_sendmail"});
    try {
        AttackGraph::load(doc.dump());
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.subject() == "e_sadmind -> e_sendmail");
    }
}

TEST_CASE("condition -> condition edge is rejected") {
    json doc = json::parse(kMinimalGraph);
    doc["edges"].push_back({"c_reach", "c_trust"});
    CHECK_THROWS_AS(AttackGraph::load(doc.dump()), ValidationError);
}

TEST_CASE("cycles are rejected with the participating vertices named") {
    json doc = json::parse(kMinimalGraph);
    doc["edges"].push_back({"c_trust", "e_ftp"}); // e_ftp -> c_trust -> e_ftp
    try {
        AttackGraph::load(doc.dump());
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("cycle") != std::string::npos);
        CHECK(std::string(e.what()).find("e_ftp") != std::string::npos);
    }
}

TEST_CASE("dangling edge endpoints are rejected") {
    json doc = json::parse(kMinimalGraph);
    doc["edges"].push_back({"c_reach", "e_missing"});
    CHECK_THROWS_AS(AttackGraph::load(doc.dump()), ValidationError);
}

TEST_CASE("duplicate ids are rejected, including across vertex kinds") {
    json doc = json::parse(kMinimalGraph);
    doc["conditions"].push_back({{"id", "e_ftp"}, {"predicate", "p"}, {"host", "*"}, {"initial", false}});
    CHECK_THROWS_AS(AttackGraph::load(doc.dump()), ValidationError);
}

TEST_CASE("mapping rules must reference existing exploits") {
    json doc = json::parse(kMinimalGraph);
    doc["mapping"].push_back({{"signature", "x"}, {"exploit", "nope"}});
    CHECK_THROWS_AS(AttackGraph::load(doc.dump()), ValidationError);
}

TEST_CASE("malformed documents raise ParseError") {
    CHECK_THROWS_AS(AttackGraph::load("{"), ParseError);
    CHECK_THROWS_AS(AttackGraph::load("[]"), ParseError);
    CHECK_THROWS_AS(AttackGraph::load(R"({"exploits": [{"id": 7}]})"), ParseError);
}

TEST_CASE("host patterns must be exact IPv4 or wildcard") {
    json doc = json::parse(kMinimalGraph);
    doc["exploits"][0]["dst"] = "10.0.0.0/24";
    CHECK_THROWS_AS(AttackGraph::load(doc.dump()), ValidationError);
}

TEST_CASE("map_alert: direct rule plus pattern match") {
    const AttackGraph g = AttackGraph::load(kDisjunctiveGraph);
    const auto hit = g.map_alert(make_alert("sadmind_overflow", "10.0.0.1", "10.0.0.2"));
    REQUIRE(hit.has_value());
    CHECK(*hit == "e_sadmind");
}

TEST_CASE("map_alert: hosts outside the vulnerability model do not correlate") {
    const AttackGraph g = AttackGraph::load(kDisjunctiveGraph);
    CHECK_FALSE(g.map_alert(make_alert("sadmind_overflow", "10.0.0.1", "10.0.0.9")).has_value());
    CHECK_FALSE(g.map_alert(make_alert("unknown_sig", "10.0.0.1", "10.0.0.2")).has_value());
}

TEST_CASE("map_alert: more exact host fields win") {
    const char* text = R"({
      "exploits": [
        {"id": "e_any", "vuln": "sadmind", "src": "*", "dst": "*"},
        {"id": "e_host", "vuln": "sadmind", "src": "*", "dst": "10.0.0.2"}
      ],
      "conditions": [],
      "edges": [],
      "mapping": [
        {"signature": "sadmind", "exploit": "e_any"},
        {"signature": "sadmind", "exploit": "e_host"}
      ]
    })";
    const AttackGraph g = AttackGraph::load(text);
    const Alert a = make_alert("sadmind", "10.0.0.1", "10.0.0.2");

    // brute force: enumerate matches, confirm a unique specificity maximum
    const auto matches = oracle::matching_vertices(g, a);
    REQUIRE(matches.size() == 2);
    int best_spec = -1;
    std::string best_id;
    int at_best = 0;
    for (const auto& [id, spec] : matches) {
        if (spec > best_spec) {
            best_spec = spec;
            best_id = id;
            at_best = 1;
        } else if (spec == best_spec) {
            ++at_best;
        }
    }
    REQUIRE(at_best == 1);
    CHECK(best_id == "e_host");

    const auto hit = g.map_alert(a);
    REQUIRE(hit.has_value());
    CHECK(*hit == "e_host");
}

TEST_CASE("map_alert: equal specificity falls back to smallest id") {
    const char* text = R"({
      "exploits": [
        {"id": "e_b", "vuln": "v", "src": "*", "dst": "10.0.0.2"},
        {"id": "e_a", "vuln": "v", "src": "*", "dst": "10.0.0.2"}
      ],
      "conditions": [],
      "edges": [],
      "mapping": [
        {"signature": "s", "exploit": "e_b"},
        {"signature": "s", "exploit": "e_a"}
      ]
    })";
    const AttackGraph g = AttackGraph::load(text);
    const auto hit = g.map_alert(make_alert("s", "10.0.0.1", "10.0.0.2"));
    REQUIRE(hit.has_value());
    CHECK(*hit == "e_a");
}

TEST_CASE("property: render/load round-trips random graphs") {
    std::mt19937_64 rng(0x9a11u);
    for (int iter = 0; iter < 100; ++iter) {
        const AttackGraph g = oracle::random_graph(rng, 10, 15, 0.3);
        const AttackGraph back = AttackGraph::load(g.render());
        CHECK(graphs_equal(g, back));
    }
}

TEST_CASE("property: map_alert agrees with brute-force enumeration and is deterministic") {
    std::mt19937_64 rng(0xf00du);
    const std::vector<std::string> hosts{"10.0.0.1", "10.0.0.2", "10.0.0.3"};
    const std::vector<std::string> patterns{"*", "10.0.0.1", "10.0.0.2", "10.0.0.3"};
    std::uniform_int_distribution<std::size_t> host_dist(0, hosts.size() - 1);
    std::uniform_int_distribution<std::size_t> pat_dist(0, patterns.size() - 1);
    std::uniform_int_distribution<int> nv_dist(1, 6);
    std::uniform_int_distribution<int> sig_dist(0, 2);

    for (int iter = 0; iter < 300; ++iter) {
        const int nv = nv_dist(rng);
        std::vector<ExploitVertex> exploits;
        std::vector<MappingRule> mapping;
        for (int i = 0; i < nv; ++i) {
            exploits.push_back({"e" + std::to_string(i), "v", patterns[pat_dist(rng)],
                                patterns[pat_dist(rng)]});
            mapping.push_back({"s" + std::to_string(sig_dist(rng)), "e" + std::to_string(i)});
        }
        const AttackGraph g = AttackGraph::build(std::move(exploits), {}, {}, std::move(mapping));

        for (int k = 0; k < 10; ++k) {
            const Alert a = make_alert("s" + std::to_string(sig_dist(rng)), hosts[host_dist(rng)],
                                       hosts[host_dist(rng)]);
            const auto got = g.map_alert(a);
            const auto want = oracle::map_alert_brute(g, a);
            CHECK(got == want);
            CHECK(g.map_alert(a) == got); // deterministic

            if (got) {
                // the winner is in the match set and nothing strictly beats it
                const auto matches = oracle::matching_vertices(g, a);
                int winner_spec = -1;
                bool winner_present = false;
                for (const auto& [id, spec] : matches)
                    if (id == *got) {
                        winner_present = true;
                        winner_spec = spec;
                    }
                CHECK(winner_present);
                for (const auto& [id, spec] : matches)
                    CHECK(spec <= winner_spec);
            }
        }
    }
}
