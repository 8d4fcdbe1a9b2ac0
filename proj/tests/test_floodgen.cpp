#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "quench/floodgen.hpp"
#include "quench/ndjson.hpp"

using namespace quench;

namespace {

FloodSpec base_spec() {
    FloodSpec s;
    s.signature = "icmp_flood";
    s.dst = "10.0.0.66";
    s.duration = 1'000'000;
    s.seed = 1;
    return s;
}

std::string serialize(const std::vector<Alert>& alerts) {
    std::string out;
    for (const auto& a : alerts) {
        out += ndjson::alert_line(a);
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("rate 7343 over one second yields 7343 alerts stepping by 1/7343") {
    FloodSpec s = base_spec();
    s.rate = Rational(7343, 1);
    const auto alerts = gen_flood(s);
    REQUIRE(alerts.size() == 7343);
    for (std::size_t i = 0; i < alerts.size(); ++i) {
        CHECK(alerts[i].ts == static_cast<Micros>(static_cast<__int128>(i) * 1'000'000 / 7343));
        CHECK(alerts[i].id == static_cast<std::int64_t>(i) + 1);
        CHECK(alerts[i].signature == "icmp_flood");
        CHECK(alerts[i].dst == "10.0.0.66");
    }
}

TEST_CASE("zero duration yields an empty stream") {
    FloodSpec s = base_spec();
    s.rate = Rational(7343, 1);
    s.duration = 0;
    CHECK(gen_flood(s).empty());
}

TEST_CASE("identical specs yield byte-identical streams") {
    FloodSpec s = base_spec();
    s.rate = Rational(100, 1);
    s.randomize_src = true;
    CHECK(serialize(gen_flood(s)) == serialize(gen_flood(s)));

    FloodSpec other = s;
    other.seed = 2;
    CHECK(serialize(gen_flood(other)) != serialize(gen_flood(s)));
}

TEST_CASE("count mode emits exactly count alerts across the window") {
    FloodSpec s = base_spec();
    s.count = 300;
    s.duration = 41'000'000;
    const auto alerts = gen_flood(s);
    REQUIRE(alerts.size() == 300);
    CHECK(alerts.front().ts == 0);
    CHECK(alerts.back().ts == static_cast<Micros>(static_cast<__int128>(299) * 41'000'000 / 300));
}

TEST_CASE("randomized sources stay inside 1.0.0.0-223.255.255.255 and avoid dst") {
    FloodSpec s = base_spec();
    s.rate = Rational(500, 1);
    s.randomize_src = true;
    for (const auto& a : gen_flood(s)) {
        const auto addr = parse_ipv4(a.src);
        REQUIRE(addr.has_value());
        CHECK(*addr >= 0x01000000u);
        CHECK(*addr <= 0xDFFFFFFFu);
        CHECK(a.src != a.dst);
    }
}

TEST_CASE("fixed source mode uses the configured address") {
    FloodSpec s = base_spec();
    s.rate = Rational(10, 1);
    s.src = "172.16.0.9";
    for (const auto& a : gen_flood(s))
        CHECK(a.src == "172.16.0.9");
}

TEST_CASE("volume above the hard cap is refused") {
    FloodSpec s = base_spec();
    s.rate = Rational(1000, 1);
    s.cap = 999;
    CHECK_THROWS_AS(gen_flood(s), CapExceededError);
}

TEST_CASE("spec validation refuses contradictory or bad fields") {
    FloodSpec s = base_spec();
    CHECK_THROWS_AS(gen_flood(s), std::invalid_argument); // neither rate nor count
    s.rate = Rational(2, 1);
    s.count = 5;
    CHECK_THROWS_AS(gen_flood(s), std::invalid_argument); // both
    s.count.reset();
    s.dst = "300.1.1.1";
    CHECK_THROWS_AS(gen_flood(s), std::invalid_argument);
}

TEST_CASE("property: floor(rate x duration) alerts, sorted, ids increasing") {
    std::mt19937_64 rng(0xf10cu);
    std::uniform_int_distribution<std::int64_t> num_dist(1, 9999);
    std::uniform_int_distribution<std::int64_t> den_dist(1, 7);
    std::uniform_int_distribution<Micros> dur_dist(0, 3'000'000);
    for (int iter = 0; iter < 100; ++iter) {
        FloodSpec s = base_spec();
        s.rate = Rational(num_dist(rng), den_dist(rng));
        s.duration = dur_dist(rng);
        const auto alerts = gen_flood(s);
        const __int128 want =
            static_cast<__int128>(s.rate->num) * s.duration / (static_cast<__int128>(s.rate->den) * 1'000'000);
        CHECK(static_cast<__int128>(alerts.size()) == want);
        for (std::size_t i = 1; i < alerts.size(); ++i) {
            CHECK(alerts[i - 1].ts <= alerts[i].ts);
            CHECK(alerts[i - 1].id < alerts[i].id);
        }
    }
}

TEST_CASE("inject into an empty flood is the scenario itself") {
    ScenarioSpec sc;
    sc.steps = {{"s1", "1.2.3.4", "10.0.0.2", 1'000'000},
                {"s2", "1.2.3.4", "10.0.0.3", 2'000'000},
                {"s3", "1.2.3.4", "10.0.0.4", 3'000'000}};
    const auto merged = inject_scenario({}, sc);
    REQUIRE(merged.size() == 3);
    for (std::size_t i = 0; i < merged.size(); ++i) {
        CHECK(merged[i].id == static_cast<std::int64_t>(i) + 1);
        CHECK(merged[i].signature == sc.steps[i].signature);
        CHECK(merged[i].attrs.at("ground_truth") == "true");
    }
}

TEST_CASE("scenario beyond the flood end lands at the tail") {
    FloodSpec s = base_spec();
    s.rate = Rational(100, 1);
    auto flood = gen_flood(s); // 100 alerts within [0, 1s)
    ScenarioSpec sc;
    sc.steps = {{"late", "1.2.3.4", "10.0.0.2", 5'000'000}};
    const auto merged = inject_scenario(std::move(flood), sc);
    REQUIRE(merged.size() == 101);
    CHECK(merged.back().signature == "late");
    CHECK(merged.back().id == 101);
}

TEST_CASE("merge keeps everything and ground-truth extraction recovers the scenario") {
    FloodSpec fs = base_spec();
    fs.rate = Rational(1000, 1);
    fs.randomize_src = true;
    auto flood = gen_flood(fs);
    const std::size_t flood_len = flood.size();

    ScenarioSpec sc;
    sc.steps = {{"step_a", "1.2.3.4", "10.0.0.2", 100'000},
                {"step_b", "1.2.3.4", "10.0.0.3", 500'001},
                {"step_c", "1.2.3.4", "10.0.0.4", 900'002}};
    const auto merged = inject_scenario(std::move(flood), sc);
    CHECK(merged.size() == flood_len + sc.steps.size());

    std::vector<Alert> recovered;
    for (const auto& a : merged) {
        const auto it = a.attrs.find("ground_truth");
        if (it != a.attrs.end() && it->second == "true")
            recovered.push_back(a);
    }
    REQUIRE(recovered.size() == sc.steps.size());
    for (std::size_t i = 0; i < recovered.size(); ++i) {
        CHECK(recovered[i].signature == sc.steps[i].signature);
        CHECK(recovered[i].src == sc.steps[i].src);
        CHECK(recovered[i].dst == sc.steps[i].dst);
        CHECK(recovered[i].ts == sc.steps[i].ts);
    }
    for (std::size_t i = 1; i < merged.size(); ++i) {
        CHECK(merged[i - 1].ts <= merged[i].ts);
        CHECK(merged[i - 1].id < merged[i].id);
    }
}

TEST_CASE("scenario ties win over flood alerts at the same instant") {
    std::vector<Alert> flood(1);
    flood[0].id = 1;
    flood[0].signature = "noise";
    flood[0].src = "9.9.9.9";
    flood[0].dst = "10.0.0.66";
    flood[0].ts = 1'000'000;
    ScenarioSpec sc;
    sc.steps = {{"step", "1.2.3.4", "10.0.0.2", 1'000'000}};
    const auto merged = inject_scenario(std::move(flood), sc);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].signature == "step");
    CHECK(merged[1].signature == "noise");
}

TEST_CASE("unsorted inputs are refused") {
    ScenarioSpec sc;
    sc.steps = {{"s1", "1.2.3.4", "10.0.0.2", 2'000'000}, {"s2", "1.2.3.4", "10.0.0.2", 2'000'000}};
    CHECK_THROWS_AS(inject_scenario({}, sc), UnsortedInputError); // must strictly increase

    std::vector<Alert> flood(2);
    flood[0] = flood[1] = Alert{1, "n", "9.9.9.9", "10.0.0.66", 5'000'000, {}};
    flood[1].ts = 4'000'000;
    ScenarioSpec ok;
    ok.steps = {{"s1", "1.2.3.4", "10.0.0.2", 1'000'000}};
    CHECK_THROWS_AS(inject_scenario(std::move(flood), ok), UnsortedInputError);
}

TEST_CASE("gen spec documents parse into flood and scenario") {
    const char* text = R"({
      "flood": {"signature": "icmp_flood", "count": 50, "duration": 2.0,
                "dst": "10.0.0.66", "randomize_src": true, "seed": 7},
      "scenario": {"steps": [
        {"signature": "s1", "src": "1.2.3.4", "dst": "10.0.0.2", "ts": 0.5},
        {"signature": "s2", "src": "1.2.3.4", "dst": "10.0.0.3", "ts": 1.5}
      ]}
    })";
    const GenSpec spec = parse_gen_spec(text);
    REQUIRE(spec.flood.has_value());
    REQUIRE(spec.scenario.has_value());
    CHECK(spec.flood->count == 50);
    CHECK(spec.flood->duration == 2'000'000);
    CHECK(spec.scenario->steps.size() == 2);

    const auto alerts = generate(spec);
    CHECK(alerts.size() == 52);
}

TEST_CASE("gen spec rejects malformed documents") {
    CHECK_THROWS_AS(parse_gen_spec("{"), ParseError);
    CHECK_THROWS_AS(parse_gen_spec("{}"), ParseError);
    CHECK_THROWS_AS(parse_gen_spec(R"({"flood": {"signature": "x", "dst": "10.0.0.1",
        "duration": 1.0}})"),
                    ParseError); // neither rate nor count
    CHECK_THROWS_AS(parse_gen_spec(R"({"flood": {"signature": "x", "dst": "10.0.0.1",
        "duration": 1.0, "rate": 2, "count": 3}})"),
                    ParseError); // both
    CHECK_THROWS_AS(parse_gen_spec(R"({"flood": {"signature": "x", "dst": "10.0.0.1",
        "duration": -1.0, "rate": 2}})"),
                    ParseError); // negative duration
}

TEST_CASE("decimal rates parse exactly") {
    const GenSpec spec = parse_gen_spec(R"({"flood": {"signature": "x", "dst": "10.0.0.1",
        "duration": 4.0, "rate": 2.5}})");
    REQUIRE(spec.flood.has_value());
    CHECK(*spec.flood->rate == Rational(5, 2));
    CHECK(gen_flood(*spec.flood).size() == 10);
}
