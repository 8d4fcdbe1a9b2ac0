#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quench/alert.hpp"
#include "quench/errors.hpp"
#include "quench/rational.hpp"

namespace quench {

// Synthetic alert-flood description. Exactly one of `rate` / `count` drives the
// volume: rate mode emits floor(rate x duration) alerts at inter-arrival
// 1/rate; count mode emits exactly `count` alerts evenly over the duration.
// Output is deterministic per seed (SplitMix64 source addresses).
struct FloodSpec {
    std::string signature;
    std::optional<Rational> rate;       // alerts per second
    std::optional<std::int64_t> count;
    Micros duration = 0;
    std::string dst;
    bool randomize_src = false;
    std::string src = "192.0.2.1";      // used when randomize_src is false
    std::uint64_t seed = 0;
    std::int64_t cap = 10'000'000;      // hard bound on emitted alerts
};

struct ScenarioStep {
    std::string signature;
    std::string src;
    std::string dst;
    Micros ts = 0;
};

// Ordered multi-step attack to embed in a flood; step timestamps strictly
// increase. Scenario alerts carry attrs["ground_truth"] = "true".
struct ScenarioSpec {
    std::vector<ScenarioStep> steps;
};

// Throws CapExceededError when the spec would emit more than `cap` alerts,
// std::invalid_argument on inconsistent specs.
std::vector<Alert> gen_flood(const FloodSpec& spec);

// Stable merge by timestamp (scenario wins ties); ids reassigned sequentially.
// Throws UnsortedInputError when either input is out of order.
std::vector<Alert> inject_scenario(std::vector<Alert> flood, const ScenarioSpec& scenario);

struct GenSpec {
    std::optional<FloodSpec> flood;
    std::optional<ScenarioSpec> scenario;
};

GenSpec parse_gen_spec(std::string_view json_text); // ParseError on bad documents
std::vector<Alert> generate(const GenSpec& spec);

// SplitMix64: documented-constant portable 64-bit generator used for source
// address randomization.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace quench
