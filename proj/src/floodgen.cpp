#include "quench/floodgen.hpp"

#include <nlohmann/json.hpp>

namespace quench {

using nlohmann::json;

namespace {

constexpr std::uint32_t kSrcLow = 0x01000000u;  // 1.0.0.0
constexpr std::uint32_t kSrcHigh = 0xDFFFFFFFu; // 223.255.255.255

std::uint32_t random_src(std::uint64_t& state, std::uint32_t dst_addr) {
    for (;;) {
        const std::uint32_t raw = static_cast<std::uint32_t>(splitmix64_next(state) >> 32);
        const std::uint32_t addr = kSrcLow + raw % (kSrcHigh - kSrcLow + 1);
        if (addr != dst_addr)
            return addr;
    }
}

} // namespace

std::vector<Alert> gen_flood(const FloodSpec& spec) {
    if (spec.signature.empty())
        throw std::invalid_argument("flood spec: empty signature");
    const auto dst_addr = parse_ipv4(spec.dst);
    if (!dst_addr)
        throw std::invalid_argument("flood spec: bad dst address '" + spec.dst + "'");
    if (!spec.randomize_src && !is_valid_ipv4(spec.src))
        throw std::invalid_argument("flood spec: bad src address '" + spec.src + "'");
    if (spec.duration < 0)
        throw std::invalid_argument("flood spec: negative duration");
    if (spec.rate.has_value() == spec.count.has_value())
        throw std::invalid_argument("flood spec: exactly one of rate/count required");

    std::int64_t n = 0;
    if (spec.count) {
        if (*spec.count < 0)
            throw std::invalid_argument("flood spec: negative count");
        n = *spec.count;
    } else {
        if (!spec.rate->positive())
            throw std::invalid_argument("flood spec: rate must be positive");
        // floor(rate x duration), exact
        const __int128 num = static_cast<__int128>(spec.rate->num) * spec.duration;
        const __int128 den = static_cast<__int128>(spec.rate->den) * kMicrosPerSecond;
        n = static_cast<std::int64_t>(num / den);
    }
    if (n > spec.cap)
        throw CapExceededError("flood spec would emit " + std::to_string(n) + " alerts, cap is " +
                               std::to_string(spec.cap));

    std::vector<Alert> out;
    out.reserve(static_cast<std::size_t>(n));
    std::uint64_t rng = spec.seed;
    for (std::int64_t i = 0; i < n; ++i) {
        Alert a;
        a.id = i + 1;
        a.signature = spec.signature;
        a.dst = spec.dst;
        if (spec.randomize_src)
            a.src = ipv4_to_string(random_src(rng, *dst_addr));
        else
            a.src = spec.src;
        if (spec.count) {
            // exactly n alerts spread over [0, duration)
            a.ts = static_cast<Micros>(static_cast<__int128>(i) * spec.duration / n);
        } else {
            // inter-arrival 1/rate
            a.ts = static_cast<Micros>(static_cast<__int128>(i) * spec.rate->den * kMicrosPerSecond /
                                       spec.rate->num);
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Alert> inject_scenario(std::vector<Alert> flood, const ScenarioSpec& scenario) {
    for (std::size_t i = 1; i < flood.size(); ++i)
        if (flood[i].ts < flood[i - 1].ts)
            throw UnsortedInputError("flood input out of order at index " + std::to_string(i));
    std::vector<Alert> steps;
    steps.reserve(scenario.steps.size());
    for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
        const ScenarioStep& s = scenario.steps[i];
        if (i > 0 && s.ts <= scenario.steps[i - 1].ts)
            throw UnsortedInputError("scenario step timestamps must strictly increase (step " +
                                     std::to_string(i) + ")");
        if (!is_valid_ipv4(s.src) || !is_valid_ipv4(s.dst))
            throw std::invalid_argument("scenario step " + std::to_string(i) + ": bad address");
        Alert a;
        a.signature = s.signature;
        a.src = s.src;
        a.dst = s.dst;
        a.ts = s.ts;
        a.attrs["ground_truth"] = "true";
        steps.push_back(std::move(a));
    }

    std::vector<Alert> merged;
    merged.reserve(flood.size() + steps.size());
    std::size_t fi = 0, si = 0;
    while (fi < flood.size() || si < steps.size()) {
        // scenario wins ties
        if (si < steps.size() && (fi == flood.size() || steps[si].ts <= flood[fi].ts))
            merged.push_back(std::move(steps[si++]));
        else
            merged.push_back(std::move(flood[fi++]));
    }
    for (std::size_t i = 0; i < merged.size(); ++i)
        merged[i].id = static_cast<std::int64_t>(i) + 1;
    return merged;
}

namespace {

Rational rate_from_json(const json& j) {
    if (j.is_string())
        return Rational::from_decimal(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<std::int64_t>(), 1);
    if (j.is_number())
        return Rational::from_decimal(j.dump());
    throw ParseError("gen spec: 'rate' must be a number or decimal string");
}

} // namespace

GenSpec parse_gen_spec(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("gen spec: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("gen spec: top level must be an object");
    GenSpec spec;
    if (auto it = doc.find("flood"); it != doc.end()) {
        const json& f = *it;
        if (!f.is_object())
            throw ParseError("gen spec: 'flood' must be an object");
        FloodSpec fs;
        try {
            fs.signature = f.at("signature").get<std::string>();
            fs.dst = f.at("dst").get<std::string>();
            fs.duration = ts_from_seconds(f.at("duration").get<double>());
        } catch (const json::exception& e) {
            throw ParseError(std::string("gen spec: flood: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("gen spec: flood: ") + e.what());
        }
        const bool has_rate = f.contains("rate");
        const bool has_count = f.contains("count");
        if (has_rate == has_count)
            throw ParseError("gen spec: flood needs exactly one of 'rate'/'count'");
        try {
            if (has_rate)
                fs.rate = rate_from_json(f.at("rate"));
            else
                fs.count = f.at("count").get<std::int64_t>();
            fs.randomize_src = f.value("randomize_src", false);
            if (f.contains("src"))
                fs.src = f.at("src").get<std::string>();
            fs.seed = f.value("seed", std::uint64_t{0});
            if (f.contains("cap"))
                fs.cap = f.at("cap").get<std::int64_t>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("gen spec: flood: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("gen spec: flood: ") + e.what());
        }
        spec.flood = std::move(fs);
    }
    if (auto it = doc.find("scenario"); it != doc.end()) {
        const json& s = *it;
        if (!s.is_object() || !s.contains("steps") || !s.at("steps").is_array())
            throw ParseError("gen spec: 'scenario' must be an object with a 'steps' array");
        ScenarioSpec sc;
        for (const auto& st : s.at("steps")) {
            try {
                sc.steps.push_back({st.at("signature").get<std::string>(),
                                    st.at("src").get<std::string>(), st.at("dst").get<std::string>(),
                                    ts_from_seconds(st.at("ts").get<double>())});
            } catch (const json::exception& e) {
                throw ParseError(std::string("gen spec: scenario: ") + e.what());
            } catch (const std::invalid_argument& e) {
                throw ParseError(std::string("gen spec: scenario: ") + e.what());
            }
        }
        spec.scenario = std::move(sc);
    }
    if (!spec.flood && !spec.scenario)
        throw ParseError("gen spec: needs 'flood' and/or 'scenario'");
    return spec;
}

std::vector<Alert> generate(const GenSpec& spec) {
    std::vector<Alert> alerts;
    if (spec.flood)
        alerts = gen_flood(*spec.flood);
    if (spec.scenario)
        alerts = inject_scenario(std::move(alerts), *spec.scenario);
    return alerts;
}

} // namespace quench
