#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace quench {

// All timestamps are integer microseconds since the stream epoch (t = 0).
// Alerts carry seconds on the wire; everything internal is exact integer math.
using Micros = std::int64_t;

inline constexpr Micros kMicrosPerSecond = 1'000'000;

inline Micros ts_from_seconds(double seconds) {
    if (!std::isfinite(seconds))
        throw std::invalid_argument("timestamp is not finite");
    if (seconds < 0.0)
        throw std::invalid_argument("timestamp is negative");
    const double scaled = seconds * static_cast<double>(kMicrosPerSecond);
    if (scaled > static_cast<double>(std::numeric_limits<Micros>::max() / 2))
        throw std::invalid_argument("timestamp out of range");
    return static_cast<Micros>(std::llround(scaled));
}

inline double ts_to_seconds(Micros ts) {
    return static_cast<double>(ts) / static_cast<double>(kMicrosPerSecond);
}

// Decimal seconds with trailing zeros trimmed: 40999863 -> "40.999863", 0 -> "0".
inline std::string format_ts(Micros ts) {
    const bool neg = ts < 0;
    const Micros abs = neg ? -ts : ts;
    std::string out = neg ? "-" : "";
    out += std::to_string(abs / kMicrosPerSecond);
    Micros frac = abs % kMicrosPerSecond;
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(frac));
        std::string digits(buf);
        while (!digits.empty() && digits.back() == '0')
            digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

} // namespace quench
