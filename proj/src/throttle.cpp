#include "quench/throttle.hpp"

#include <stdexcept>

#include "quench/time.hpp"

namespace quench {

namespace {

std::int64_t checked_units(Rational rate, std::int64_t capacity) {
    if (!rate.positive())
        throw std::invalid_argument("token rate must be positive");
    if (capacity <= 0)
        throw std::invalid_argument("bucket capacity must be positive");
    const __int128 token_units = static_cast<__int128>(rate.den) * kMicrosPerSecond;
    const __int128 cap_units = token_units * capacity;
    if (cap_units > INT64_MAX)
        throw std::invalid_argument("rate/capacity combination out of range");
    return static_cast<std::int64_t>(token_units);
}

} // namespace

TokenBucket::TokenBucket(Rational rate, std::int64_t capacity)
    : TokenBucket(rate, capacity, capacity, 0) {}

TokenBucket::TokenBucket(Rational rate, std::int64_t capacity, std::int64_t initial_tokens, Micros t0)
    : rate_num_(rate.num),
      token_units_(checked_units(rate, capacity)),
      capacity_units_(token_units_ * capacity),
      credit_units_(0),
      last_refill_(t0) {
    if (initial_tokens < 0 || initial_tokens > capacity)
        throw std::invalid_argument("initial fill outside [0, capacity]");
    credit_units_ = token_units_ * initial_tokens;
}

Decision TokenBucket::try_consume(Micros now) {
    Micros dt = now - last_refill_;
    if (dt < 0) {
        if (-dt > kClockTolerance)
            throw ClockRegressionError("bucket clock moved back " + format_ts(-dt) +
                                       "s, beyond tolerance " + format_ts(kClockTolerance) + "s");
        dt = 0; // jitter: consume against current credit, clock stays put
    } else {
        const __int128 accrued = static_cast<__int128>(rate_num_) * dt;
        const __int128 next = static_cast<__int128>(credit_units_) + accrued;
        credit_units_ = next > capacity_units_ ? capacity_units_ : static_cast<std::int64_t>(next);
        last_refill_ = now;
    }
    if (credit_units_ >= token_units_) {
        credit_units_ -= token_units_;
        return Decision::pass;
    }
    return Decision::overlimit;
}

} // namespace quench
