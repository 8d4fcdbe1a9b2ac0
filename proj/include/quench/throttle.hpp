#pragma once

#include <cstdint>
#include <optional>

#include "quench/errors.hpp"
#include "quench/rational.hpp"
#include "quench/time.hpp"

namespace quench {

enum class Decision { pass, overlimit };

// Token bucket with exact rational credit. Credit is held in integer units of
// 1/(rate.den * 1e6) token so refills over integer-microsecond intervals never
// accumulate floating-point drift.
class TokenBucket {
public:
    // Starts full at t = 0.
    TokenBucket(Rational rate, std::int64_t capacity);

    // Explicit initial fill (whole tokens) and epoch, for tests and replays.
    TokenBucket(Rational rate, std::int64_t capacity, std::int64_t initial_tokens, Micros t0);

    // Refill up to `now`, then take one token if available. `now` more than
    // the tolerance behind the last refill throws ClockRegressionError; small
    // regressions (sensor jitter) consume against current credit without
    // moving the clock backwards.
    Decision try_consume(Micros now);

    double tokens() const noexcept {
        return static_cast<double>(credit_units_) / static_cast<double>(token_units_);
    }
    std::int64_t capacity() const noexcept { return capacity_units_ / token_units_; }
    Micros last_refill() const noexcept { return last_refill_; }

    static constexpr Micros kClockTolerance = kMicrosPerSecond;

private:
    std::int64_t rate_num_;      // units accrued per elapsed microsecond
    std::int64_t token_units_;   // units per whole token = rate.den * 1e6
    std::int64_t capacity_units_;
    std::int64_t credit_units_;
    Micros last_refill_;
};

struct SuppressionSummary {
    std::int64_t count = 0;
    Micros first_ts = 0;
    Micros last_ts = 0;
};

// Run-length accounting for overlimit alerts at one filter site: a run is a
// single count plus the first/last timestamps it covers.
class RleCounter {
public:
    void record(Micros ts) {
        if (suppressed_ == 0) {
            first_ts_ = ts;
            last_ts_ = ts;
        } else {
            if (ts < first_ts_) first_ts_ = ts; // jitter-tolerant
            if (ts > last_ts_) last_ts_ = ts;
        }
        ++suppressed_;
    }

    // Returns the summary and resets to empty; nullopt when nothing suppressed.
    std::optional<SuppressionSummary> flush() {
        if (suppressed_ == 0)
            return std::nullopt;
        SuppressionSummary s{suppressed_, first_ts_, last_ts_};
        suppressed_ = 0;
        first_ts_ = 0;
        last_ts_ = 0;
        return s;
    }

    std::int64_t suppressed() const noexcept { return suppressed_; }

private:
    std::int64_t suppressed_ = 0;
    Micros first_ts_ = 0;
    Micros last_ts_ = 0;
};

} // namespace quench
