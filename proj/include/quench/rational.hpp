#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quench {

// Exact non-negative rational, used for token rates. Kept deliberately small:
// rates come from config as short decimal strings ("2", "0.5", "7343").
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1; // > 0, gcd(num, den) == 1

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0)
            throw std::invalid_argument("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    // Accepts "N", "N.F", ".F" with at most 6 fractional digits (microsecond
    // granularity; keeps bucket arithmetic within 64-bit range).
    static Rational from_decimal(std::string_view text) {
        if (text.empty())
            throw std::invalid_argument("empty rational literal");
        std::string_view intpart = text;
        std::string_view fracpart;
        if (const auto dot = text.find('.'); dot != std::string_view::npos) {
            intpart = text.substr(0, dot);
            fracpart = text.substr(dot + 1);
            if (fracpart.empty())
                throw std::invalid_argument("trailing decimal point in: " + std::string(text));
            if (fracpart.size() > 6)
                throw std::invalid_argument("more than 6 decimal places in: " + std::string(text));
        }
        auto digits_value = [&](std::string_view s) -> std::int64_t {
            std::int64_t v = 0;
            for (char c : s) {
                if (c < '0' || c > '9')
                    throw std::invalid_argument("bad rational literal: " + std::string(text));
                if (v > (INT64_MAX - 9) / 10)
                    throw std::invalid_argument("rational literal out of range: " + std::string(text));
                v = v * 10 + (c - '0');
            }
            return v;
        };
        std::int64_t whole = intpart.empty() ? 0 : digits_value(intpart);
        std::int64_t frac = 0;
        std::int64_t scale = 1;
        if (!fracpart.empty()) {
            frac = digits_value(fracpart);
            for (std::size_t i = 0; i < fracpart.size(); ++i)
                scale *= 10;
        }
        return Rational(whole * scale + frac, scale);
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1)
            return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    bool positive() const noexcept { return num > 0; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num == b.num && a.den == b.den;
    }
};

} // namespace quench
