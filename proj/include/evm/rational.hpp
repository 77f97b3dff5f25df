#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace evm {

/// Non-negative-denominator fraction, kept reduced. Thresholds and fitness scores.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1);

    /// Accepts "7", "-2", "7/2" and finite decimals such as "0.95".
    static Rational parse(std::string_view text);
    std::string str() const;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den <=> static_cast<__int128>(b.num) * a.den;
    }
};

}  // namespace evm
