#include "evm/rational.hpp"

#include <cctype>
#include <numeric>

#include "evm/errors.hpp"

namespace evm {

Rational::Rational(long long n, long long d) {
    if (d == 0) throw DomainError("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

namespace {

long long parse_integer(std::string_view text, std::string_view whole) {
    if (text.empty()) throw DomainError("malformed rational '" + std::string(whole) + "'");
    long long v = 0;
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw DomainError("malformed rational '" + std::string(whole) + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    const std::string_view whole = text;
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational r;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        r = Rational(parse_integer(text.substr(0, slash), whole), parse_integer(text.substr(slash + 1), whole));
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view frac = text.substr(dot + 1);
        long long scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const long long ip = dot == 0 ? 0 : parse_integer(text.substr(0, dot), whole);
        const long long fp = frac.empty() ? 0 : parse_integer(frac, whole);
        r = Rational(ip * scale + fp, scale);
    } else {
        r = Rational(parse_integer(text, whole));
    }
    if (negative) r.num = -r.num;
    return r;
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace evm
