#include "nsbox/rational.hpp"

#include <cmath>
#include <cstddef>

#include "nsbox/errors.hpp"

namespace nsbox {

Rational rat(long num, long den) {
    if (den == 0)
        fail(Errc::parse_error, "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational rat_from_double(double value) {
    if (!std::isfinite(value))
        fail(Errc::parse_error, "non-finite double cannot become a rational");
    return Rational(value); // mpq_set_d is exact for finite doubles
}

Rational rat_from_string(const std::string& text) {
    if (text.empty())
        fail(Errc::parse_error, "empty rational literal");

    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational q;
        if (q.set_str(text, 10) != 0)
            fail(Errc::parse_error, "bad rational literal '" + text + "'");
        if (q.get_den() == 0)
            fail(Errc::parse_error, "zero denominator in '" + text + "'");
        q.canonicalize();
        return q;
    }

    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        BigInt n;
        if (n.set_str(text, 10) != 0)
            fail(Errc::parse_error, "bad integer literal '" + text + "'");
        return Rational(n);
    }

    // Decimal literal: digits.digits => digits concatenated over 10^k.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        fail(Errc::parse_error, "bad decimal literal '" + text + "'");
    BigInt num;
    if (num.set_str(digits, 10) != 0)
        fail(Errc::parse_error, "bad decimal literal '" + text + "'");
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_len; ++i)
        den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double rat_to_double(const Rational& q) {
    return q.get_d();
}

} // namespace nsbox
