#ifndef FORMALITY_RATIONAL_HPP
#define FORMALITY_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace formality {

// Every scalar in the system is an exact rational; there is no floating
// point anywhere.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rational_pow(const Rational& q, long e) {
    Rational r(1);
    Rational base = e >= 0 ? q : Rational(1) / q;
    long n = e >= 0 ? e : -e;
    for (long i = 0; i < n; ++i) r *= base;
    return r;
}

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// Accepts "p", "-p", "p/q" with optional sign on the numerator.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&] { return Error(ErrorCode::ParseError, "not a rational: '" + text + "'"); };
    if (text.empty()) throw bad();
    std::string num = text, den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
        if (num.empty() || den.empty()) throw bad();
    }
    auto check_digits = [&](const std::string& s, bool sign_ok) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (i == 0 && sign_ok && (c == '-' || c == '+') && s.size() > 1) continue;
            if (c < '0' || c > '9') throw bad();
        }
    };
    check_digits(num, true);
    check_digits(den, false);
    Integer d(den);
    if (d == 0) throw bad();
    return Rational(Integer(num), d);
}

// |q| not in {0, 1}; over the rationals this is exactly "non-root of unity".
inline bool is_valid_grading_scalar(const Rational& q) {
    return q != 0 && q != 1 && q != -1;
}

} // namespace formality

#endif
