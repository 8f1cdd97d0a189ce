#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>

namespace ctlab {

// Exact probabilities and utilities. Everything in exact mode is a Rat;
// Monte Carlo estimates are doubles and are labeled as such.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// Parses "a/b" or "a" (optionally signed). Throws std::invalid_argument on junk.
inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            // allow decimal literals like 0.01 for config convenience
            auto dot = s.find('.');
            if (dot == std::string::npos) return Rat(BigInt(s));
            std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
            bool neg = !whole.empty() && whole[0] == '-';
            if (neg) whole = whole.substr(1);
            if (whole.empty()) whole = "0";
            BigInt den = 1;
            for (size_t i = 0; i < frac.size(); ++i) den *= 10;
            Rat r = Rat(BigInt(whole)) + Rat(BigInt(frac), den);
            return neg ? -r : r;
        }
        return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

}  // namespace ctlab
