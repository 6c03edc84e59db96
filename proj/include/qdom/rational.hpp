#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdom {

// Exact rational arithmetic for every carrier where the algebra laws are
// exact equalities (unit interval, subdistributions, piecewise-linear
// functions). Arbitrary precision so that repeated sums/products never
// overflow at desk scale.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline bool in_unit_interval(const Rat& r) { return r >= 0 && r <= 1; }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Canonical text form: "3", "-1/2". Denominator printed only when != 1.
inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "n", "n/d", with optional sign on the numerator.
inline std::optional<Rat> parse_rat(std::string_view text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rat(Int(std::string(text)));
        }
        Int num{std::string(text.substr(0, slash))};
        Int den{std::string(text.substr(slash + 1))};
        if (den == 0) return std::nullopt;
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

inline Rat parse_rat_or_throw(std::string_view text) {
    auto r = parse_rat(text);
    if (!r) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    return *r;
}

// 2^-k as an exact rational.
inline Rat pow2_inv(unsigned k) {
    Int den = Int(1) << k;
    return Rat(1, den);
}

}  // namespace qdom
