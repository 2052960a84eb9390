#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace arithbf {

// Exact integer used wherever counts, orders, or coefficients can outgrow
// 64 bits (pair counts, unit-class counts, polynomial coefficients).
using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow_big(const BigInt& base, std::int64_t exp)
{
    if (exp < 0) throw std::invalid_argument("pow_big: negative exponent");
    BigInt r = 1, b = base;
    std::int64_t e = exp;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline std::int64_t to_i64_checked(const BigInt& v, const char* what = "value")
{
    if (v < std::numeric_limits<std::int64_t>::min() ||
        v > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error(std::string(what) + ": value exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

// Floor of sqrt for nonnegative 64-bit input.
inline std::int64_t isqrt_i64(std::int64_t n)
{
    if (n < 0) throw std::invalid_argument("isqrt_i64: negative input");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<__int128>(r) * r > n) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline std::string big_to_string(const BigInt& v) { return v.str(); }

} // namespace arithbf
