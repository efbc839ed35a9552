#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace pell {

using BigInt = boost::multiprecision::cpp_int;
// Always normalized to lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned k) { return BigInt(1) << k; }

inline Rational make_rational(const BigInt &num, const BigInt &den) { return Rational(num, den); }

// 2^e for possibly negative e, exact.
inline Rational pow2_rational(long e) {
    if (e >= 0) return Rational(pow2(static_cast<unsigned>(e)));
    return Rational(BigInt(1), pow2(static_cast<unsigned>(-e)));
}

}  // namespace pell
