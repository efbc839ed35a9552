#pragma once

// Closed-form constants and predicted densities, each paired with a bound on
// the discarded tail. Rational cores stay exact; infinite products and sums
// are evaluated in long double.

#include "pell/arith.hpp"
#include "pell/errors.hpp"
#include "pell/f2linalg.hpp"
#include "pell/rational.hpp"

#include <cmath>
#include <vector>

namespace pell::model {

using Real = long double;

struct Bounded {
    Real value = 0;
    Real tail = 0;  // |true value - value| <= tail
};

inline Real to_real(const Rational &r) { return r.convert_to<Real>(); }

// eta_k = prod_{j=1}^k (1 - 2^{-j}), exact.
inline Rational eta(unsigned k) {
    Rational p(1);
    for (unsigned j = 1; j <= k; ++j) p *= Rational(1) - pow2_rational(-static_cast<long>(j));
    return p;
}

inline Real eta_real(unsigned k) {
    Real p = 1;
    for (unsigned j = 1; j <= k; ++j) p *= 1 - std::ldexp(Real(1), -static_cast<int>(j));
    return p;
}

// eta_k (1 - 2^{-k}) <= eta_inf <= eta_k.
inline Bounded eta_inf(Real tol = 1e-15L) {
    require(tol > 0, "eta_inf: tol must be positive");
    unsigned k = 1;
    while (std::ldexp(Real(1), -static_cast<int>(k)) > tol && k < 120) ++k;
    const Real v = eta_real(k);
    return {v, v * std::ldexp(Real(1), -static_cast<int>(k))};
}

// 2^{-j^2} eta_inf eta_j^{-2}: the limiting probability of 4-rank j.
inline Real fourrank_prob(unsigned j) {
    const Real e = eta_real(j);
    return std::ldexp(Real(1), -static_cast<int>(j * j)) * eta_inf(1e-18L).value / (e * e);
}

// gamma = sum_j fourrank_prob(j) / (2^{j+1} - 1).
inline Bounded gamma_constant(Real tol = 1e-14L) {
    require(tol >= 1e-14L, "gamma_constant: tol below 1e-14");
    const auto ei = eta_inf(1e-18L);
    Bounded g;
    unsigned J = 0;
    for (;; ++J) {
        g.value += fourrank_prob(J) / (std::ldexp(Real(1), static_cast<int>(J + 1)) - 1);
        const Real tail = 7 * std::ldexp(Real(1), -static_cast<int>((J + 1) * (J + 1)));
        if (tail < tol / 2) {
            g.tail = tail + ei.tail / ei.value;
            break;
        }
    }
    return g;
}

// Regression value of gamma computed by gamma_constant and frozen here.
inline constexpr Real gamma_reference = 0.5L;

// Stevenhagen's constant prod_{j>=1} (1 + 2^{-j})^{-1}.
inline Bounded alpha_bounded() {
    const unsigned k = 64;
    Real p = 1;
    for (unsigned j = 1; j <= k; ++j) p /= 1 + std::ldexp(Real(1), -static_cast<int>(j));
    // prod_{j>k} (1 + 2^{-j}) <= exp(2^{-k})
    return {p, p * std::ldexp(Real(1), -static_cast<int>(k))};
}

inline Real alpha() { return alpha_bounded().value; }

// beta = sum_{n>=0} 2^{-n(n+3)/2}; the tail after N is below 2 * 2^{-(N+1)(N+4)/2}.
inline Bounded beta_bounded() {
    const unsigned N = 12;
    Real s = 0;
    for (unsigned n = 0; n <= N; ++n) s += std::ldexp(Real(1), -static_cast<int>(n * (n + 3) / 2));
    return {s, 2 * std::ldexp(Real(1), -static_cast<int>((N + 1) * (N + 4) / 2))};
}

inline Real beta() { return beta_bounded().value; }

// The local factor delta(l) of the asymptotic for S_Q, by l mod 8.
inline Rational delta_l(arith::i64 l) {
    require(l != -1 && arith::supported_l(l), "delta_l: |l| must be a prime congruent to 3 mod 4");
    switch (arith::mod(l, 8)) {
        case 1: return Rational(3, 2);
        case 3: return Rational(3, 4);
        case 5: return Rational(1);
        case 7: return Rational(3, 4);
    }
    throw InvariantError("delta_l: impossible residue");
}

// Pr_{l,2}(n) = 1 / (2^{n+1} - 1).
inline Rational conditional_solubility(unsigned n) {
    require(n < 1000, "conditional_solubility: n too large");
    return Rational(BigInt(1), pow2(n + 1) - 1);
}

// f(n, m) / alpha = P(n,n,m) / (2^n prod_{j=1}^n (2^j - 1)), exact.
inline Rational f_nm_coefficient(unsigned n, unsigned m) {
    require(m <= n && n <= 64, "f_nm: need 0 <= m <= n <= 64");
    BigInt den = pow2(n);
    for (unsigned j = 1; j <= n; ++j) den *= pow2(j) - 1;
    return f2::prob_kernel_rank(n, n, m) / Rational(den);
}

inline Real f_nm(unsigned n, unsigned m) { return alpha() * to_real(f_nm_coefficient(n, m)); }

// Limiting probability that the 4-rank is n in the l = -1 family.
inline Real rk4_prob_minus_one(unsigned n) {
    require(n <= 64, "rk4_prob_minus_one: n too large");
    BigInt den = 1;
    for (unsigned j = 1; j <= n; ++j) den *= pow2(j) - 1;
    return alpha() / to_real(Rational(den));
}

struct PellBounds {
    Real lower = 0;
    Real upper = 0;
    Real tail = 0;  // bound on the effect of truncating n at N_t
};

inline PellBounds pell_bounds(unsigned N_t = 20) {
    require(N_t >= 20 && N_t <= 64, "pell_bounds: truncation must lie in [20, 64]");
    const Real a = alpha();
    PellBounds b;
    b.lower = beta() * a;
    b.upper = Real(2) / 3;
    for (unsigned n = 1; n <= N_t; ++n) {
        for (unsigned m = 1; m <= n; ++m) {
            const Real f = a * to_real(f_nm_coefficient(n, m));
            if (f == 0) continue;
            const Real g = to_real(f2::g_exact(n, m));
            const Real pm = std::ldexp(Real(1), static_cast<int>(m));
            b.lower += f * g / (2 * pm - 1);
            b.upper -= f * (pm - 1) / pm;
            b.upper -= f * g / pm * (pm - 1) / (2 * pm - 1);
        }
    }
    // sum_{n > N_t} sum_m f(n, m) <= alpha / eta_inf * sum_{n > N_t} 2^{-n(n+3)/2}; weights are at most 2.
    b.tail = 4 * a / eta_inf().value * std::ldexp(Real(1), -static_cast<int>((N_t + 1) * (N_t + 4) / 2));
    return b;
}

}  // namespace pell::model
