#include "pell/arith.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace pell;
using namespace pell::arith;

TEST(Jacobi, Examples) {
    EXPECT_EQ(jacobi(2, 15), 1);
    EXPECT_EQ(jacobi(3, 7), -1);
    for (i64 a : {-5, 0, 1, 17}) EXPECT_EQ(jacobi(a, 1), 1);
    EXPECT_THROW(jacobi(3, 8), InputError);
    EXPECT_THROW(jacobi(3, -7), InputError);
}

TEST(Jacobi, MatchesEulerOnPrimes) {
    for (i64 p = 3; p < 400; p += 2) {
        if (!oracle::is_prime(p)) continue;
        for (i64 a = -50; a < 50; ++a) ASSERT_EQ(jacobi(a, p), oracle::legendre(a, p)) << a << "/" << p;
    }
}

TEST(Jacobi, Reciprocity) {
    std::mt19937_64 rng(3);
    int done = 0;
    while (done < 10000) {
        const i64 m = 2 * static_cast<i64>(rng() % 500000) + 3, n = 2 * static_cast<i64>(rng() % 500000) + 3;
        if (std::gcd(m, n) != 1) continue;
        const int sign = (((m - 1) / 2) * ((n - 1) / 2)) % 2 ? -1 : 1;
        ASSERT_EQ(jacobi(m, n) * jacobi(n, m), sign) << m << " " << n;
        ++done;
    }
}

TEST(Jacobi, ZeroIffCommonFactor) {
    for (i64 n = 1; n < 200; n += 2)
        for (i64 a = 0; a < 60; ++a) ASSERT_EQ(jacobi(a, n) == 0, std::gcd(a, n) > 1);
}

TEST(Sieve, Examples) {
    // 2,3,5,6,7,10,11,13,14,15,17,19; the value 1 lies outside the range.
    EXPECT_EQ(squarefree_sieve(20).size(), 12u);
    EXPECT_EQ(squarefree_sieve(3), (std::vector<u64>{2, 3}));
    const auto v = squarefree_sieve(49);
    EXPECT_EQ(std::count(v.begin(), v.end(), 49u), 0);
    EXPECT_EQ(std::count(v.begin(), v.end(), 47u), 1);
}

TEST(Sieve, MatchesTrialDivisionAndFactors) {
    const u64 N = 300000;
    const auto v = squarefree_sieve(N);
    std::vector<u64> expect;
    for (u64 n = 2; n <= N; ++n)
        if (oracle::is_squarefree(n)) expect.push_back(n);
    EXPECT_EQ(v, expect);

    SquarefreeSieve sieve(999000, 1001000, 512);
    SquarefreeSieve::Entry e;
    u64 count = 0;
    while (sieve.next(e)) {
        ++count;
        u64 prod = 1;
        for (auto p : e.factors()) {
            ASSERT_TRUE(oracle::is_prime(p));
            prod *= p;
        }
        ASSERT_EQ(prod, e.n);
    }
    u64 expect_count = 0;
    for (u64 n = 999000; n <= 1001000; ++n) expect_count += oracle::is_squarefree(n);
    EXPECT_EQ(count, expect_count);
}

TEST(Factor, Examples) {
    auto f = factor(34);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].prime, 2u);
    EXPECT_EQ(f[1].prime, 17u);
    f = factor(105);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[2].prime, 7u);
    f = factor(999966000289ULL);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].prime, 999983u);
    EXPECT_EQ(f[0].exponent, 2u);
    EXPECT_THROW(factor(0), InputError);
    EXPECT_THROW(factor(1'000'000'000'001ULL), InputError);
}

TEST(Factor, RandomProductsRoundTrip) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 2000; ++k) {
        const u64 n = 1 + rng() % 1'000'000'000'000ULL;
        u64 prod = 1;
        u64 last = 0;
        for (const auto &pp : factor(n)) {
            ASSERT_GT(pp.prime, last);
            ASSERT_TRUE(is_prime(pp.prime));
            last = pp.prime;
            for (unsigned e = 0; e < pp.exponent; ++e) prod *= pp.prime;
        }
        ASSERT_EQ(prod, n);
    }
}

TEST(Genus, Examples) {
    auto f = genus_components(34);
    ASSERT_EQ(f.t(), 2u);
    EXPECT_EQ(f.components[0].discriminant, 8);
    EXPECT_EQ(f.components[1].discriminant, 17);
    f = genus_components(3);
    ASSERT_EQ(f.t(), 2u);
    EXPECT_EQ(f.components[0].discriminant, -4);
    EXPECT_EQ(f.components[1].discriminant, -3);
    f = genus_components(5);
    ASSERT_EQ(f.t(), 1u);
    EXPECT_EQ(f.components[0].discriminant, 5);
    EXPECT_THROW(genus_components(12), InputError);
}

TEST(Genus, EvalExamples) {
    const GenusCharacter c5{CharacterKind::odd_prime, 5, 5};
    const GenusCharacter c8{CharacterKind::eight, 2, 8};
    const GenusCharacter m4{CharacterKind::minus_four, 2, -4};
    EXPECT_EQ(eval_character(c5, 3), 1);
    EXPECT_EQ(eval_character(c8, 17), 0);
    for (i64 q : {5, 13, 17, 29}) EXPECT_EQ(eval_character(m4, q), 0);
    EXPECT_THROW(eval_character(c5, 5), InputError);
}

TEST(Genus, ProductOfComponentsIsKronecker) {
    std::mt19937_64 rng(5);
    std::vector<i64> primes;
    for (i64 p = 3; primes.size() < 3000; p += 2)
        if (oracle::is_prime(p)) primes.push_back(p);
    int done = 0;
    while (done < 1000) {
        const u64 d = 2 + rng() % 10'000'000;
        if (!oracle::is_squarefree(d)) continue;
        ++done;
        const auto f = genus_components(d);
        i64 prod = 1;
        for (const auto &c : f.components) prod *= c.discriminant;
        ASSERT_EQ(prod, f.delta);
        int checked = 0;
        while (checked < 50) {
            const i64 q = primes[rng() % primes.size()];
            if (d % q == 0) continue;
            ++checked;
            int sum = 0;
            for (const auto &c : f.components) sum ^= eval_character(c, q);
            ASSERT_EQ(sum == 0 ? 1 : -1, oracle::legendre(f.delta, q)) << d << " at " << q;
        }
    }
}

TEST(Family, Examples) {
    EXPECT_EQ(in_family(33, 3), FamilyStatus::yes);
    EXPECT_EQ(in_family(3, 3), FamilyStatus::fails_ed2);
    EXPECT_EQ(in_family(15, 3), FamilyStatus::fails_ed);
    EXPECT_EQ(in_family(10, 3), FamilyStatus::not_divisible);
    EXPECT_EQ(in_family(18, 3), FamilyStatus::not_squarefree);
    EXPECT_EQ(in_family(10, -1), FamilyStatus::yes);
    EXPECT_EQ(in_family(21, -1), FamilyStatus::fails_ed);
    EXPECT_THROW(in_family(33, 5), InputError);
    EXPECT_THROW(in_family(33, 1), InputError);
}

TEST(Family, MatchesRationalSolubility) {
    // (ed) + (ed2) are equivalent to l | d plus a rational point on x^2 - d y^2 = l z^2.
    for (i64 l : {-1, 3, -3, 7, -7, 11, -11, 19, -19}) {
        for (u64 d = 2; d <= 6000; ++d) {
            if (!oracle::is_squarefree(d)) continue;
            const auto st = in_family(d, l);
            const bool divides = l == -1 || d % static_cast<u64>(l < 0 ? -l : l) == 0;
            if (!divides) {
                ASSERT_EQ(st, FamilyStatus::not_divisible);
                continue;
            }
            ASSERT_EQ(st == FamilyStatus::yes, rationally_soluble(d, l)) << "d=" << d << " l=" << l;
        }
    }
}

TEST(Conic, PointsAreValid) {
    for (i64 A = -60; A <= 60; ++A)
        for (i64 B = -60; B <= 60; ++B) {
            if (A == 0 || B == 0 || !oracle::is_squarefree(A < 0 ? -A : A) || !oracle::is_squarefree(B < 0 ? -B : B))
                continue;
            const auto p = solve_conic(A, B);
            if (!p) continue;
            ASSERT_TRUE(p->y != 0 || p->z != 0);
            ASSERT_EQ(static_cast<i128>(p->x) * p->x,
                      static_cast<i128>(A) * p->y * p->y + static_cast<i128>(B) * p->z * p->z);
        }
    // 3 is not a norm from Q(sqrt 5): no point on x^2 = 5y^2 + 3z^2.
    EXPECT_FALSE(solve_conic(5, 3).has_value());
    EXPECT_TRUE(solve_conic(10, -1).has_value());
}

TEST(Conic, HolzerBoxIsExhaustive) {
    // Compare against a much larger search window.
    for (i64 A = 2; A <= 40; ++A)
        for (i64 B = -40; B <= 40; ++B) {
            if (B == 0 || !oracle::is_squarefree(A) || !oracle::is_squarefree(B < 0 ? -B : B)) continue;
            bool found = false;
            for (i64 y = 0; y <= 60 && !found; ++y)
                for (i64 z = 0; z <= 60 && !found; ++z) {
                    if (y == 0 && z == 0) continue;
                    const i64 v = A * y * y + B * z * z;
                    found = v >= 0 && is_square(v);
                }
            ASSERT_EQ(found, solve_conic(A, B).has_value()) << A << " " << B;
        }
}

TEST(SqrtMod, TonelliShanks) {
    for (u64 p : {3ULL, 5ULL, 17ULL, 97ULL, 257ULL, 65537ULL, 999983ULL}) {
        for (i64 a = 1; a < 200; ++a) {
            if (oracle::legendre(a, static_cast<long long>(p)) != 1) continue;
            const u64 s = sqrt_mod_prime(a, p);
            ASSERT_EQ(mulmod(s, s, p), static_cast<u64>(a) % p);
        }
    }
}
