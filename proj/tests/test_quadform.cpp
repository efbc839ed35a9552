#include "pell/quadform.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace pell;
using namespace pell::qf;
using arith::i64;
using arith::u64;

namespace {

bool is_fundamental_d(u64 d) { return d > 1 && oracle::is_squarefree(d); }

}  // namespace

TEST(Principal, Examples) {
    const auto f = principal_form(33);
    EXPECT_EQ(f, BQF(1, 1, -8));
    EXPECT_EQ(f.eval(5, 2), 3);
    EXPECT_EQ(principal_form(10), BQF(1, 0, -10));
    EXPECT_EQ(principal_form(5).eval(1, 1), 1);
    EXPECT_THROW(principal_form(12), InputError);
}

TEST(Reduction, Examples) {
    const auto c = cycle(BQF(1, 2, -2));
    std::set<i64> leads;
    for (const auto &f : c.cycle) leads.insert(f.a);
    EXPECT_EQ(leads, (std::set<i64>{1, -2}));

    bool minus_one = false;
    for (const auto &f : cycle(principal_form(10)).cycle) minus_one |= f.a == -1;
    EXPECT_TRUE(minus_one);

    Reducer red(40);
    for (const auto &f : cycle(principal_form(10)).cycle) EXPECT_EQ(red.reduce(f), f);
    EXPECT_THROW(reduce(BQF(2, 4, -2)), InputError);
    EXPECT_THROW(Reducer(16), InputError);
}

TEST(Reduction, TrackedMatrixTransformsForm) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 2000; ++k) {
        const i64 a = static_cast<i64>(rng() % 2001) - 1000, b = static_cast<i64>(rng() % 2001) - 1000,
                  c = static_cast<i64>(rng() % 2001) - 1000;
        const i64 D = b * b - 4 * a * c;
        if (a == 0 || c == 0 || D <= 0 || arith::is_square(D) || std::gcd(std::gcd(a, b), c) != 1) continue;
        const BQF f(a, b, c);
        Reducer red(D);
        Mat2 M;
        const BQF g = red.reduce_tracked(f, M);
        ASSERT_TRUE(red.is_reduced(g));
        ASSERT_EQ(M.p * M.s - M.q * M.r, 1);
        // g(x, y) = f(p x + q y, r x + s y)
        for (int x = -2; x <= 2; ++x)
            for (int y = -2; y <= 2; ++y)
                ASSERT_EQ(g.eval(x, y), f.eval(M.p * x + M.q * y, M.r * x + M.s * y));
        const auto cyc = cycle(f);
        ASSERT_EQ(cyc.cycle.size() % 2, 0u);
        for (const auto &h : cyc.cycle) ASSERT_TRUE(red.is_reduced(h));
        ASSERT_EQ(cyc.canonical, *std::min_element(cyc.cycle.begin(), cyc.cycle.end()));
    }
}

TEST(ClassGroup, Examples) {
    auto g = narrow_class_group(40);
    EXPECT_EQ(g.narrow_invariants, (std::vector<u64>{2}));
    EXPECT_EQ(g.ordinary_invariants, (std::vector<u64>{2}));
    EXPECT_TRUE(g.negative_pell);
    g = narrow_class_group(5);
    EXPECT_TRUE(g.narrow_invariants.empty());
    EXPECT_TRUE(g.ordinary_invariants.empty());
    EXPECT_TRUE(g.negative_pell);
    g = narrow_class_group(136);
    EXPECT_EQ(g.narrow_invariants, (std::vector<u64>{4}));
    EXPECT_FALSE(g.negative_pell);
    EXPECT_THROW(narrow_class_group(12 * 4), InputError);
    EXPECT_THROW(narrow_class_group(4 * 5'000'001 + 4), InputError);
}

TEST(ClassGroup, KnownClassNumbers) {
    // h+(Q(sqrt d)) for small d, and h of the maximal order.
    struct Row { u64 d; std::size_t hplus, h; };
    for (auto r : {Row{3, 2, 1}, Row{15, 4, 2}, Row{79, 6, 3}, Row{229, 3, 3}, Row{401, 5, 5}, Row{82, 4, 4},
                   Row{226, 8, 8}, Row{1155, 16, 8}}) {
        FormClassGroup G(fundamental_discriminant(r.d));
        const auto s = G.structure();
        EXPECT_EQ(s.narrow_order, r.hplus) << r.d;
        EXPECT_EQ(s.ordinary_order, r.h) << r.d;
    }
}

TEST(ClassGroup, CompositionExamples) {
    FormClassGroup G(40);
    ASSERT_EQ(G.order(), 2u);
    const std::size_t X = 1 - G.identity();
    EXPECT_EQ(G.compose(G.identity(), X), X);
    EXPECT_EQ(G.compose(X, X), G.identity());
    const auto P = cycle(principal_form(10));
    const auto XX = compose(G.at(X), G.at(X));
    EXPECT_EQ(XX, P);
    EXPECT_THROW(compose(P, cycle(principal_form(5))), InputError);
}

TEST(ClassGroup, GroupAxioms) {
    std::mt19937_64 rng(9);
    int fields = 0;
    while (fields < 50) {
        const u64 d = 2 + rng() % 20000;
        if (!is_fundamental_d(d)) continue;
        ++fields;
        FormClassGroup G(fundamental_discriminant(d));
        const std::size_t h = G.order(), e = G.identity();
        for (std::size_t x = 0; x < h; ++x) {
            ASSERT_EQ(G.compose(x, e), x);
            ASSERT_EQ(G.compose(x, G.inverse(x)), e);
            ASSERT_EQ(G.power(x, h), e);
        }
        for (int k = 0; k < 1000; ++k) {
            const std::size_t x = rng() % h, y = rng() % h, z = rng() % h;
            ASSERT_EQ(G.compose(G.compose(x, y), z), G.compose(x, G.compose(y, z))) << d;
        }
        // Ambiguous classes square to the identity.
        for (std::size_t x = 0; x < h; ++x)
            if (G.inverse(x) == x) { ASSERT_EQ(G.compose(x, x), e); }
    }
}

TEST(ClassGroup, GenusTheoryAndOrdinaryQuotient) {
    std::mt19937_64 rng(10);
    int done = 0;
    while (done < 1000) {
        const u64 d = 2 + rng() % 30000;
        if (!is_fundamental_d(d)) continue;
        ++done;
        const auto s = narrow_class_group(fundamental_discriminant(d));
        const auto t = arith::genus_components(d).t();
        ASSERT_EQ(s.rk2plus, t - 1) << d;
        ASSERT_LE(s.rk4plus, s.rk2plus);
        ASSERT_LE(s.rk8plus, s.rk4plus);
        ASSERT_TRUE(s.ordinary_order == s.narrow_order || 2 * s.ordinary_order == s.narrow_order);
        ASSERT_EQ(s.ordinary_order == s.narrow_order, negative_pell(d).has_value()) << d;
        ASSERT_EQ(s.negative_pell, negative_pell(d).has_value()) << d;
        u64 prod = 1;
        for (auto n : s.narrow_invariants) prod *= n;
        ASSERT_EQ(prod, s.narrow_order);
        for (std::size_t i = 1; i < s.narrow_invariants.size(); ++i)
            ASSERT_EQ(s.narrow_invariants[i] % s.narrow_invariants[i - 1], 0u);
    }
}

TEST(Represent, Examples) {
    auto w = represents_principal(10, -1);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->x * w->x - 10 * w->y * w->y, -1);
    EXPECT_FALSE(represents_principal(10, 3));
    w = represents_principal(33, 3);
    ASSERT_TRUE(w);
    EXPECT_EQ(principal_form(33).eval(w->x, w->y), 3);
    EXPECT_THROW(represents_principal(10, 0), InputError);
}

TEST(Represent, AgreesWithBruteForce) {
    for (u64 d = 2; d <= 3000; ++d) {
        if (!is_fundamental_d(d)) continue;
        const BQF F = principal_form(d);
        for (i64 m : {-1, 1, 2, -2, 3, -3, 4, 5, -5, 6, 7, -7, 9, 11, -11, 12, 25, -18}) {
            bool brute = false;
            for (i64 y = 0; y <= 300 && !brute; ++y) {
                // F(x, y) = m  <=>  (2a x + b y)^2 = 4a m + D y^2 with a = 1
                const i64 v = 4 * m + F.disc * y * y;
                if (v < 0 || !arith::is_square(v)) continue;
                const i64 r = static_cast<i64>(arith::isqrt(static_cast<u64>(v)));
                brute = (r - F.b * y) % 2 == 0 || (-r - F.b * y) % 2 == 0;
            }
            const auto w = represents_principal(d, m);
            if (brute) { ASSERT_TRUE(w.has_value()) << "d=" << d << " m=" << m; }
            if (w) { ASSERT_EQ(F.eval(w->x, w->y), m); }
        }
    }
}

TEST(NegativePell, Examples) {
    auto w = negative_pell(5);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->x * w->x - 5 * w->y * w->y, -1);
    EXPECT_FALSE(negative_pell(3));
    EXPECT_FALSE(negative_pell(34));
}

TEST(NegativePell, MatchesContinuedFractionParity) {
    for (u64 d = 2; d <= 100000; ++d) {
        if (arith::is_square(static_cast<i64>(d))) continue;
        const bool odd = cf_sqrt(d).period.size() % 2 == 1;
        ASSERT_EQ(negative_pell(d).has_value(), odd) << d;
    }
}

TEST(ContinuedFraction, Examples) {
    auto cf = cf_sqrt(7);
    EXPECT_EQ(cf.a0, 2u);
    EXPECT_EQ(cf.period, (std::vector<u64>{1, 1, 1, 4}));
    auto w = cf_period_solution(7);
    EXPECT_EQ(w.x, 8);
    EXPECT_EQ(w.y, 3);
    cf = cf_sqrt(2);
    EXPECT_EQ(cf.period, (std::vector<u64>{2}));
    w = cf_period_solution(2);
    EXPECT_EQ(w.x * w.x - 2 * w.y * w.y, -1);
    for (u64 k = 1; k < 50; ++k) {
        cf = cf_sqrt(k * k + 1);
        EXPECT_EQ(cf.period, (std::vector<u64>{2 * k}));
        w = cf_period_solution(k * k + 1);
        EXPECT_EQ(w.x, k);
        EXPECT_EQ(w.y, 1);
    }
    EXPECT_THROW(cf_sqrt(49), InputError);
    for (u64 d = 2; d < 3000; ++d) {
        if (arith::is_square(static_cast<i64>(d))) continue;
        const auto s = cf_period_solution(d);
        const int sign = cf_sqrt(d).period.size() % 2 ? -1 : 1;
        ASSERT_EQ(s.x * s.x - BigInt(d) * s.y * s.y, sign) << d;
    }
}

TEST(Solve, Examples) {
    auto r = solve_generalized(33, 3);
    ASSERT_EQ(r.status, SolveStatus::soluble);
    EXPECT_EQ(principal_form(33).eval(r.witness->x, r.witness->y), 3);
    r = solve_generalized(3, 3);
    EXPECT_EQ(r.status, SolveStatus::q_insoluble);
    EXPECT_EQ(r.family, arith::FamilyStatus::fails_ed2);
    r = solve_generalized(14, -7);
    ASSERT_EQ(r.status, SolveStatus::soluble);
    EXPECT_EQ(r.witness->x * r.witness->x - 14 * r.witness->y * r.witness->y, -7);
    EXPECT_EQ(solve_generalized(10, 3).status, SolveStatus::not_in_family);
    EXPECT_THROW(solve_generalized(10, 5), InputError);
}

TEST(Solve, AgreesWithBoundedSearch) {
    for (u64 d = 2; d <= 5000; ++d) {
        if (!is_fundamental_d(d)) continue;
        const BQF F = principal_form(d);
        for (i64 l : {3, -3, 7, -7, 11, -11}) {
            if (d % static_cast<u64>(l < 0 ? -l : l)) continue;
            bool brute = false;
            for (i64 y = 0; y <= 2000 && !brute; ++y) {
                const i128 v = 4 * static_cast<i128>(l) + static_cast<i128>(F.disc) * y * y;
                if (v < 0) continue;
                const i64 vv = static_cast<i64>(v);
                if (!arith::is_square(vv)) continue;
                const i64 r = static_cast<i64>(arith::isqrt(static_cast<u64>(vv)));
                brute = (r - F.b * y) % 2 == 0 || (-r - F.b * y) % 2 == 0;
            }
            const auto res = solve_generalized(d, l);
            if (brute) { ASSERT_EQ(res.status, SolveStatus::soluble) << "d=" << d << " l=" << l; }
            if (res.status == SolveStatus::soluble) { ASSERT_EQ(F.eval(res.witness->x, res.witness->y), l); }
        }
    }
}

TEST(Hasse, Examples) {
    EXPECT_EQ(hasse_unit_index(7, 14), 2);
    EXPECT_EQ(hasse_unit_index(7, 10), 1);
    EXPECT_THROW(hasse_unit_index(7, 7), InputError);
    EXPECT_THROW(hasse_unit_index(7, 21), InputError);
    EXPECT_THROW(hasse_unit_index(3, 6), InputError);
}
