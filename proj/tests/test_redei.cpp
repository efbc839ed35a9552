#include "pell/redei.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pell;
using namespace pell::redei;
using arith::i64;
using arith::u64;

namespace {

std::vector<F2Vector> rows_of(u64 d) { return redei_matrix(d).matrix.row_list(); }

}  // namespace

TEST(RedeiMatrix, Examples) {
    auto p = redei_matrix(34);
    EXPECT_EQ(p.matrix, F2Matrix(2, 2));
    EXPECT_EQ(p.rk4, 1u);
    EXPECT_EQ(rows_of(21), (std::vector<F2Vector>{{1, 1}, {0, 0}}));
    EXPECT_EQ(redei_matrix(21).rk4, 0u);
    EXPECT_EQ(rows_of(105), (std::vector<F2Vector>{{0, 1, 1}, {1, 0, 1}, {0, 1, 1}}));
    EXPECT_EQ(redei_matrix(105).rk4, 0u);
    EXPECT_THROW(redei_matrix(50), InputError);
}

TEST(RedeiMatrix, RowSumsVanishAndRk4MatchesForms) {
    for (u64 d = 2; d <= 5000; ++d) {
        if (!oracle::is_squarefree(d)) continue;
        const auto p = redei_matrix(d);
        for (const auto &r : p.matrix.row_list()) {
            int s = 0;
            for (auto b : r) s ^= b;
            ASSERT_EQ(s, 0) << d;
        }
        const auto g = qf::narrow_class_group(qf::fundamental_discriminant(d));
        ASSERT_EQ(p.rk4, g.rk4plus) << d;
    }
}

TEST(RedeiMatrix, LClassMatchesFamilyConditions) {
    for (i64 l : {-1, 3, -3, 7, -7, 11, -11}) {
        for (u64 d = 2; d <= 5000; ++d) {
            if (!oracle::is_squarefree(d)) continue;
            if (l != -1 && d % static_cast<u64>(l < 0 ? -l : l)) continue;
            const auto p = redei_matrix(d, l);
            ASSERT_EQ(*p.l_class_trivial, arith::in_family(d, l) == arith::FamilyStatus::yes) << d << " " << l;
        }
    }
}

TEST(Symbol, TrivialAndErrors) {
    EXPECT_EQ(redei_symbol(17, 13, 1), 0);
    EXPECT_EQ(redei_symbol(1, 13, 17), 0);
    EXPECT_THROW(redei_symbol(17, 13, 13), InputError);  // not coprime
    EXPECT_THROW(redei_symbol(17, 3, 1), InputError);    // b = 3 mod 4
    EXPECT_THROW(redei_symbol(5, 1, 1), InputError);     // b = 1
    const auto in = check_admissible(17, 5, 41);
    EXPECT_FALSE(in.admissible());  // (5/17) = -1
    EXPECT_EQ(in.first_failure(), "p | a splits in Q(sqrt b), Q(sqrt c)");
}

TEST(Symbol, IndependentOfConicPoint) {
    const auto rep = reciprocity_suite(200, 300, 77);
    for (const auto &t : rep.triples) {
        const auto start = arith::solve_conic(t[0], t[1]);
        ASSERT_TRUE(start);
        const auto pts = detail::conic_points(t[0], t[1], {start->x, start->y, start->z}, 12);
        const auto cps = arith::prime_divisors(static_cast<u64>(t[2]));
        int value = -1;
        for (const auto &P : pts) {
            bool ok = true;
            for (u64 q : cps) ok = ok && detail::mod128(P.z, static_cast<i64>(q)) != 0;
            if (!ok) continue;
            const int v = detail::symbol_at(P, t[0], cps);
            if (value >= 0) { ASSERT_EQ(v, value) << t[0] << "," << t[1] << "," << t[2]; }
            value = v;
        }
    }
}

TEST(Symbol, MultiplicativeInC) {
    std::mt19937_64 rng(4);
    std::vector<i64> ac, bs;
    for (i64 n = 2; n <= 500; ++n) {
        if (!oracle::is_squarefree(n)) continue;
        if (n % 8 == 1) ac.push_back(n);
        if (n % 4 == 1) bs.push_back(n);
        if (n % 4 == 3) bs.push_back(-n);
    }
    int done = 0;
    while (done < 200) {
        const i64 a = ac[rng() % ac.size()], b = bs[rng() % bs.size()];
        const i64 c1 = ac[rng() % ac.size()], c2 = ac[rng() % ac.size()];
        if (std::gcd(c1, c2) != 1) continue;
        if (!check_admissible(a, b, c1).admissible() || !check_admissible(a, b, c2).admissible()) continue;
        ASSERT_TRUE(check_admissible(a, b, c1 * c2).admissible());
        ++done;
        EXPECT_EQ(redei_symbol(a, b, c1 * c2), redei_symbol(a, b, c1) ^ redei_symbol(a, b, c2))
            << a << " " << b << " " << c1 << " " << c2;
    }
}

TEST(Reciprocity, Suite) {
    const auto rep = reciprocity_suite(500, 500, 1);
    EXPECT_EQ(rep.tested, 500u);
    EXPECT_EQ(rep.failures, 0u);
    // both values occur, so the symmetry is not vacuous
    EXPECT_GT(rep.ones, 50u);
    EXPECT_LT(rep.ones, 450u);
    EXPECT_EQ(reciprocity_suite(0, 500, 1).tested, 0u);
    EXPECT_EQ(reciprocity_suite(50, 500, 9).triples, reciprocity_suite(50, 500, 9).triples);
    for (const auto &t : rep.triples) ASSERT_TRUE(check_admissible(t[0], t[1], t[2]).admissible());
}

TEST(Pairing, Examples) {
    const auto A = artin2_pairing(34);
    EXPECT_EQ(A.matrix.rows(), 1u);
    EXPECT_EQ(A.matrix.cols(), 1u);
    EXPECT_TRUE(A.matrix.get(0, 0));
    EXPECT_EQ(A.rk8, 0u);
    const auto B = artin2_pairing(21);
    EXPECT_EQ(B.rk4, 0u);
    EXPECT_EQ(B.matrix.rows(), 0u);
    EXPECT_EQ(B.matrix.cols(), 0u);
}

TEST(Pairing, Rank8MatchesForms) {
    for (u64 d = 2; d <= 8000; ++d) {
        if (!oracle::is_squarefree(d)) continue;
        const auto A = artin2_pairing(d);
        if (A.rk4 == 0) continue;
        const auto g = qf::narrow_class_group(qf::fundamental_discriminant(d));
        ASSERT_EQ(A.rk8, g.rk8plus) << d;
    }
}

TEST(Pairing, LClassAgainstSolver) {
    for (i64 l : {-1, 3, -3, 7, -7, 11, -11}) {
        for (u64 d = 2; d <= 4000; ++d) {
            if (!oracle::is_squarefree(d) || arith::in_family(d, l) != arith::FamilyStatus::yes) continue;
            const auto A = artin2_pairing(d, l);
            ASSERT_TRUE(*A.l_in_lker);
            const bool soluble = qf::solve_generalized(d, l).status == qf::SolveStatus::soluble;
            ASSERT_EQ(*A.l_principal, soluble) << d << " " << l;
            // A nonzero pairing row rules out solubility.
            if (!*A.l_row_zero) { ASSERT_FALSE(soluble) << d << " " << l; }
            if (A.rk4 == 0) { ASSERT_TRUE(soluble) << d << " " << l; }
        }
    }
}
