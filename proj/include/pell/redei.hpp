#pragma once

// Redei matrices, the 4-rank, classical Redei symbols [a, b, c], and the
// second Artin pairing on Cl+[2] ∩ 2Cl+ used to read off the 8-rank.

#include "pell/arith.hpp"
#include "pell/errors.hpp"
#include "pell/f2linalg.hpp"
#include "pell/quadform.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace pell::redei {

using arith::i128;
using arith::i64;
using arith::u64;
using f2::F2Matrix;
using f2::F2Vector;

struct RedeiProfile {
    arith::QuadField field;
    F2Matrix matrix;  // t x t, rows and columns indexed by ramified primes in ascending order
    unsigned rk4 = 0;
    // For a target l: the image of the (sign-adjusted) l-ideal in Cl+/2Cl+ is trivial.
    std::optional<bool> l_class_trivial;
};

inline F2Matrix redei_matrix_of(const arith::QuadField &field) {
    const std::size_t t = field.t();
    F2Matrix R(t, t);
    for (std::size_t i = 0; i < t; ++i) {
        bool sum = false;
        for (std::size_t j = 0; j < t; ++j) {
            if (i == j) continue;
            const bool v = arith::eval_character(field.components[j], static_cast<i64>(field.components[i].prime));
            R.set(i, j, v);
            sum ^= v;
        }
        R.set(i, i, sum);
    }
    return R;
}

namespace detail {

inline unsigned rk4_of(const F2Matrix &R) {
    const std::size_t t = R.rows();
    const std::size_t r = f2::rank(R);
    ensure(r + 1 <= t, "redei: rank of R(d) exceeds t - 1");
    return static_cast<unsigned>(t - 1 - r);
}

// Vector of ramified primes whose product is the ideal above |l|, times (sqrt d) when l < 0.
inline F2Vector l_vector(const arith::QuadField &field, i64 l) {
    F2Vector v(field.t(), 0);
    if (l == -1) {
        for (std::size_t i = 0; i < field.t(); ++i) v[i] = field.d % field.components[i].prime == 0;
        return v;
    }
    const u64 al = static_cast<u64>(l < 0 ? -l : l);
    for (std::size_t i = 0; i < field.t(); ++i) {
        const u64 p = field.components[i].prime;
        bool bit = p == al;
        if (l < 0 && field.d % p == 0) bit = !bit;
        v[i] = bit;
    }
    return v;
}

}  // namespace detail

inline RedeiProfile redei_matrix_from_field(const arith::QuadField &field, std::optional<i64> l = std::nullopt) {
    RedeiProfile p;
    p.field = field;
    p.matrix = redei_matrix_of(field);
    p.rk4 = detail::rk4_of(p.matrix);
    if (l) {
        require(arith::supported_l(*l), "redei_matrix: unsupported l=" + std::to_string(*l));
        const auto v = detail::l_vector(field, *l);
        const auto image = p.matrix.apply_left(v);
        p.l_class_trivial = std::all_of(image.begin(), image.end(), [](auto b) { return b == 0; });
    }
    return p;
}

inline RedeiProfile redei_matrix(u64 d, std::optional<i64> l = std::nullopt) {
    return redei_matrix_from_field(arith::genus_components(d), l);
}

// ---------------------------------------------------------------------------
// Classical Redei symbols.

struct Condition {
    std::string name;
    bool passed;
};

struct RedeiSymbolInput {
    i64 a = 0, b = 0, c = 0;
    std::vector<Condition> conditions;

    bool admissible() const {
        for (const auto &k : conditions)
            if (!k.passed) return false;
        return true;
    }
    std::string first_failure() const {
        for (const auto &k : conditions)
            if (!k.passed) return k.name;
        return {};
    }
};

namespace detail {

inline u64 uabs(i64 x) { return static_cast<u64>(x < 0 ? -x : x); }

inline bool all_residues(i64 x, i64 modulus_sf) {
    for (u64 p : arith::prime_divisors(uabs(modulus_sf)))
        if (arith::kronecker(x, static_cast<i64>(p)) != 1) return false;
    return true;
}

}  // namespace detail

// The condition set under which [a, b, c] is evaluated. a = 1 or c = 1 gives the
// trivial symbol and skips the splitting conditions.
inline RedeiSymbolInput check_admissible(i64 a, i64 b, i64 c) {
    RedeiSymbolInput in{a, b, c, {}};
    auto add = [&](std::string name, bool ok) { in.conditions.push_back({std::move(name), ok}); };
    const bool nonzero = a != 0 && b != 0 && c != 0;
    add("nonzero", nonzero);
    if (!nonzero) return in;
    add("a,c positive", a > 0 && c > 0);
    add("b != 1", b != 1);
    add("squarefree", arith::is_squarefree(detail::uabs(a)) && arith::is_squarefree(detail::uabs(b)) &&
                          arith::is_squarefree(detail::uabs(c)));
    add("pairwise coprime", std::gcd(a, b) == 1 && std::gcd(b, c) == 1 && std::gcd(a, c) == 1);
    add("a = 1 mod 8", arith::mod(a, 8) == 1);
    add("c = 1 mod 8", arith::mod(c, 8) == 1);
    add("b = 1 mod 4", arith::mod(b, 4) == 1);
    if (!in.admissible() || a == 1 || c == 1) return in;
    add("p | a splits in Q(sqrt b), Q(sqrt c)", detail::all_residues(b, a) && detail::all_residues(c, a));
    add("p | b splits in Q(sqrt a), Q(sqrt c)", detail::all_residues(a, b) && detail::all_residues(c, b));
    add("p | c splits in Q(sqrt a), Q(sqrt b)", detail::all_residues(a, c) && detail::all_residues(b, c));
    return in;
}

namespace detail {

struct Point {
    i128 x, y, z;
};

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Point primitive(Point p) {
    const i128 g = gcd128(gcd128(p.x, p.y), p.z);
    ensure(g != 0, "redei: zero conic point");
    return {p.x / g, p.y / g, p.z / g};
}

// Points on x^2 - A y^2 - B z^2 = 0 obtained from P by secants through small directions.
inline std::vector<Point> conic_points(i64 A, i64 B, const Point &P, std::size_t want) {
    std::vector<Point> out{primitive(P)};
    static const std::array<std::array<int, 3>, 12> dirs{{{1, 1, 0},
                                                          {1, 0, 1},
                                                          {0, 1, 1},
                                                          {1, 1, 1},
                                                          {1, -1, 1},
                                                          {2, 1, 0},
                                                          {2, 0, 1},
                                                          {1, 2, 1},
                                                          {3, 1, 1},
                                                          {1, 1, 2},
                                                          {2, 1, 3},
                                                          {3, 2, 1}}};
    for (const auto &D : dirs) {
        if (out.size() >= want) break;
        const i128 q = static_cast<i128>(D[0]) * D[0] - static_cast<i128>(A) * D[1] * D[1] -
                       static_cast<i128>(B) * D[2] * D[2];
        if (q == 0) continue;
        const i128 bil = P.x * D[0] - static_cast<i128>(A) * P.y * D[1] - static_cast<i128>(B) * P.z * D[2];
        Point Q{q * P.x - 2 * bil * D[0], q * P.y - 2 * bil * D[1], q * P.z - 2 * bil * D[2]};
        if (Q.x == 0 && Q.y == 0 && Q.z == 0) continue;
        Q = primitive(Q);
        ensure(Q.x * Q.x - static_cast<i128>(A) * Q.y * Q.y - static_cast<i128>(B) * Q.z * Q.z == 0,
               "redei: secant point off the conic");
        out.push_back(Q);
    }
    return out;
}

inline i64 mod128(i128 v, i64 m) {
    i128 r = v % m;
    if (r < 0) r += m;
    return static_cast<i64>(r);
}

inline int symbol_at(const Point &P, i64 a, const std::vector<u64> &c_primes) {
    int sum = 0;
    for (u64 q : c_primes) {
        const i64 s = static_cast<i64>(arith::sqrt_mod_prime(a, q));
        const i64 t = mod128(P.x + P.y * s, static_cast<i64>(q));
        const int leg = arith::jacobi(t, static_cast<i64>(q));
        ensure(leg != 0, "redei_symbol: element not coprime to a prime above c");
        sum ^= leg == -1;
    }
    return sum;
}

}  // namespace detail

// [a, b, c] in F_2: the Frobenius of the ideal of norm c from Q(sqrt a) in Q(sqrt a, sqrt beta),
// where beta = x + y sqrt a comes from a primitive point of x^2 = a y^2 + b z^2.
inline int redei_symbol(i64 a, i64 b, i64 c) {
    const auto in = check_admissible(a, b, c);
    require(in.admissible(), "redei_symbol: inadmissible triple [" + std::to_string(a) + "," + std::to_string(b) +
                                 "," + std::to_string(c) + "]: " + in.first_failure());
    if (a == 1 || c == 1) return 0;
    const auto start = arith::solve_conic(a, b);
    ensure(start.has_value(), "redei_symbol: conic has no point for an admissible triple");
    const auto c_primes = arith::prime_divisors(static_cast<u64>(c));
    const auto pts = detail::conic_points(a, b, {start->x, start->y, start->z}, 12);
    std::vector<int> values;
    for (const auto &P : pts) {
        bool ok = true;
        for (u64 q : c_primes) ok = ok && detail::mod128(P.z, static_cast<i64>(q)) != 0;
        if (!ok) continue;
        values.push_back(detail::symbol_at(P, a, c_primes));
        if (values.size() == 2) break;
    }
    ensure(!values.empty(), "redei_symbol: no conic point coprime to c");
    ensure(values.size() < 2 || values[0] == values[1], "redei_symbol: value depends on the conic point");
    return values[0];
}

struct ReciprocityReport {
    std::size_t tested = 0;
    std::size_t failures = 0;
    std::size_t ones = 0;  // triples with [a,b,c] = 1
    std::vector<std::array<i64, 3>> triples;
    std::vector<std::string> failure_details;
};

// Generates admissible triples with |entries| <= bound and checks [a,b,c] = [c,b,a].
inline ReciprocityReport reciprocity_suite(std::size_t count, i64 bound, std::uint64_t seed) {
    ReciprocityReport rep;
    if (count == 0) return rep;
    require(bound >= 17, "reciprocity_suite: bound too small for admissible triples");
    std::vector<i64> ac, bs;
    for (i64 n = 2; n <= bound; ++n) {
        if (!arith::is_squarefree(static_cast<u64>(n))) continue;
        if (n % 8 == 1) ac.push_back(n);
        if (n % 4 == 1) bs.push_back(n);
        if ((-n) % 4 == -3) bs.push_back(-n);
    }
    std::mt19937_64 rng(seed);
    std::set<std::array<i64, 3>> seen;
    std::size_t attempts = 0;
    while (rep.tested < count) {
        ensure(++attempts < 50'000'000, "reciprocity_suite: could not generate enough admissible triples");
        const i64 a = ac[rng() % ac.size()], c = ac[rng() % ac.size()], b = bs[rng() % bs.size()];
        if (!check_admissible(a, b, c).admissible()) continue;
        if (!seen.insert({a, b, c}).second) {
            if (seen.size() * 4 < attempts / 1000) break;  // space exhausted
            continue;
        }
        ++rep.tested;
        rep.triples.push_back({a, b, c});
        const int left = redei_symbol(a, b, c), right = redei_symbol(c, b, a);
        rep.ones += left;
        if (left != right) {
            ++rep.failures;
            rep.failure_details.push_back("[" + std::to_string(a) + "," + std::to_string(b) + "," +
                                          std::to_string(c) + "]=" + std::to_string(left) + " but reversed=" +
                                          std::to_string(right));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The second Artin pairing.

namespace detail {

inline u64 product_of(const arith::QuadField &f, const F2Vector &w) {
    u64 n = 1;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i]) n *= f.components[i].prime;
    return n;
}

inline i64 character_of(const arith::QuadField &f, const F2Vector &x) {
    i64 e = 1;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j]) e *= f.components[j].discriminant;
    return e;
}

// The form attached to the ramified ideal of norm n.
inline qf::BQF ramified_form(u64 d, u64 n) {
    const i64 D = static_cast<i64>(d), N = static_cast<i64>(n);
    if (d % 4 == 1) return qf::BQF(N, N, (N * N - D) / (4 * N));
    if (n % 2 == 0 && d % 2 == 1) {
        const i64 m = N / 2;
        return qf::BQF(N, N, (m * m - D) / N);
    }
    return qf::BQF(N, 0, -D / N);
}

// c with N(gamma) = n c^2 for the primitive gamma in O attached to a conic point.
inline i64 cofactor(const arith::QuadField &f, u64 n, const Point &P) {
    i128 x = P.x, y = P.y;
    if (f.d % 4 == 1) {
        x = P.x - P.y;
        y = 2 * P.y;
    }
    const i128 g = gcd128(x, y);
    ensure(g != 0 && P.z % g == 0, "pairing: cofactor not integral");
    const i128 c = abs128(P.z / g);
    const qf::BQF F = qf::principal_form(f.d);
    const BigInt lhs = F.eval(BigInt(static_cast<i64>(x / g)), BigInt(static_cast<i64>(y / g)));
    ensure(lhs == BigInt(n) * BigInt(static_cast<i64>(c)) * BigInt(static_cast<i64>(c)),
           "pairing: norm is not n times a square");
    ensure(std::gcd(static_cast<i64>(c), f.delta) == 1, "pairing: cofactor meets the discriminant");
    return static_cast<i64>(c);
}

// Coefficients of target in the span of basis, by exhaustive search (bases here are tiny).
inline std::optional<std::vector<uint8_t>> coordinates(const std::vector<F2Vector> &basis, const F2Vector &target) {
    const std::size_t k = basis.size();
    ensure(k < 24, "pairing: kernel basis too large");
    for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
        F2Vector v(target.size(), 0);
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1)
                for (std::size_t j = 0; j < v.size(); ++j) v[j] ^= basis[i][j];
        if (v == target) {
            std::vector<uint8_t> coef(k);
            for (std::size_t i = 0; i < k; ++i) coef[i] = (mask >> i) & 1;
            return coef;
        }
    }
    return std::nullopt;
}

// Drops one basis vector with a nonzero coefficient on target: a basis of a complement of <target>.
inline std::vector<F2Vector> complement(std::vector<F2Vector> basis, const F2Vector &target) {
    const auto coef = coordinates(basis, target);
    ensure(coef.has_value(), "pairing: vector outside the kernel");
    for (std::size_t i = 0; i < basis.size(); ++i)
        if ((*coef)[i]) {
            basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
            return basis;
        }
    throw InvariantError("pairing: complement of the zero vector");
}

}  // namespace detail

struct ArtinPairing {
    RedeiProfile profile;
    F2Vector relation;                 // the nonzero narrowly principal product of ramified primes
    std::vector<F2Vector> row_basis;   // LKer(R) modulo the relation
    std::vector<F2Vector> col_basis;   // RKer(R) modulo the all-ones vector
    F2Matrix matrix;                   // rk4 x rk4
    unsigned rk4 = 0;
    unsigned rk8 = 0;
    std::optional<i64> l;
    std::optional<F2Vector> l_vector;
    std::optional<bool> l_in_lker;    // l-class lies in 2Cl+
    std::optional<bool> l_row_zero;   // and pairs trivially with every column (lies in 4Cl+)
    std::optional<bool> l_principal;  // l-vector is 0 or the relation
};

class PairingContext {
public:
    explicit PairingContext(const arith::QuadField &field) : f_(field) {}

    F2Vector row(const F2Vector &w, const std::vector<F2Vector> &cols) const {
        F2Vector out(cols.size(), 0);
        if (std::all_of(w.begin(), w.end(), [](auto b) { return b == 0; })) return out;
        const u64 n = detail::product_of(f_, w);
        const auto start = arith::solve_conic(static_cast<i64>(f_.d), static_cast<i64>(n));
        ensure(start.has_value(), "pairing: no point on x^2 - d y^2 = n z^2 for n=" + std::to_string(n));
        const auto pts = detail::conic_points(static_cast<i64>(f_.d), static_cast<i64>(n),
                                              {start->x, start->y, start->z}, 2);
        std::vector<i64> cs;
        for (const auto &P : pts) cs.push_back(detail::cofactor(f_, n, P));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const i64 e = detail::character_of(f_, cols[j]);
            int first = -2;
            for (i64 c : cs) {
                const int k = arith::kronecker(e, c);
                ensure(k != 0, "pairing: character undefined at cofactor");
                ensure(first == -2 || first == k, "pairing: entry depends on the conic point");
                first = k;
            }
            out[j] = first == -1;
        }
        return out;
    }

private:
    const arith::QuadField &f_;
};

namespace detail {

// Members of the principal cycle among the reduced forms of the given ramified ideals.
inline std::vector<bool> narrowly_principal(u64 d, const std::vector<u64> &norms) {
    const qf::BQF F = qf::principal_form(d);
    const qf::Reducer red(F.disc);
    std::vector<qf::BQF> targets;
    for (u64 n : norms) targets.push_back(red.reduce(ramified_form(d, n)));
    std::vector<bool> hit(norms.size(), false);
    const qf::BQF start = red.reduce(F);
    qf::BQF g = start;
    do {
        for (std::size_t k = 0; k < targets.size(); ++k) hit[k] = hit[k] || g == targets[k];
        g = red.rho(g);
    } while (!(g == start));
    return hit;
}

}  // namespace detail

inline ArtinPairing artin2_pairing_from_field(const arith::QuadField &field, std::optional<i64> l = std::nullopt) {
    ArtinPairing A;
    A.profile = redei_matrix_from_field(field, l);
    A.rk4 = A.profile.rk4;
    const auto &R = A.profile.matrix;
    const std::size_t t = field.t();
    const auto lker = f2::left_kernel_basis(R);
    const auto rker = f2::right_kernel_basis(R);
    ensure(lker.size() == A.rk4 + 1 && rker.size() == A.rk4 + 1, "pairing: kernel dimensions disagree with rk4");

    // The relation: the unique nonzero w in LKer whose ideal is narrowly principal.
    std::vector<F2Vector> candidates;
    std::vector<u64> norms;
    for (u64 mask = 1; mask < (u64{1} << lker.size()); ++mask) {
        F2Vector w(t, 0);
        for (std::size_t i = 0; i < lker.size(); ++i)
            if ((mask >> i) & 1)
                for (std::size_t j = 0; j < t; ++j) w[j] ^= lker[i][j];
        candidates.push_back(w);
        norms.push_back(detail::product_of(field, w));
    }
    const auto principal = detail::narrowly_principal(field.d, norms);
    std::size_t found = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k)
        if (principal[k]) {
            A.relation = candidates[k];
            ++found;
        }
    ensure(found == 1, "pairing: expected exactly one principal relation among ramified ideals, found " +
                           std::to_string(found));

    A.row_basis = detail::complement(lker, A.relation);
    A.col_basis = detail::complement(rker, F2Vector(t, 1));
    PairingContext ctx(field);
    A.matrix = F2Matrix(A.rk4, A.rk4);
    for (std::size_t i = 0; i < A.row_basis.size(); ++i) {
        const auto r = ctx.row(A.row_basis[i], A.col_basis);
        for (std::size_t j = 0; j < r.size(); ++j) A.matrix.set(i, j, r[j]);
    }
    const auto rel = ctx.row(A.relation, A.col_basis);
    ensure(std::all_of(rel.begin(), rel.end(), [](auto b) { return b == 0; }),
           "pairing: the principal relation pairs nontrivially");
    A.rk8 = A.rk4 - static_cast<unsigned>(f2::rank(A.matrix));

    if (l) {
        A.l = l;
        A.l_vector = detail::l_vector(field, *l);
        A.l_in_lker = *A.profile.l_class_trivial;
        A.l_principal = std::all_of(A.l_vector->begin(), A.l_vector->end(), [](auto b) { return b == 0; }) ||
                        *A.l_vector == A.relation;
        if (*A.l_in_lker) {
            const auto r = ctx.row(*A.l_vector, A.col_basis);
            A.l_row_zero = std::all_of(r.begin(), r.end(), [](auto b) { return b == 0; });
        }
    }
    return A;
}

inline ArtinPairing artin2_pairing(u64 d, std::optional<i64> l = std::nullopt) {
    return artin2_pairing_from_field(arith::genus_components(d), l);
}

inline unsigned rank8_via_symbols(u64 d) { return artin2_pairing(d).rk8; }

}  // namespace pell::redei
