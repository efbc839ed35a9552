#pragma once

// Indefinite binary quadratic forms of positive nonsquare discriminant:
// reduction cycles, composition, narrow/ordinary class groups and the
// solubility pipeline for N_d(x, y) = l.

#include "pell/arith.hpp"
#include "pell/errors.hpp"
#include "pell/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pell::qf {

using arith::i128;
using arith::i64;
using arith::u64;

struct BQF {
    i64 a = 0, b = 0, c = 0;
    i64 disc = 0;

    BQF() = default;
    BQF(i64 a_, i64 b_, i64 c_) : a(a_), b(b_), c(c_) {
        const i128 D = static_cast<i128>(b) * b - static_cast<i128>(4) * a * c;
        require(D > 0 && D < static_cast<i128>(INT64_MAX), "BQF: discriminant out of range");
        disc = static_cast<i64>(D);
    }

    bool primitive() const { return std::gcd(std::gcd(a, b), c) == 1; }

    BigInt eval(const BigInt &x, const BigInt &y) const { return a * x * x + b * x * y + c * y * y; }

    auto key() const { return std::tie(a, b, c); }
    bool operator==(const BQF &o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const BQF &o) const { return key() < o.key(); }
};

inline std::string to_string(const BQF &f) {
    return "(" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) + ")";
}

// f∘M means (x, y) -> f(p x + q y, r x + s y).
struct Mat2 {
    BigInt p = 1, q = 0, r = 0, s = 1;

    Mat2 operator*(const Mat2 &o) const {
        return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
    }
    // Inverse of a determinant-one matrix.
    Mat2 inverse() const { return {s, -q, -r, p}; }
};

// The principal form of Q(sqrt d): x^2 + xy - (d-1)/4 y^2 or x^2 - d y^2.
inline BQF principal_form(u64 d) {
    require(d > 1, "principal_form: d must exceed 1");
    require(arith::is_squarefree(d), "principal_form: d=" + std::to_string(d) + " is not squarefree");
    const i64 dd = static_cast<i64>(d);
    if (d % 4 == 1) return BQF(1, 1, -(dd - 1) / 4);
    return BQF(1, 0, -dd);
}

inline i64 fundamental_discriminant(u64 d) {
    return d % 4 == 1 ? static_cast<i64>(d) : 4 * static_cast<i64>(d);
}

class Reducer {
public:
    explicit Reducer(i64 disc) : disc_(disc), s_(static_cast<i64>(arith::isqrt(static_cast<u64>(disc)))) {
        require(disc > 0 && !arith::is_square(disc), "Reducer: discriminant must be a positive nonsquare");
    }

    i64 disc() const { return disc_; }
    i64 root() const { return s_; }

    // 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
    bool is_reduced(const BQF &f) const {
        const i64 aa = f.a < 0 ? -f.a : f.a;
        return f.b > 0 && f.b <= s_ && s_ - f.b + 1 <= 2 * aa && 2 * aa <= s_ + f.b;
    }

    // One step of rho; t is the translation parameter of the matrix [[0,-1],[1,t]].
    BQF rho(const BQF &f, i64 *t_out = nullptr) const {
        ensure(f.c != 0, "rho: zero leading coefficient");
        const i64 ac = f.c < 0 ? -f.c : f.c;
        const i64 m = 2 * ac;
        i64 r;
        if (ac > s_) {
            r = arith::mod(-f.b, m);
            if (r > ac) r -= m;
        } else {
            const i64 lo = s_ - m + 1;
            r = lo + arith::mod(-f.b - lo, m);
        }
        const i64 t = (r + f.b) / (2 * f.c);
        if (t_out) *t_out = t;
        const i128 num = static_cast<i128>(r) * r - disc_;
        ensure(num % (static_cast<i128>(4) * f.c) == 0, "rho: non-integral coefficient");
        return BQF(f.c, r, static_cast<i64>(num / (static_cast<i128>(4) * f.c)));
    }

    BQF rho_tracked(const BQF &f, Mat2 &m) const {
        i64 t = 0;
        BQF g = rho(f, &t);
        m = m * Mat2{0, -1, 1, BigInt(t)};
        return g;
    }

    BQF reduce(BQF f) const {
        check_input(f);
        for (int guard = 0; !is_reduced(f); ++guard) {
            ensure(guard < 100000, "reduce: no convergence for " + to_string(f));
            f = rho(f);
        }
        return f;
    }

    BQF reduce_tracked(BQF f, Mat2 &m) const {
        check_input(f);
        for (int guard = 0; !is_reduced(f); ++guard) {
            ensure(guard < 100000, "reduce: no convergence for " + to_string(f));
            f = rho_tracked(f, m);
        }
        return f;
    }

    // Full rho-orbit of a reduced form.
    std::vector<BQF> cycle_of_reduced(const BQF &start) const {
        ensure(is_reduced(start), "cycle_of_reduced: form not reduced");
        std::vector<BQF> out{start};
        BQF f = rho(start);
        while (!(f == start)) {
            out.push_back(f);
            f = rho(f);
        }
        return out;
    }

private:
    void check_input(const BQF &f) const {
        require(f.disc == disc_, "Reducer: discriminant mismatch");
        require(f.primitive(), "Reducer: imprimitive form " + to_string(f));
    }

    i64 disc_;
    i64 s_;
};

inline BQF reduce(const BQF &f) { return Reducer(f.disc).reduce(f); }
inline BQF rho(const BQF &f) { return Reducer(f.disc).rho(f); }

// A proper equivalence class, stored as its reduced cycle.
struct FormClass {
    BQF canonical;           // lexicographically least member
    std::vector<BQF> cycle;  // starts at canonical, follows rho

    bool operator==(const FormClass &o) const { return canonical == o.canonical; }

    const BQF &positive_member() const {
        for (const auto &f : cycle)
            if (f.a > 0) return f;
        throw InvariantError("FormClass: cycle without positive leading coefficient");
    }
};

inline FormClass cycle(const BQF &f) {
    Reducer red(f.disc);
    auto forms = red.cycle_of_reduced(red.reduce(f));
    ensure(forms.size() % 2 == 0, "cycle: odd cycle length");
    const auto it = std::min_element(forms.begin(), forms.end());
    std::rotate(forms.begin(), it, forms.end());
    return {forms.front(), std::move(forms)};
}

namespace detail {

struct Egcd {
    i64 g, x, y;
};

// x a + y b = g = gcd(a, b) >= 0.
inline Egcd egcd(i64 a, i64 b) {
    i64 old_r = a, r = b, old_x = 1, x = 0, old_y = 0, y = 1;
    while (r != 0) {
        const i64 q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_x, x) = std::make_tuple(x, old_x - q * x);
        std::tie(old_y, y) = std::make_tuple(y, old_y - q * y);
    }
    if (old_r < 0) return {-old_r, -old_x, -old_y};
    return {old_r, old_x, old_y};
}

}  // namespace detail

// Dirichlet composition of two forms with positive leading coefficients (unreduced).
inline BQF compose_forms(BQF f1, BQF f2) {
    require(f1.disc == f2.disc, "compose: mismatched discriminants");
    require(f1.a > 0 && f2.a > 0, "compose: leading coefficients must be positive");
    if (f1.a > f2.a) std::swap(f1, f2);
    const i64 D = f1.disc;
    const i64 s = (f1.b + f2.b) / 2;
    const i64 n = f2.b - s;
    i64 y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        const auto e = detail::egcd(f2.a, f1.a);
        y1 = e.x;
        d = e.g;
    }
    i64 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        const auto e = detail::egcd(s, d);
        x2 = e.x;
        y2 = -e.y;
        d1 = e.g;
    }
    const i64 v1 = f1.a / d1;
    const i64 v2 = f2.a / d1;
    const i128 rr = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c) % v1;
    const i64 r = static_cast<i64>(rr < 0 ? rr + v1 : rr);
    const i128 b3 = f2.b + static_cast<i128>(2) * v2 * r;
    const i128 a3 = static_cast<i128>(v1) * v2;
    const i128 num = b3 * b3 - D;
    ensure(num % (4 * a3) == 0, "compose: non-integral third coefficient");
    const i128 c3 = num / (4 * a3);
    ensure(a3 < INT64_MAX && b3 < INT64_MAX && c3 > INT64_MIN && c3 < INT64_MAX, "compose: overflow");
    return BQF(static_cast<i64>(a3), static_cast<i64>(b3), static_cast<i64>(c3));
}

inline FormClass compose(const FormClass &F, const FormClass &G) {
    require(F.canonical.disc == G.canonical.disc, "compose: mismatched discriminants");
    return cycle(compose_forms(F.positive_member(), G.positive_member()));
}

inline bool is_fundamental_discriminant(i64 D) {
    if (D <= 1) return false;
    if (D % 4 == 1) return arith::is_squarefree(static_cast<u64>(D));
    if (D % 4 != 0) return false;
    const i64 m = D / 4;
    return (m % 4 == 2 || m % 4 == 3) && arith::is_squarefree(static_cast<u64>(m));
}

struct ClassGroup2Data {
    i64 disc = 0;
    std::size_t narrow_order = 0;
    std::size_t ordinary_order = 0;
    std::vector<u64> narrow_invariants;    // n_1 | n_2 | ...
    std::vector<u64> ordinary_invariants;
    unsigned rk2plus = 0, rk4plus = 0, rk8plus = 0;
    unsigned rk2ord = 0, rk4ord = 0, rk8ord = 0;
    bool negative_pell = false;
};

// The narrow class group of a discriminant, realized on reduced cycles.
class FormClassGroup {
public:
    explicit FormClassGroup(i64 disc) : red_(disc) {
        const i64 D = disc;
        const i64 s = red_.root();
        std::map<std::pair<i64, i64>, std::size_t> seen;
        std::vector<BQF> reduced;
        for (i64 b = 1; b <= s; ++b) {
            if ((b - D) % 2 != 0) continue;
            const i64 N = (D - b * b) / 4;  // = -ac > 0
            const i64 lo = (s - b + 2) / 2;
            const i64 hi = (s + b) / 2;
            for (i64 aa = std::max<i64>(lo, 1); aa <= hi; ++aa) {
                if (N % aa) continue;
                for (i64 a : {aa, -aa}) {
                    BQF f(a, b, -N / a);
                    if (f.primitive() && red_.is_reduced(f)) reduced.push_back(f);
                }
            }
        }
        for (const auto &f : reduced) {
            if (index_.count(f.key())) continue;
            auto cyc = red_.cycle_of_reduced(f);
            const std::size_t id = classes_.size();
            for (const auto &g : cyc) index_[g.key()] = id;
            const auto it = std::min_element(cyc.begin(), cyc.end());
            std::rotate(cyc.begin(), it, cyc.end());
            classes_.push_back({cyc.front(), std::move(cyc)});
        }
        ensure(index_.size() == reduced.size(), "FormClassGroup: reduced forms outside their cycles");
        identity_ = id_of(BQF(1, D % 2, (D % 2 - D) / 4));
        const i64 bj = D % 2;
        neg_one_ = id_of(BQF(-1, bj, (D - bj * bj) / 4));
    }

    i64 disc() const { return red_.disc(); }
    std::size_t order() const { return classes_.size(); }
    std::size_t identity() const { return identity_; }
    // Class of (-1, b, c): the kernel of the narrow -> ordinary map.
    std::size_t neg_one_class() const { return neg_one_; }
    const FormClass &at(std::size_t id) const { return classes_.at(id); }
    const Reducer &reducer() const { return red_; }

    std::size_t id_of(const BQF &f) const {
        const BQF r = red_.reduce(f);
        const auto it = index_.find(r.key());
        ensure(it != index_.end(), "FormClassGroup: reduced form " + to_string(r) + " not enumerated");
        return it->second;
    }

    std::size_t compose(std::size_t x, std::size_t y) const {
        const auto key = x < y ? std::make_pair(x, y) : std::make_pair(y, x);
        const auto it = table_.find(key);
        if (it != table_.end()) return it->second;
        const std::size_t z =
            id_of(compose_forms(classes_[x].positive_member(), classes_[y].positive_member()));
        table_.emplace(key, z);
        return z;
    }

    std::size_t inverse(std::size_t x) const {
        const BQF &f = classes_[x].canonical;
        return id_of(BQF(f.a, -f.b, f.c));
    }

    std::size_t power(std::size_t x, u64 e) const {
        std::size_t result = identity_, base = x;
        while (e) {
            if (e & 1) result = compose(result, base);
            base = compose(base, base);
            e >>= 1;
        }
        return result;
    }

    ClassGroup2Data structure() const;

private:
    Reducer red_;
    std::vector<FormClass> classes_;
    std::map<std::tuple<i64, i64, i64>, std::size_t> index_;
    std::size_t identity_ = 0;
    std::size_t neg_one_ = 0;
    mutable std::map<std::pair<std::size_t, std::size_t>, std::size_t> table_;
};

namespace detail {

struct AbelianShape {
    std::vector<u64> invariants;                 // ascending, each divides the next
    std::map<u64, std::vector<unsigned>> ranks;  // p -> [r_1, r_2, ...], r_k = #factors of order >= p^k
};

// Structure of a finite abelian group given by coset representatives and a p-th power map.
inline AbelianShape abelian_shape(const std::vector<std::size_t> &elements, std::size_t identity,
                                  const std::function<std::size_t(std::size_t, u64)> &pow_rep) {
    AbelianShape shape;
    const u64 h = elements.size();
    std::map<u64, std::vector<u64>> prime_factors;  // p -> list of p-power cyclic orders
    for (const auto &pp : (h > 1 ? arith::factor(h) : std::vector<arith::PrimePower>{})) {
        const u64 p = pp.prime;
        std::unordered_map<std::size_t, std::size_t> pmap;
        for (auto x : elements) pmap[x] = pow_rep(x, p);
        std::vector<std::size_t> current(elements.begin(), elements.end());
        std::vector<u64> counts{1};
        u64 prev = 1;
        while (true) {
            for (auto &x : current) x = pmap.at(x);
            const u64 n = static_cast<u64>(std::count(current.begin(), current.end(), identity));
            if (n == prev) break;
            counts.push_back(n);
            prev = n;
        }
        std::vector<unsigned> r;
        for (std::size_t k = 1; k < counts.size(); ++k) {
            u64 ratio = counts[k] / counts[k - 1];
            unsigned e = 0;
            while (ratio > 1) { ratio /= p; ++e; }
            r.push_back(e);
        }
        shape.ranks[p] = r;
        std::vector<u64> orders;
        for (std::size_t k = 0; k < r.size(); ++k) {
            const unsigned exact = r[k] - (k + 1 < r.size() ? r[k + 1] : 0);
            u64 order = 1;
            for (std::size_t j = 0; j <= k; ++j) order *= p;
            for (unsigned j = 0; j < exact; ++j) orders.push_back(order);
        }
        std::sort(orders.rbegin(), orders.rend());
        prime_factors[p] = orders;
    }
    std::size_t count = 0;
    for (const auto &[p, v] : prime_factors) count = std::max(count, v.size());
    for (std::size_t i = 0; i < count; ++i) {
        u64 n = 1;
        for (const auto &[p, v] : prime_factors)
            if (i < v.size()) n *= v[i];
        shape.invariants.push_back(n);
    }
    std::reverse(shape.invariants.begin(), shape.invariants.end());
    return shape;
}

inline unsigned rank_at(const AbelianShape &s, std::size_t k) {
    const auto it = s.ranks.find(2);
    if (it == s.ranks.end() || k >= it->second.size()) return 0;
    return it->second[k];
}

}  // namespace detail

inline ClassGroup2Data FormClassGroup::structure() const {
    ClassGroup2Data out;
    out.disc = disc();
    out.narrow_order = order();
    std::vector<std::size_t> all(order());
    std::iota(all.begin(), all.end(), 0);
    const auto narrow = detail::abelian_shape(all, identity_, [this](std::size_t x, u64 p) { return power(x, p); });

    const std::size_t J = neg_one_;
    out.negative_pell = (J == identity_);
    auto rep = [this, J](std::size_t x) { return std::min(x, compose(x, J)); };
    std::vector<std::size_t> cosets;
    for (auto x : all)
        if (rep(x) == x) cosets.push_back(x);
    const auto ordinary = detail::abelian_shape(
        cosets, rep(identity_), [this, &rep](std::size_t x, u64 p) { return rep(power(x, p)); });

    out.ordinary_order = cosets.size();
    out.narrow_invariants = narrow.invariants;
    out.ordinary_invariants = ordinary.invariants;
    out.rk2plus = detail::rank_at(narrow, 0);
    out.rk4plus = detail::rank_at(narrow, 1);
    out.rk8plus = detail::rank_at(narrow, 2);
    out.rk2ord = detail::rank_at(ordinary, 0);
    out.rk4ord = detail::rank_at(ordinary, 1);
    out.rk8ord = detail::rank_at(ordinary, 2);
    return out;
}

inline ClassGroup2Data narrow_class_group(i64 disc) {
    require(disc >= 5 && disc <= 20'000'000, "narrow_class_group: discriminant out of range");
    require(is_fundamental_discriminant(disc), "narrow_class_group: " + std::to_string(disc) +
                                                   " is not a fundamental discriminant");
    return FormClassGroup(disc).structure();
}

struct Witness {
    BigInt x, y;
};

namespace detail {

// Index of the first member of the rho-cycle of `start` equal to one of `targets`.
inline std::optional<std::pair<std::size_t, std::size_t>> find_in_cycle(const Reducer &red, const BQF &start,
                                                                        const std::vector<BQF> &targets) {
    BQF f = start;
    std::size_t step = 0;
    do {
        for (std::size_t k = 0; k < targets.size(); ++k)
            if (f == targets[k]) return std::make_pair(step, k);
        f = red.rho(f);
        ++step;
    } while (!(f == start));
    return std::nullopt;
}

}  // namespace detail

namespace detail {

struct Representation {
    bool found = false;
    std::optional<Witness> witness;
};

// Decision on int64 cycle walks; the SL2(Z) replay runs only when a witness is wanted.
inline Representation represent(u64 d, i64 m, bool with_witness) {
    require(m != 0, "represents_principal: m must be nonzero");
    require(m >= -1'000'000 && m <= 1'000'000, "represents_principal: |m| exceeds 10^6");
    const BQF F = principal_form(d);
    const i64 D = F.disc;
    const Reducer red(D);
    Mat2 to_reduced;
    const BQF F_red = red.reduce_tracked(F, to_reduced);

    const i64 am = m < 0 ? -m : m;
    for (i64 k = 1; k * k <= am; ++k) {
        if (am % (k * k)) continue;
        const i64 mm = m / (k * k);
        const i64 amm = mm < 0 ? -mm : mm;
        std::vector<BQF> targets;
        std::vector<Mat2> target_mats;
        for (i64 b0 = 0; b0 < 2 * amm; ++b0) {
            const i128 num = static_cast<i128>(b0) * b0 - D;
            if (num % (4 * static_cast<i128>(amm)) != 0) continue;
            BQF g(mm, b0, static_cast<i64>(num / (4 * static_cast<i128>(mm))));
            if (!g.primitive()) continue;
            Mat2 mat;
            targets.push_back(red.reduce_tracked(g, mat));
            target_mats.push_back(mat);
        }
        if (targets.empty()) continue;
        const auto hit = find_in_cycle(red, F_red, targets);
        if (!hit) continue;
        if (!with_witness) return {true, std::nullopt};
        Mat2 A = to_reduced;
        BQF f = F_red;
        for (std::size_t i = 0; i < hit->first; ++i) f = red.rho_tracked(f, A);
        ensure(f == targets[hit->second], "represents_principal: cycle replay diverged");
        const Mat2 T = A * target_mats[hit->second].inverse();
        Witness w{T.p * k, T.r * k};
        ensure(F.eval(w.x, w.y) == BigInt(m), "represents_principal: witness fails verification");
        return {true, w};
    }
    return {};
}

}  // namespace detail

// Does the principal form of disc(d) represent m? Returns a verified witness.
inline std::optional<Witness> represents_principal(u64 d, i64 m) { return detail::represent(d, m, true).witness; }

inline bool represents_principal_decide(u64 d, i64 m) { return detail::represent(d, m, false).found; }

// x^2 - d y^2 = -1, decided on the principal cycle of discriminant 4d.
inline std::optional<Witness> negative_pell(u64 d) {
    require(d >= 2 && !arith::is_square(static_cast<i64>(d)), "negative_pell: d must be a nonsquare >= 2");
    const i64 D = 4 * static_cast<i64>(d);
    const BQF F(1, 0, -static_cast<i64>(d));
    const Reducer red(D);
    Mat2 M;
    const BQF start = red.reduce_tracked(F, M);
    BQF f = start;
    std::size_t step = 0, hit = SIZE_MAX;
    do {
        if (f.a == -1) { hit = step; break; }
        f = red.rho(f);
        ++step;
    } while (!(f == start));
    if (hit == SIZE_MAX) return std::nullopt;
    f = start;
    for (std::size_t i = 0; i < hit; ++i) f = red.rho_tracked(f, M);
    Witness w{abs(M.p), abs(M.r)};
    ensure(w.x * w.x - BigInt(static_cast<i64>(d)) * w.y * w.y == -1, "negative_pell: witness fails verification");
    return w;
}

struct ContinuedFraction {
    u64 a0 = 0;
    std::vector<u64> period;
};

inline ContinuedFraction cf_sqrt(u64 d) {
    require(d >= 2 && d <= 1'000'000'000'000ULL, "cf_sqrt: d out of range");
    require(!arith::is_square(static_cast<i64>(d)), "cf_sqrt: d is a perfect square");
    ContinuedFraction cf;
    cf.a0 = arith::isqrt(d);
    u64 m = 0, q = 1, a = cf.a0;
    do {
        m = q * a - m;
        q = (d - m * m) / q;
        a = (cf.a0 + m) / q;
        cf.period.push_back(a);
    } while (a != 2 * cf.a0);
    return cf;
}

// Convergent at the end of the first period: p^2 - d q^2 = (-1)^len.
inline Witness cf_period_solution(u64 d) {
    const auto cf = cf_sqrt(d);
    BigInt p_prev = 1, p = cf.a0, q_prev = 0, q = 1;
    for (std::size_t i = 0; i + 1 < cf.period.size(); ++i) {
        const BigInt a = cf.period[i];
        BigInt pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
    return {p, q};
}

enum class SolveStatus { not_in_family, q_insoluble, soluble, insoluble };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::not_in_family: return "not_in_family";
        case SolveStatus::q_insoluble: return "q_insoluble";
        case SolveStatus::soluble: return "soluble";
        case SolveStatus::insoluble: return "insoluble";
    }
    return "?";
}

struct SolveResult {
    SolveStatus status = SolveStatus::insoluble;
    arith::FamilyStatus family = arith::FamilyStatus::yes;
    std::optional<Witness> witness;
};

namespace detail {

inline SolveResult solve_in_family(u64 d, i64 l, arith::FamilyStatus family, bool with_witness) {
    SolveResult r;
    r.family = family;
    switch (family) {
        case arith::FamilyStatus::yes: break;
        case arith::FamilyStatus::not_squarefree:
            throw InputError("solve_generalized: d=" + std::to_string(d) + " is not squarefree");
        case arith::FamilyStatus::not_divisible:
            r.status = SolveStatus::not_in_family;
            return r;
        default:
            r.status = SolveStatus::q_insoluble;
            return r;
    }
    const auto rep = represent(d, l, with_witness);
    r.status = rep.found ? SolveStatus::soluble : SolveStatus::insoluble;
    r.witness = rep.witness;
    if (r.witness) {
        ensure(principal_form(d).eval(r.witness->x, r.witness->y) == BigInt(l),
               "solve_generalized: witness fails verification");
    }
    return r;
}

}  // namespace detail

// N_d(x, y) = l over Z for l = -1 or |l| a prime = 3 mod 4.
inline SolveResult solve_generalized(u64 d, i64 l, bool with_witness = true) {
    require(arith::supported_l(l), "solve_generalized: unsupported l=" + std::to_string(l));
    require(d > 1, "solve_generalized: d must exceed 1");
    return detail::solve_in_family(d, l, arith::in_family(d, l), with_witness);
}

// Same, for d whose prime factors are already known.
inline SolveResult solve_generalized_factored(u64 d, const std::vector<u64> &primes, i64 l, bool with_witness) {
    require(arith::supported_l(l), "solve_generalized: unsupported l=" + std::to_string(l));
    require(d > 1, "solve_generalized: d must exceed 1");
    return detail::solve_in_family(d, l, arith::in_family_factored(d, primes, l), with_witness);
}

// Hasse unit index of Q(sqrt(-l), sqrt(d)) for a prime l > 3, l = 3 mod 4.
inline int hasse_unit_index(i64 l, u64 d) {
    require(l > 3 && l % 4 == 3 && arith::is_prime(static_cast<u64>(l)),
            "hasse_unit_index: l must be a prime > 3 congruent to 3 mod 4");
    require(d >= 1 && arith::is_squarefree(d), "hasse_unit_index: d must be squarefree");
    require(d != static_cast<u64>(l) && d != 3 * static_cast<u64>(l), "hasse_unit_index: d in {l, 3l} excluded");
    if (d % static_cast<u64>(l) != 0) return 1;
    const bool plus = solve_generalized(d, l).status == SolveStatus::soluble;
    const bool minus = !plus && solve_generalized(d, -l).status == SolveStatus::soluble;
    return (plus || minus) ? 2 : 1;
}

}  // namespace pell::qf
