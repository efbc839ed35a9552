#pragma once

// Elementary number theory: symbols, primality, factoring, the genus-character
// decomposition of a real quadratic field and the local family conditions.

#include "pell/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace pell::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(i64 n) {
    if (n < 0) return false;
    const u64 r = isqrt(static_cast<u64>(n));
    return r * r == static_cast<u64>(n);
}

inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        a %= n;
        if (a == 0) continue;
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// Jacobi symbol (a/n) for odd n >= 1.
inline int jacobi(i64 a, i64 n) {
    require(n >= 1 && (n & 1), "jacobi: n must be odd and positive");
    u64 m = static_cast<u64>(n);
    u64 x = static_cast<u64>(mod(a, n));
    int t = 1;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            const u64 r = m & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(x, m);
        if ((x & 3) == 3 && (m & 3) == 3) t = -t;
        x %= m;
    }
    return m == 1 ? t : 0;
}

// Kronecker symbol (a/n) for n >= 1; (a/2) follows the discriminant convention.
inline int kronecker(i64 a, i64 n) {
    require(n >= 1, "kronecker: n must be positive");
    int t = 1;
    while ((n & 1) == 0) {
        if ((a & 1) == 0) return 0;
        const i64 r = mod(a, 8);
        if (r == 3 || r == 5) t = -t;
        n >>= 1;
    }
    return t * jacobi(a, n);
}

// Tonelli-Shanks; p an odd prime and a a nonzero square mod p.
inline u64 sqrt_mod_prime(i64 a_in, u64 p) {
    const u64 a = static_cast<u64>(mod(a_in, static_cast<i64>(p)));
    if (a == 0) return 0;
    if (p == 2) return a;
    require(powmod(a, (p - 1) / 2, p) == 1, "sqrt_mod_prime: not a quadratic residue");
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = static_cast<u64>(s), c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

struct PrimePower {
    u64 prime;
    unsigned exponent;
    bool operator==(const PrimePower &) const = default;
};

namespace detail {

inline const std::vector<std::uint32_t> &small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 1'000'000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (u64 j = static_cast<u64>(i) * i; j <= limit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

}  // namespace detail

// Trial division up to 10^6, then a deterministic primality check on the cofactor.
inline std::vector<PrimePower> factor(u64 n) {
    require(n >= 1, "factor: n must be positive");
    require(n <= 1'000'000'000'000ULL, "factor: n exceeds 10^12");
    std::vector<PrimePower> out;
    for (u64 p : detail::small_primes()) {
        if (p * p > n) break;
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) {
        ensure(is_prime(n), "factor: unfactored composite cofactor " + std::to_string(n));
        out.push_back({n, 1});
    }
    return out;
}

inline bool is_squarefree(u64 n) {
    if (n == 0) return false;
    for (const auto &pp : factor(n))
        if (pp.exponent > 1) return false;
    return true;
}

inline std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (const auto &pp : factor(n)) out.push_back(pp.prime);
    return out;
}

// Segmented enumeration of squarefree integers in [lo, hi] together with their
// prime factors. Memory is O(segment + sqrt(hi)).
class SquarefreeSieve {
public:
    static constexpr std::size_t kMaxFactors = 16;

    struct Entry {
        u64 n = 0;
        std::array<u64, kMaxFactors> primes{};
        unsigned count = 0;
        std::vector<u64> factors() const { return {primes.begin(), primes.begin() + count}; }
    };

    SquarefreeSieve(u64 lo, u64 hi, u64 segment = 1 << 16)
        : next_start_(std::max<u64>(lo, 1)), hi_(hi), segment_(segment) {
        require(hi <= 1'000'000'000ULL * 1000ULL, "SquarefreeSieve: bound too large");
        const u64 root = isqrt(hi) + 1;
        std::vector<bool> composite(root + 1, false);
        for (u64 i = 2; i <= root; ++i) {
            if (composite[i]) continue;
            primes_.push_back(i);
            for (u64 j = i * i; j <= root; j += i) composite[j] = true;
        }
    }

    // Advances to the next squarefree integer; false at the end of the range.
    bool next(Entry &out) {
        while (true) {
            while (pos_ < buffer_.size()) {
                const std::size_t i = pos_++;
                if (!squarefree_[i]) continue;
                out = buffer_[i];
                return true;
            }
            if (next_start_ > hi_) return false;
            fill_segment();
        }
    }

private:
    void fill_segment() {
        const u64 start = next_start_;
        const u64 end = std::min(hi_, start + segment_ - 1);
        next_start_ = end + 1;
        const std::size_t len = static_cast<std::size_t>(end - start + 1);
        buffer_.assign(len, Entry{});
        squarefree_.assign(len, 1);
        rem_.resize(len);
        for (std::size_t i = 0; i < len; ++i) {
            rem_[i] = start + i;
            buffer_[i].n = start + i;
        }
        for (u64 p : primes_) {
            if (p * p > end) break;
            const u64 pp = p * p;
            for (u64 m = ((start + pp - 1) / pp) * pp; m <= end; m += pp) squarefree_[m - start] = 0;
            for (u64 m = ((start + p - 1) / p) * p; m <= end; m += p) {
                const std::size_t i = m - start;
                if (!squarefree_[i]) continue;
                Entry &e = buffer_[i];
                e.primes[e.count++] = p;
                rem_[i] /= p;
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (!squarefree_[i]) continue;
            if (rem_[i] > 1) buffer_[i].primes[buffer_[i].count++] = rem_[i];
        }
        pos_ = 0;
    }

    u64 next_start_;
    u64 hi_;
    u64 segment_;
    std::vector<u64> primes_;
    std::vector<Entry> buffer_;
    std::vector<std::uint8_t> squarefree_;
    std::vector<u64> rem_;
    std::size_t pos_ = 0;
};

// Squarefree integers in [2, N], ascending.
inline std::vector<u64> squarefree_sieve(u64 N) {
    require(N <= 1'000'000'000ULL, "squarefree_sieve: N exceeds 10^9");
    std::vector<u64> out;
    if (N < 2) return out;
    SquarefreeSieve sieve(2, N);
    SquarefreeSieve::Entry e;
    while (sieve.next(e)) out.push_back(e.n);
    return out;
}

enum class CharacterKind { odd_prime, minus_four, minus_eight, eight };

struct GenusCharacter {
    CharacterKind kind;
    u64 prime;           // the ramified prime this component belongs to
    i64 discriminant;    // p* for odd p, else -4, -8 or 8

    bool operator==(const GenusCharacter &) const = default;
};

inline std::string to_string(const GenusCharacter &c) {
    return "chi_" + std::to_string(c.discriminant);
}

struct QuadField {
    u64 d = 0;
    std::vector<u64> prime_factors;        // of d, ascending
    i64 delta = 0;                         // fundamental discriminant
    std::vector<GenusCharacter> components;  // ascending conductor prime

    std::size_t t() const { return components.size(); }
};

// Value of a genus character at a prime q, as an element of F_2 (0 = split).
inline int eval_character(const GenusCharacter &c, i64 q) {
    require(q >= 2, "eval_character: q must be a prime");
    require(static_cast<u64>(q) % c.prime != 0, "eval_character: q divides the conductor");
    const int k = kronecker(c.discriminant, q);
    ensure(k != 0, "eval_character: character not defined at q");
    return k == 1 ? 0 : 1;
}

inline QuadField genus_components_from_factors(u64 d, std::vector<u64> primes) {
    std::sort(primes.begin(), primes.end());
    QuadField f;
    f.d = d;
    f.prime_factors = primes;
    f.delta = (d % 4 == 1) ? static_cast<i64>(d) : 4 * static_cast<i64>(d);

    i64 odd_product = 1;
    std::vector<GenusCharacter> odd;
    for (u64 p : primes) {
        if (p == 2) continue;
        const i64 star = (p % 4 == 1) ? static_cast<i64>(p) : -static_cast<i64>(p);
        odd.push_back({CharacterKind::odd_prime, p, star});
        odd_product *= star;
    }
    if (f.delta % 2 == 0) {
        const i64 two_part = f.delta / odd_product;
        CharacterKind kind;
        switch (two_part) {
            case -4: kind = CharacterKind::minus_four; break;
            case -8: kind = CharacterKind::minus_eight; break;
            case 8: kind = CharacterKind::eight; break;
            default: throw InvariantError("genus_components: 2-part " + std::to_string(two_part));
        }
        f.components.push_back({kind, 2, two_part});
    } else {
        ensure(odd_product == f.delta, "genus_components: odd product differs from delta");
    }
    f.components.insert(f.components.end(), odd.begin(), odd.end());
    return f;
}

inline QuadField genus_components(u64 d) {
    require(d > 1, "genus_components: d must exceed 1");
    std::vector<u64> primes;
    for (const auto &pp : factor(d)) {
        require(pp.exponent == 1, "genus_components: d=" + std::to_string(d) + " is not squarefree");
        primes.push_back(pp.prime);
    }
    return genus_components_from_factors(d, std::move(primes));
}

// l = -1 or |l| an odd prime congruent to 3 mod 4.
inline bool supported_l(i64 l) {
    if (l == -1) return true;
    const u64 a = static_cast<u64>(l < 0 ? -l : l);
    return a % 4 == 3 && is_prime(a);
}

enum class FamilyStatus { yes, fails_ed, fails_ed2, not_divisible, not_squarefree };

inline std::string to_string(FamilyStatus s) {
    switch (s) {
        case FamilyStatus::yes: return "yes";
        case FamilyStatus::fails_ed: return "fails_ed";
        case FamilyStatus::fails_ed2: return "fails_ed2";
        case FamilyStatus::not_divisible: return "not_divisible";
        case FamilyStatus::not_squarefree: return "not_squarefree";
    }
    return "?";
}

// Membership given the prime factors of squarefree d.
inline FamilyStatus in_family_factored(u64 d, const std::vector<u64> &primes, i64 l) {
    if (l == -1) {
        for (u64 p : primes)
            if (p % 4 == 3) return FamilyStatus::fails_ed;
        return FamilyStatus::yes;
    }
    const i64 al = l < 0 ? -l : l;
    if (d % static_cast<u64>(al) != 0) return FamilyStatus::not_divisible;
    for (u64 p : primes) {
        if (p == 2 || p == static_cast<u64>(al)) continue;
        if (kronecker(l, static_cast<i64>(p)) != 1) return FamilyStatus::fails_ed;
    }
    const i64 cofactor = static_cast<i64>(d) / l;  // d / l, negative when l < 0
    if (kronecker(-cofactor, al) != 1) return FamilyStatus::fails_ed2;
    return FamilyStatus::yes;
}

inline FamilyStatus in_family(u64 d, i64 l) {
    require(supported_l(l), "in_family: unsupported l=" + std::to_string(l));
    require(d >= 1, "in_family: d must be positive");
    if (d == 1) return l == -1 ? FamilyStatus::yes : FamilyStatus::not_divisible;
    std::vector<u64> primes;
    for (const auto &pp : factor(d)) {
        if (pp.exponent > 1) return FamilyStatus::not_squarefree;
        primes.push_back(pp.prime);
    }
    return in_family_factored(d, primes, l);
}

struct ConicPoint {
    i64 x, y, z;
};

// Nontrivial integer solution of x^2 = A y^2 + B z^2 for squarefree A, B, found by
// exhaustive search inside Holzer's box |y| <= sqrt|B|, |z| <= sqrt|A|. A solution
// exists in the box whenever the conic has a rational point, so nullopt is a proof
// of insolubility.
inline std::optional<ConicPoint> solve_conic(i64 A, i64 B) {
    require(A != 0 && B != 0, "solve_conic: zero coefficient");
    if (A < 0 && B < 0) return std::nullopt;
    if (is_square(A)) return ConicPoint{static_cast<i64>(isqrt(static_cast<u64>(A))), 1, 0};
    if (is_square(B)) return ConicPoint{static_cast<i64>(isqrt(static_cast<u64>(B))), 0, 1};
    const i64 ymax = static_cast<i64>(isqrt(static_cast<u64>(B < 0 ? -B : B))) + 1;
    const i64 zmax = static_cast<i64>(isqrt(static_cast<u64>(A < 0 ? -A : A))) + 1;
    for (i64 z = 1; z <= zmax; ++z) {
        const i128 bz = static_cast<i128>(B) * z * z;
        for (i64 y = 0; y <= ymax; ++y) {
            const i128 v = static_cast<i128>(A) * y * y + bz;
            if (v < 0 || v > static_cast<i128>(INT64_MAX)) continue;
            const i64 vv = static_cast<i64>(v);
            if (!is_square(vv)) continue;
            return ConicPoint{static_cast<i64>(isqrt(static_cast<u64>(vv))), y, z};
        }
    }
    return std::nullopt;
}

inline i64 squarefree_part(i64 n) {
    require(n != 0, "squarefree_part: zero");
    i64 sign = n < 0 ? -1 : 1;
    i64 out = 1;
    for (const auto &pp : factor(static_cast<u64>(n < 0 ? -n : n)))
        if (pp.exponent % 2) out *= static_cast<i64>(pp.prime);
    return sign * out;
}

// x^2 - d y^2 = l has a rational solution (independent of the family conditions).
inline bool rationally_soluble(u64 d, i64 l) {
    return solve_conic(static_cast<i64>(d), squarefree_part(l)).has_value();
}

}  // namespace pell::arith
