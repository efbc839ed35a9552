#pragma once

// Dense linear algebra over F_2, the random-matrix kernel probabilities and
// the (T, U) Markov model used to explain the 1/(2^(n+1)-1) solubility law.

#include "pell/errors.hpp"
#include "pell/rational.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace pell::f2 {

using F2Vector = std::vector<std::uint8_t>;

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

    static F2Matrix identity(std::size_t n) {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    // Every row must have the same length; an empty list gives a 0x0 matrix.
    static F2Matrix from_rows(const std::vector<F2Vector> &rows) {
        if (rows.empty()) return {};
        F2Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            require(rows[i].size() == m.cols_, "F2Matrix::from_rows: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m.set(i, j, rows[i][j] & 1U);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t i, std::size_t j) const {
        check(i, j);
        return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
    }

    void set(std::size_t i, std::size_t j, bool v) {
        check(i, j);
        std::uint64_t &w = bits_[i * words_ + j / 64];
        const std::uint64_t mask = std::uint64_t{1} << (j % 64);
        w = v ? (w | mask) : (w & ~mask);
    }

    void flip(std::size_t i, std::size_t j) {
        check(i, j);
        bits_[i * words_ + j / 64] ^= std::uint64_t{1} << (j % 64);
    }

    F2Vector row(std::size_t i) const {
        F2Vector r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = get(i, j);
        return r;
    }

    std::vector<F2Vector> row_list() const {
        std::vector<F2Vector> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
        return out;
    }

    F2Matrix transpose() const {
        F2Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (get(i, j)) t.set(j, i, true);
        return t;
    }

    // M v over F_2.
    F2Vector apply(const F2Vector &v) const {
        require(v.size() == cols_, "F2Matrix::apply: dimension mismatch");
        F2Vector out(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            unsigned acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc ^= (get(i, j) & v[j]);
            out[i] = static_cast<std::uint8_t>(acc);
        }
        return out;
    }

    // v^T M over F_2.
    F2Vector apply_left(const F2Vector &v) const { return transpose().apply(v); }

    bool operator==(const F2Matrix &o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }

    // Row-level access for elimination.
    std::uint64_t *row_words(std::size_t i) { return bits_.data() + i * words_; }
    const std::uint64_t *row_words(std::size_t i) const { return bits_.data() + i * words_; }
    std::size_t words_per_row() const { return words_; }

private:
    void check(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_)
            throw InputError("F2Matrix: index (" + std::to_string(i) + "," + std::to_string(j) +
                             ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

namespace detail {

// In-place reduced row echelon form; returns pivot column of each leading row.
inline std::vector<std::size_t> rref(F2Matrix &m) {
    std::vector<std::size_t> pivots;
    const std::size_t words = m.words_per_row();
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        const std::size_t w = c / 64;
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        std::size_t p = r;
        while (p < m.rows() && !(m.row_words(p)[w] & bit)) ++p;
        if (p == m.rows()) continue;
        if (p != r) std::swap_ranges(m.row_words(p), m.row_words(p) + words, m.row_words(r));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != r && (m.row_words(i)[w] & bit)) {
                std::uint64_t *dst = m.row_words(i);
                const std::uint64_t *src = m.row_words(r);
                for (std::size_t k = w; k < words; ++k) dst[k] ^= src[k];
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Rank of a list of bit-rows packed into single words (width <= 64).
inline std::size_t small_rank(std::vector<std::uint64_t> rows) {
    std::size_t rank = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::uint64_t v = rows[i];
        if (v == 0) continue;
        ++rank;
        const std::uint64_t low = v & (~v + 1);
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[j] & low) rows[j] ^= v;
    }
    return rank;
}

}  // namespace detail

inline std::size_t rank(const F2Matrix &m) {
    F2Matrix copy = m;
    return detail::rref(copy).size();
}

// Basis of {x : M x = 0}, one vector per free column of the echelon form.
inline std::vector<F2Vector> right_kernel_basis(const F2Matrix &m) {
    F2Matrix e = m;
    const auto pivots = detail::rref(e);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<F2Vector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        F2Vector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (e.get(r, free)) v[pivots[r]] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<F2Vector> left_kernel_basis(const F2Matrix &m) {
    return right_kernel_basis(m.transpose());
}

// Basis of LKer(M) ∩ RKer(M) inside F_2^n.
inline std::vector<F2Vector> kernel_intersection(const F2Matrix &m) {
    require(m.rows() == m.cols(), "kernel_intersection: matrix must be square");
    const std::size_t n = m.rows();
    F2Matrix stacked(2 * n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (m.get(i, j)) stacked.set(i, j, true);
            if (m.get(j, i)) stacked.set(n + i, j, true);
        }
    return right_kernel_basis(stacked);
}

// Probability that a uniform m x n matrix over F_2 has right kernel of dimension j:
// 2^{-mn} prod_{i=0}^{n-j-1} (2^m - 2^i)(2^n - 2^i) / (2^{n-j} - 2^i).
inline Rational prob_kernel_rank(unsigned m, unsigned n, unsigned j) {
    if (j > n) return Rational(0);
    if (n - j > m) return Rational(0);
    Rational p(1);
    for (unsigned i = 0; i < n - j; ++i) {
        p *= Rational((pow2(m) - pow2(i)) * (pow2(n) - pow2(i)), pow2(n - j) - pow2(i));
    }
    return p / Rational(pow2(m * n));
}

// P(trivial LKer ∩ RKer | kernel dimension m) for a uniform n x n matrix.
inline Rational g_exact(unsigned n, unsigned m) {
    require(m <= n, "g_exact: need m <= n");
    const Rational denom = prob_kernel_rank(n, n - m, 0);
    ensure(denom != 0, "g_exact: P(n, n-m, 0) vanished");
    Rational prod(1);
    for (long j = 0; j <= static_cast<long>(n) - 2 * static_cast<long>(m) - 1; ++j)
        prod *= Rational(1) - pow2_rational(j - static_cast<long>(n) + static_cast<long>(m));
    return prob_kernel_rank(n - m, m, 0) * prod / denom;
}

struct MatrixStats {
    std::size_t total = 0;
    std::map<unsigned, Rational> kernel_rank;          // j -> fraction with dim RKer = j
    std::map<unsigned, Rational> trivial_intersection;  // square only: m' -> P(LKer∩RKer=0 | dim = m')
};

// Exhaustive enumeration of all 2^(mn) m x n matrices.
inline MatrixStats enumerate_matrix_stats(unsigned m, unsigned n) {
    require(static_cast<unsigned long>(m) * n <= 24, "enumerate_matrix_stats: m*n exceeds 24");
    const std::uint64_t count = std::uint64_t{1} << (m * n);
    std::vector<std::uint64_t> by_rank(n + 1, 0);
    std::vector<std::uint64_t> trivial(n + 1, 0);
    const bool square = (m == n);
    const std::uint64_t row_mask = (n == 0) ? 0 : ((std::uint64_t{1} << n) - 1);

    std::vector<std::uint64_t> rows(m);
    for (std::uint64_t code = 0; code < count; ++code) {
        for (unsigned i = 0; i < m; ++i) rows[i] = (code >> (i * n)) & row_mask;
        const unsigned kdim = n - static_cast<unsigned>(detail::small_rank(rows));
        ++by_rank[kdim];
        if (!square) continue;
        bool meets = false;
        for (std::uint64_t v = 1; v <= row_mask && !meets; ++v) {
            bool right = true;
            std::uint64_t left_sum = 0;
            for (unsigned i = 0; i < m; ++i) {
                if (std::popcount(rows[i] & v) & 1) right = false;
                if ((v >> i) & 1) left_sum ^= rows[i];
            }
            meets = right && left_sum == 0;
        }
        if (!meets) ++trivial[kdim];
    }

    MatrixStats stats;
    stats.total = count;
    for (unsigned j = 0; j <= n; ++j) {
        if (by_rank[j] == 0) continue;
        stats.kernel_rank[j] = Rational(BigInt(by_rank[j]), BigInt(count));
        if (square) stats.trivial_intersection[j] = Rational(BigInt(trivial[j]), BigInt(by_rank[j]));
    }
    return stats;
}

struct IdentitySides {
    Rational lhs;
    Rational rhs;
};

// 1/(2^{n+1}-1) against sum_i P(n,n,i)/2^n * 1/(2^{i+1}-1).
inline IdentitySides markov_identity_check(unsigned n) {
    require(n <= 64, "markov_identity_check: n > 64");
    IdentitySides s;
    s.lhs = Rational(BigInt(1), pow2(n + 1) - 1);
    s.rhs = 0;
    for (unsigned i = 0; i <= n; ++i)
        s.rhs += prob_kernel_rank(n, n, i) / Rational(pow2(n)) * Rational(BigInt(1), pow2(i + 1) - 1);
    return s;
}

// Uniform m x n matrix drawn from a caller-owned engine.
template <class Rng>
F2Matrix sample_matrix(std::size_t m, std::size_t n, Rng &rng) {
    F2Matrix out(m, n);
    std::uniform_int_distribution<int> bit(0, 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (bit(rng)) out.set(i, j, true);
    return out;
}

inline F2Matrix sample_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_matrix(m, n, rng);
}

enum class TUModel {
    // U is drawn uniformly among pairings whose left kernel contains ker T.
    // This is the space in which the relation always pairs trivially.
    kernel_coupled,
    // T and U independent; the conditional law collapses to 1/(2^{n+1}-1).
    independent,
};

struct TUStats {
    unsigned n = 0;
    std::uint64_t trials = 0;  // accepted (T, U) pairs
    std::uint64_t draws = 0;   // raw draws including rejections
    std::vector<std::uint64_t> hits;         // i -> #{x in ker T and A_{i,x}}
    std::vector<std::uint64_t> occurrences;  // i -> #{A_{i,x}}

    double frequency(unsigned i) const {
        return occurrences[i] ? static_cast<double>(hits[i]) / static_cast<double>(occurrences[i]) : 0.0;
    }
};

// Monte Carlo over pairs (T, U): T a surjection F_2^{n+1} -> F_2^n, U a pairing
// F_2^{n+1} x F_2^n -> F_2, x = e_0. Reports, for each i, how often x lies in
// ker T given that x lies in leftker(U) and dim leftker(U) = i + 1.
inline TUStats simulate_TU(unsigned n, std::uint64_t trials, std::uint64_t seed,
                           TUModel model = TUModel::kernel_coupled) {
    require(trials > 0, "simulate_TU: zero trials");
    require(n >= 1 && n <= 12, "simulate_TU: need 1 <= n <= 12");
    std::mt19937_64 rng(seed);
    const std::uint64_t mask_n1 = (std::uint64_t{1} << (n + 1)) - 1;  // width n+1
    const std::uint64_t mask_n = (std::uint64_t{1} << n) - 1;         // width n

    TUStats st;
    st.n = n;
    st.hits.assign(n + 1, 0);
    st.occurrences.assign(n + 1, 0);

    std::vector<std::uint64_t> t_rows(n), u_rows(n + 1);
    while (st.trials < trials) {
        ++st.draws;
        // T as n rows of width n+1, accepted iff rank n.
        for (auto &r : t_rows) r = rng() & mask_n1;
        if (detail::small_rank(t_rows) != n) continue;
        for (auto &r : u_rows) r = rng() & mask_n;

        if (model == TUModel::kernel_coupled) {
            // ker T is one-dimensional; find its generator k and require k^T U = 0.
            std::uint64_t k = 0;
            for (std::uint64_t v = 1; v <= mask_n1; ++v) {
                bool zero = true;
                for (auto r : t_rows)
                    if (std::popcount(r & v) & 1) { zero = false; break; }
                if (zero) { k = v; break; }
            }
            std::uint64_t combo = 0;
            for (unsigned i = 0; i <= n; ++i)
                if ((k >> i) & 1) combo ^= u_rows[i];
            if (combo != 0) continue;
        }
        ++st.trials;
        if (u_rows[0] != 0) continue;  // x = e_0 not in leftker(U)
        const unsigned left_dim = (n + 1) - static_cast<unsigned>(detail::small_rank(u_rows));
        const unsigned i = left_dim - 1;
        ++st.occurrences[i];
        bool x_in_kernel = true;  // T e_0 = column 0 of T
        for (auto r : t_rows)
            if (r & 1U) { x_in_kernel = false; break; }
        if (x_in_kernel) ++st.hits[i];
    }
    return st;
}

}  // namespace pell::f2
