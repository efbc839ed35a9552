#pragma once

// Desk-scale family scans: enumerate S_Q(N, l), compute per-d invariants,
// aggregate against the model, persist as hash-chained JSON lines.

#include "pell/arith.hpp"
#include "pell/errors.hpp"
#include "pell/model.hpp"
#include "pell/quadform.hpp"
#include "pell/redei.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pell::scan {

using arith::i64;
using arith::u64;
using json = nlohmann::json;

inline constexpr int schema_version = 1;
inline constexpr u64 max_scan_n = 100'000'000;
inline constexpr u64 max_classgroup_n = 100'000;

struct ScanRecord {
    u64 d = 0;
    i64 l = 0;
    std::vector<u64> primes;
    arith::FamilyStatus family = arith::FamilyStatus::yes;
    unsigned rk4 = 0;                  // narrow 4-rank from the Redei matrix
    std::optional<bool> soluble;       // N_d(x, y) = l over Z; only for family members
    std::optional<qf::Witness> witness;
    // class-group pass
    std::optional<unsigned> rk4_forms, rk8_narrow, rk4_ord, rk8_ord, rk8_symbols;

    bool operator==(const ScanRecord &o) const {
        auto w = [](const std::optional<qf::Witness> &x) {
            return x ? std::make_pair(x->x, x->y) : std::make_pair(BigInt(0), BigInt(-1));
        };
        return d == o.d && l == o.l && primes == o.primes && family == o.family && rk4 == o.rk4 &&
               soluble == o.soluble && w(witness) == w(o.witness) && rk4_forms == o.rk4_forms &&
               rk8_narrow == o.rk8_narrow && rk4_ord == o.rk4_ord && rk8_ord == o.rk8_ord &&
               rk8_symbols == o.rk8_symbols;
    }
};

struct ScanOptions {
    bool with_classgroup = false;
    bool with_witness = true;
    unsigned workers = 1;
    u64 chunk = 20000;            // d-interval length handed to one worker
    std::string checkpoint_path;  // output file, doubles as the checkpoint
    bool resume = false;
};

// Ascending squarefree d in [2, N] with d in S_Q(l).
inline void for_each_family(u64 lo, u64 hi, i64 l,
                            const std::function<void(u64, const std::vector<u64> &)> &fn) {
    require(arith::supported_l(l), "scan: unsupported l=" + std::to_string(l));
    require(hi <= max_scan_n, "scan: N exceeds 10^8");
    lo = std::max<u64>(lo, 2);
    if (lo > hi) return;
    arith::SquarefreeSieve sieve(lo, hi);
    arith::SquarefreeSieve::Entry e;
    std::vector<u64> primes;
    const u64 al = static_cast<u64>(l < 0 ? -l : l);
    while (sieve.next(e)) {
        if (l != -1 && e.n % al != 0) continue;
        primes = e.factors();
        if (arith::in_family_factored(e.n, primes, l) != arith::FamilyStatus::yes) continue;
        fn(e.n, primes);
    }
}

inline std::vector<u64> enumerate_family(u64 N, i64 l) {
    std::vector<u64> out;
    for_each_family(2, N, l, [&](u64 d, const std::vector<u64> &) { out.push_back(d); });
    return out;
}

inline ScanRecord compute_record(u64 d, const std::vector<u64> &primes, i64 l, const ScanOptions &opt) {
    ScanRecord r;
    r.d = d;
    r.l = l;
    r.primes = primes;
    r.family = arith::in_family_factored(d, primes, l);
    ensure(r.family == arith::FamilyStatus::yes, "scan: record for a non-member d=" + std::to_string(d));
    const auto field = arith::genus_components_from_factors(d, primes);
    r.rk4 = redei::redei_matrix_from_field(field).rk4;
    const auto res = qf::solve_generalized_factored(d, primes, l, opt.with_witness);
    r.soluble = res.status == qf::SolveStatus::soluble;
    r.witness = res.witness;
    // With rk4 = 0 the sign-adjusted l-class is 2-torsion and lies in 2Cl+, hence is trivial.
    ensure(r.rk4 != 0 || *r.soluble, "scan: rk4 = 0 member is insoluble, d=" + std::to_string(d));
    if (opt.with_classgroup) {
        const auto g = qf::narrow_class_group(qf::fundamental_discriminant(d));
        r.rk4_forms = g.rk4plus;
        r.rk8_narrow = g.rk8plus;
        r.rk4_ord = g.rk4ord;
        r.rk8_ord = g.rk8ord;
        if (r.rk4 >= 1) r.rk8_symbols = redei::artin2_pairing_from_field(field).rk8;
    }
    return r;
}

// Re-derives everything a record claims that can be checked cheaply.
inline void verify_record(const ScanRecord &r) {
    u64 prod = 1;
    for (u64 p : r.primes) {
        require(arith::is_prime(p), "verify: non-prime factor in record d=" + std::to_string(r.d));
        prod *= p;
    }
    require(prod == r.d, "verify: factor list does not multiply to d=" + std::to_string(r.d));
    require(arith::in_family_factored(r.d, r.primes, r.l) == arith::FamilyStatus::yes,
            "verify: d=" + std::to_string(r.d) + " not in the family");
    const auto field = arith::genus_components_from_factors(r.d, r.primes);
    require(redei::redei_matrix_from_field(field).rk4 == r.rk4, "verify: rk4 mismatch for d=" + std::to_string(r.d));
    require(r.soluble.has_value(), "verify: missing solubility for d=" + std::to_string(r.d));
    if (r.witness) {
        require(*r.soluble, "verify: witness on an insoluble record");
        require(qf::principal_form(r.d).eval(r.witness->x, r.witness->y) == BigInt(r.l),
                "verify: witness fails N_d(x, y) = l for d=" + std::to_string(r.d));
    }
}

// ---------------------------------------------------------------------------

struct Summary {
    i64 l = 0;
    u64 N = 0;
    u64 count_q = 0;  // |S_Q|
    u64 count_z = 0;  // |S_Z|
    std::map<unsigned, u64> rk4_hist;
    std::map<unsigned, u64> rk4_soluble;
    // class-group pass: d with narrow rk4 = ordinary rk4 = 1 and narrow rk8 = 1
    u64 rk8_sample = 0;
    u64 rk8_ord_zero = 0;
    u64 rk8_checked = 0;
    u64 rk8_mismatch = 0;  // symbols vs forms
    u64 rk4_mismatch = 0;  // Redei vs forms

    double ratio() const { return count_q ? static_cast<double>(count_z) / static_cast<double>(count_q) : 0.0; }

    double rk4_frequency(unsigned j) const {
        const auto it = rk4_hist.find(j);
        return count_q && it != rk4_hist.end() ? static_cast<double>(it->second) / static_cast<double>(count_q) : 0.0;
    }

    std::optional<double> conditional(unsigned j) const {
        const auto it = rk4_hist.find(j);
        if (it == rk4_hist.end() || it->second == 0) return std::nullopt;
        const auto s = rk4_soluble.find(j);
        return static_cast<double>(s == rk4_soluble.end() ? 0 : s->second) / static_cast<double>(it->second);
    }

    // Model prediction for the 4-rank law in this family.
    double predicted_rk4(unsigned j) const {
        return static_cast<double>(l == -1 ? model::rk4_prob_minus_one(j) : model::fourrank_prob(j));
    }
};

class Aggregator {
public:
    void add(const ScanRecord &r) {
        if (!s_.count_q && !have_l_) {
            s_.l = r.l;
            have_l_ = true;
        }
        require(r.l == s_.l, "aggregate: records from different l");
        require(r.soluble.has_value(), "aggregate: record without solubility");
        ++s_.count_q;
        ++s_.rk4_hist[r.rk4];
        if (*r.soluble) {
            ++s_.count_z;
            ++s_.rk4_soluble[r.rk4];
        }
        if (r.rk4_forms) {
            s_.rk4_mismatch += *r.rk4_forms != r.rk4;
            if (r.rk8_symbols) {
                ++s_.rk8_checked;
                s_.rk8_mismatch += *r.rk8_symbols != *r.rk8_narrow;
            }
            if (*r.rk4_forms == 1 && *r.rk4_ord == 1 && *r.rk8_narrow == 1) {
                ++s_.rk8_sample;
                s_.rk8_ord_zero += *r.rk8_ord == 0;
            }
        }
    }

    void set_n(u64 N) { s_.N = N; }
    const Summary &summary() const { return s_; }

private:
    Summary s_;
    bool have_l_ = false;
};

inline Summary aggregate(const std::vector<ScanRecord> &records) {
    Aggregator a;
    for (const auto &r : records) a.add(r);
    return a.summary();
}

}  // namespace pell::scan

#include "pell/scan_io.hpp"
