// pell: command-line front end for the library.
// Exit codes: 0 ok, 1 mathematical "no", 2 usage / bad input, 3 internal invariant violation.

#include "pell/scan.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

using namespace pell;
using arith::i64;
using arith::u64;
using json = nlohmann::json;

namespace {

constexpr int exit_ok = 0, exit_no = 1, exit_usage = 2, exit_internal = 3;
constexpr std::uint64_t default_seed = 20240601;

void print_human(const json &j, const std::string &indent = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto &v = it.value();
        if (v.is_object()) {
            std::cout << indent << it.key() << ":\n";
            print_human(v, indent + "  ");
        } else if (v.is_string()) {
            std::cout << indent << it.key() << ": " << v.get<std::string>() << '\n';
        } else {
            std::cout << indent << it.key() << ": " << v.dump() << '\n';
        }
    }
}

void emit(const json &j, bool as_json) {
    if (as_json)
        std::cout << j.dump() << '\n';
    else
        print_human(j);
}

double real(model::Real v) { return static_cast<double>(v); }

json witness_json(const qf::Witness &w) { return json::array({scan::big_to_json(w.x), scan::big_to_json(w.y)}); }

int cmd_solve(u64 d, i64 l, bool as_json) {
    const auto r = qf::solve_generalized(d, l);
    json j;
    j["status"] = qf::to_string(r.status);
    if (r.status == qf::SolveStatus::q_insoluble || r.status == qf::SolveStatus::not_in_family)
        j["reason"] = arith::to_string(r.family);
    if (r.witness) j["witness"] = witness_json(*r.witness);
    if (as_json) {
        emit(j, true);
    } else {
        std::cout << j["status"].get<std::string>();
        if (j.contains("reason")) std::cout << '(' << j["reason"].get<std::string>() << ')';
        if (r.witness) std::cout << " x=" << r.witness->x << " y=" << r.witness->y;
        std::cout << '\n';
    }
    return r.status == qf::SolveStatus::soluble ? exit_ok : exit_no;
}

int cmd_negpell(u64 d, bool as_json) {
    const auto w = qf::negative_pell(d);
    json j;
    j["d"] = d;
    j["soluble"] = w.has_value();
    if (w) j["witness"] = witness_json(*w);
    j["cf_period_length"] = qf::cf_sqrt(d).period.size();
    emit(j, as_json);
    return w ? exit_ok : exit_no;
}

int cmd_classgroup(i64 delta, bool as_json) {
    const auto g = qf::narrow_class_group(delta);
    json j;
    j["delta"] = g.disc;
    j["narrow_order"] = g.narrow_order;
    j["narrow_invariants"] = g.narrow_invariants;
    j["ordinary_order"] = g.ordinary_order;
    j["ordinary_invariants"] = g.ordinary_invariants;
    j["rk2_narrow"] = g.rk2plus;
    j["rk4_narrow"] = g.rk4plus;
    j["rk8_narrow"] = g.rk8plus;
    j["rk2_ordinary"] = g.rk2ord;
    j["rk4_ordinary"] = g.rk4ord;
    j["rk8_ordinary"] = g.rk8ord;
    j["negative_pell"] = g.negative_pell;
    emit(j, as_json);
    return exit_ok;
}

int cmd_redei_matrix(u64 d, std::optional<i64> l, bool as_json) {
    const auto p = redei::artin2_pairing(d, l);
    const auto &prof = p.profile;
    json j;
    j["d"] = d;
    j["delta"] = prof.field.delta;
    std::vector<u64> conductors;
    for (const auto &c : prof.field.components) conductors.push_back(c.prime);
    j["ramified_primes"] = conductors;
    json rows = json::array();
    for (std::size_t i = 0; i < prof.matrix.rows(); ++i) {
        std::string row;
        for (std::size_t k = 0; k < prof.matrix.cols(); ++k) row += prof.matrix.get(i, k) ? '1' : '0';
        rows.push_back(row);
    }
    j["matrix"] = rows;
    j["rk4"] = prof.rk4;
    j["rk8"] = p.rk8;
    if (l) {
        j["l"] = *l;
        j["l_class_trivial"] = *prof.l_class_trivial;
    }
    emit(j, as_json);
    return exit_ok;
}

int cmd_redei_symbol(i64 a, i64 b, i64 c, bool as_json) {
    const auto in = redei::check_admissible(a, b, c);
    if (!in.admissible()) throw InputError("redei-symbol: triple not admissible: " + in.first_failure());
    json j;
    j["a"] = a;
    j["b"] = b;
    j["c"] = c;
    j["value"] = redei::redei_symbol(a, b, c);
    emit(j, as_json);
    return exit_ok;
}

int cmd_constants(model::Real tol, bool as_json) {
    const auto a = model::alpha_bounded();
    const auto b = model::beta_bounded();
    const auto g = model::gamma_constant(tol);
    const auto e = model::eta_inf(tol);
    const auto pb = model::pell_bounds();
    json j;
    j["alpha"] = real(a.value);
    j["alpha_tail"] = real(a.tail);
    j["beta"] = real(b.value);
    j["beta_tail"] = real(b.tail);
    j["beta_alpha"] = real(a.value * b.value);
    j["eta_inf"] = real(e.value);
    j["eta_inf_tail"] = real(e.tail);
    j["gamma"] = real(g.value);
    j["gamma_tail"] = real(g.tail);
    j["pell_lower"] = real(pb.lower);
    j["pell_upper"] = real(pb.upper);
    j["pell_tail"] = real(pb.tail);
    emit(j, as_json);
    return exit_ok;
}

}  // namespace

namespace {

int cmd_scan(u64 N, i64 l, bool classgroup, std::string out, bool resume, unsigned workers, std::uint64_t seed,
             bool no_witness, bool as_json) {
    scan::ScanOptions opt;
    opt.with_classgroup = classgroup;
    opt.with_witness = !no_witness;
    opt.workers = workers;
    opt.resume = resume;
    if (!out.empty()) {
        const char *dir = std::getenv("PELL_OUT_DIR");
        if (dir && *dir && std::filesystem::path(out).is_relative()) out = (std::filesystem::path(dir) / out).string();
        opt.checkpoint_path = out;
    } else if (resume) {
        throw InputError("scan: --resume needs --out");
    }
    const auto res = scan::scan(N, l, opt, false);
    json j = scan::summary_to_json(res.summary, classgroup);
    j["records_chain"] = res.records_chain;
    j["summary_chain"] = res.summary_chain;
    j["resumed_records"] = res.resumed_records;
    j["seed"] = seed;
    if (!out.empty()) j["out"] = out;
    emit(j, as_json);
    return exit_ok;
}

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

std::vector<Check> selftest_checks(bool full, std::uint64_t seed) {
    std::vector<Check> out;
    {
        bool ok = true;
        for (unsigned n = 0; n <= 12; ++n) {
            const auto s = f2::markov_identity_check(n);
            ok = ok && s.lhs == s.rhs;
        }
        out.push_back({"markov identity n <= 12", ok, ""});
    }
    {
        const unsigned top = full ? 16 : 8;
        bool ok = true;
        for (unsigned m = 0; m <= top; ++m)
            for (unsigned n = 0; n <= top; ++n) {
                Rational s = 0;
                for (unsigned j = 0; j <= n; ++j) s += f2::prob_kernel_rank(m, n, j);
                ok = ok && s == 1;
            }
        out.push_back({"kernel-rank law sums to 1, m,n <= " + std::to_string(top), ok, ""});
    }
    {
        const unsigned top = full ? 4 : 3;
        bool ok = true;
        for (unsigned m = 0; m <= top; ++m)
            for (unsigned n = 0; n <= top; ++n) {
                const auto s = f2::enumerate_matrix_stats(m, n);
                for (unsigned j = 0; j <= n; ++j) {
                    const Rational seen = s.kernel_rank.count(j) ? s.kernel_rank.at(j) : Rational(0);
                    ok = ok && f2::prob_kernel_rank(m, n, j) == seen;
                }
                if (m == n && n >= 1)
                    for (unsigned k = 0; k <= n; ++k) ok = ok && f2::g_exact(n, k) == s.trivial_intersection.at(k);
            }
        out.push_back({"P and g against enumeration, m,n <= " + std::to_string(top), ok, ""});
    }
    {
        const auto rep = redei::reciprocity_suite(full ? 500 : 100, 4000, seed);
        out.push_back({"reciprocity [a,b,c] = [c,b,a]", rep.failures == 0 && rep.tested == (full ? 500u : 100u),
                       std::to_string(rep.tested) + " triples, " + std::to_string(rep.failures) + " failures"});
    }
    {
        const u64 top = full ? 20000 : 2000;
        u64 bad4 = 0, bad8 = 0;
        for (u64 d = 2; d <= top; ++d) {
            if (!arith::is_squarefree(d)) continue;
            const auto g = qf::narrow_class_group(qf::fundamental_discriminant(d));
            const auto p = redei::artin2_pairing(d);
            bad4 += p.rk4 != g.rk4plus;
            if (full && p.rk4 >= 1) bad8 += p.rk8 != g.rk8plus;
        }
        out.push_back({"Redei rk4" + std::string(full ? "/rk8" : "") + " against forms, d <= " + std::to_string(top),
                       bad4 == 0 && bad8 == 0,
                       std::to_string(bad4) + " rk4 and " + std::to_string(bad8) + " rk8 mismatches"});
    }
    return out;
}

int cmd_selftest(const std::string &level, std::uint64_t seed, bool as_json) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = selftest_checks(level == "full", seed);
    bool all = true;
    json arr = json::array();
    for (const auto &c : checks) {
        all = all && c.passed;
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (as_json) {
        std::cout << json{{"level", level}, {"passed", all}, {"checks", arr}, {"seconds", secs}}.dump() << '\n';
    } else {
        for (const auto &c : checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
        std::cout << (all ? "selftest passed" : "selftest FAILED") << " in " << secs << " s\n";
    }
    return all ? exit_ok : exit_internal;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Generalized negative Pell equations, Redei symbols and 2-class groups"};
    app.require_subcommand(1);
    bool as_json = false;

    u64 d = 0, N = 0;
    i64 l = 0, delta = 0, a = 0, b = 0, c = 0;
    std::optional<i64> opt_l;
    model::Real tol = 1e-14L;
    bool classgroup = false, resume = false, no_witness = false;
    std::string out, level = "quick";
    unsigned workers = 1;
    std::uint64_t seed = default_seed;

    auto add_json = [&](CLI::App *s) { s->add_flag("--json", as_json, "Machine-readable output"); };

    auto *solve = app.add_subcommand("solve", "Decide N_d(x, y) = l over Z");
    solve->add_option("--d", d, "Squarefree d > 1")->required();
    solve->add_option("--l", l, "-1 or +-p with p = 3 mod 4 prime")->required();
    add_json(solve);

    auto *negpell = app.add_subcommand("negpell", "Decide x^2 - d y^2 = -1");
    negpell->add_option("--d", d, "Nonsquare d >= 2")->required();
    add_json(negpell);

    auto *cg = app.add_subcommand("classgroup", "Narrow and ordinary class group of a real quadratic discriminant");
    cg->add_option("--delta", delta, "Fundamental discriminant in [5, 2e7]")->required();
    add_json(cg);

    auto *rm = app.add_subcommand("redei-matrix", "Redei matrix, 4-rank and 8-rank of Q(sqrt d)");
    rm->add_option("--d", d, "Squarefree d > 1")->required();
    rm->add_option("--l", opt_l, "Optional target l for the l-class test");
    add_json(rm);

    auto *rs = app.add_subcommand("redei-symbol", "Classical Redei symbol [a, b, c]");
    rs->add_option("--a", a)->required();
    rs->add_option("--b", b)->required();
    rs->add_option("--c", c)->required();
    add_json(rs);

    auto *cs = app.add_subcommand("constants", "Model constants and density bounds");
    cs->add_option("--tol", tol, "Tolerance for eta_inf and gamma (>= 1e-14)");
    add_json(cs);

    auto *sc = app.add_subcommand("scan", "Scan S_Q(N, l) and summarize against the model");
    sc->add_option("--n", N, "Upper bound N <= 1e8")->required();
    sc->add_option("--l", l, "Target l")->required();
    sc->add_flag("--classgroup", classgroup, "Also compute form class groups (N <= 1e5)");
    sc->add_option("--out", out, "JSON-lines output, also the checkpoint; relative paths honor PELL_OUT_DIR");
    sc->add_flag("--resume", resume, "Continue from an existing --out file");
    sc->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 256u));
    sc->add_option("--seed", seed, "Recorded in the summary; scans are deterministic");
    sc->add_flag("--no-witness", no_witness, "Decide solubility without producing witnesses");
    add_json(sc);

    auto *st = app.add_subcommand("selftest", "Exact-identity and oracle suites");
    st->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));
    st->add_option("--seed", seed, "Seed for generated reciprocity triples");
    add_json(st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*solve) return cmd_solve(d, l, as_json);
        if (*negpell) return cmd_negpell(d, as_json);
        if (*cg) return cmd_classgroup(delta, as_json);
        if (*rm) return cmd_redei_matrix(d, opt_l, as_json);
        if (*rs) return cmd_redei_symbol(a, b, c, as_json);
        if (*cs) return cmd_constants(tol, as_json);
        if (*sc) return cmd_scan(N, l, classgroup, out, resume, workers, seed, no_witness, as_json);
        if (*st) return cmd_selftest(level, seed, as_json);
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InvariantError &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_usage;
}
