#pragma once

// JSON-lines persistence, hash chain, checkpoint/resume and the worker pool for scans.
// Included from scan.hpp.

#include <exception>

namespace pell::scan {

// Record layout (schema_version 1), one JSON object per line:
//   header : {type:"header", schema_version, N, l, with_classgroup, with_witness, chain}
//   record : {type:"record", schema_version, d, l, primes[], in_family, rk4, soluble,
//             witness:[x, y]?, rk4_forms?, rk8_narrow?, rk4_ord?, rk8_ord?, rk8_symbols?, chain}
//   summary: {type:"summary", schema_version, ..., records_chain, chain}
// Integers above 2^53 in absolute value are written as decimal strings.
// chain = FNV-1a-64(previous chain || line without its chain key), as 16 hex digits.

inline std::string fnv1a_hex(const std::string &prev, const std::string &body) {
    std::uint64_t h = 1469598103934665603ULL;
    auto eat = [&h](const std::string &s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
    };
    eat(prev);
    eat(body);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline const std::string chain_seed = std::string(16, '0');

inline json big_to_json(const BigInt &v) {
    static const BigInt limit = BigInt(1) << 53;
    if (v <= limit && v >= -limit) return json(static_cast<std::int64_t>(v));
    return json(v.str());
}

inline BigInt big_from_json(const json &j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<std::int64_t>());
}

inline json record_to_json(const ScanRecord &r) {
    json j;
    j["type"] = "record";
    j["schema_version"] = schema_version;
    j["d"] = r.d;
    j["l"] = r.l;
    j["primes"] = r.primes;
    j["in_family"] = arith::to_string(r.family);
    j["rk4"] = r.rk4;
    if (r.soluble) j["soluble"] = *r.soluble;
    if (r.witness) j["witness"] = json::array({big_to_json(r.witness->x), big_to_json(r.witness->y)});
    if (r.rk4_forms) j["rk4_forms"] = *r.rk4_forms;
    if (r.rk8_narrow) j["rk8_narrow"] = *r.rk8_narrow;
    if (r.rk4_ord) j["rk4_ord"] = *r.rk4_ord;
    if (r.rk8_ord) j["rk8_ord"] = *r.rk8_ord;
    if (r.rk8_symbols) j["rk8_symbols"] = *r.rk8_symbols;
    return j;
}

inline ScanRecord record_from_json(const json &j) {
    require(j.value("type", "") == "record", "scan: line is not a record");
    require(j.value("schema_version", 0) == schema_version, "scan: unsupported schema_version");
    ScanRecord r;
    r.d = j.at("d").get<u64>();
    r.l = j.at("l").get<i64>();
    r.primes = j.at("primes").get<std::vector<u64>>();
    require(j.at("in_family").get<std::string>() == "yes", "scan: record for a non-member");
    r.family = arith::FamilyStatus::yes;
    r.rk4 = j.at("rk4").get<unsigned>();
    if (j.contains("soluble")) r.soluble = j["soluble"].get<bool>();
    if (j.contains("witness")) r.witness = qf::Witness{big_from_json(j["witness"][0]), big_from_json(j["witness"][1])};
    auto opt = [&j](const char *k) -> std::optional<unsigned> {
        if (!j.contains(k)) return std::nullopt;
        return j[k].get<unsigned>();
    };
    r.rk4_forms = opt("rk4_forms");
    r.rk8_narrow = opt("rk8_narrow");
    r.rk4_ord = opt("rk4_ord");
    r.rk8_ord = opt("rk8_ord");
    r.rk8_symbols = opt("rk8_symbols");
    return r;
}

inline json summary_to_json(const Summary &s, bool with_classgroup) {
    json j;
    j["type"] = "summary";
    j["schema_version"] = schema_version;
    j["N"] = s.N;
    j["l"] = s.l;
    j["count_q"] = s.count_q;
    j["count_z"] = s.count_z;
    j["ratio"] = s.ratio();
    json hist = json::object(), sol = json::object(), cond = json::object(), pred = json::object(),
         dhist = json::object(), pcond = json::object(), dcond = json::object();
    for (const auto &[k, v] : s.rk4_hist) {
        const auto key = std::to_string(k);
        hist[key] = v;
        sol[key] = s.rk4_soluble.count(k) ? s.rk4_soluble.at(k) : 0;
        cond[key] = *s.conditional(k);
        pred[key] = s.predicted_rk4(k);
        dhist[key] = s.rk4_frequency(k) - s.predicted_rk4(k);
        if (s.l != -1) {
            const double p = model::to_real(model::conditional_solubility(k));
            pcond[key] = p;
            dcond[key] = *s.conditional(k) - p;
        }
    }
    j["rk4_hist"] = hist;
    j["rk4_soluble"] = sol;
    j["conditional"] = cond;
    json m;
    m["rk4"] = pred;
    m["rk4_delta"] = dhist;
    if (s.l == -1) {
        const auto b = model::pell_bounds();
        m["ratio_bounds"] = {static_cast<double>(b.lower), static_cast<double>(b.upper)};
        m["rk4_zero"] = static_cast<double>(model::alpha());
    } else {
        m["ratio"] = static_cast<double>(model::gamma_constant().value);
        m["conditional"] = pcond;
        m["conditional_delta"] = dcond;
    }
    m["heuristic"] = "limits are asymptotic; desk-scale deltas are not expected to vanish";
    j["model"] = m;
    if (with_classgroup) {
        json c;
        c["rk4_mismatch"] = s.rk4_mismatch;
        c["rk8_checked"] = s.rk8_checked;
        c["rk8_mismatch"] = s.rk8_mismatch;
        c["rk8_sample"] = s.rk8_sample;
        c["rk8_ord_zero"] = s.rk8_ord_zero;
        if (s.rk8_sample)
            c["rk8_ord_zero_fraction"] = static_cast<double>(s.rk8_ord_zero) / static_cast<double>(s.rk8_sample);
        j["classgroup"] = c;
    }
    return j;
}

inline json header_json(u64 N, i64 l, const ScanOptions &opt) {
    return json{{"type", "header"},
                {"schema_version", schema_version},
                {"N", N},
                {"l", l},
                {"with_classgroup", opt.with_classgroup},
                {"with_witness", opt.with_witness}};
}

// Appends the chain key and returns the serialized line (no newline).
inline std::string chained_line(json body, std::string &chain) {
    body.erase("chain");
    chain = fnv1a_hex(chain, body.dump());
    body["chain"] = chain;
    return body.dump();
}

struct ScanResult {
    Summary summary;
    std::vector<ScanRecord> records;
    std::string records_chain;  // chain value after the last record line
    std::string summary_chain;  // chain value of the summary line
    u64 resumed_records = 0;
};

namespace detail {

struct Checkpoint {
    std::vector<std::string> lines;  // header and record lines, verbatim
    std::vector<ScanRecord> records;
    std::string chain = chain_seed;
};

inline Checkpoint load_checkpoint(const std::string &path, const json &expected_header, const ScanOptions &opt) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "scan: cannot read checkpoint " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::vector<std::string> raw;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) break;  // trailing partial line is dropped
        raw.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    Checkpoint cp;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        json j;
        try {
            j = json::parse(raw[i]);
        } catch (const json::exception &) {
            require(i + 1 == raw.size(), "scan: corrupted checkpoint line " + std::to_string(i + 1));
            break;
        }
        require(j.contains("chain") && j["chain"].is_string(),
                "scan: corrupted checkpoint line " + std::to_string(i + 1) + " (no chain)");
        const std::string stored = j["chain"].get<std::string>();
        std::string chain = cp.chain;
        chained_line(j, chain);
        require(chain == stored, "scan: corrupted checkpoint, hash chain breaks at line " + std::to_string(i + 1));
        const std::string type = j.value("type", "");
        if (i == 0) {
            json h = j;
            h.erase("chain");
            require(type == "header" && h == expected_header, "scan: checkpoint was written with other parameters");
        } else if (type == "summary") {
            break;  // complete file; the summary is regenerated
        } else {
            auto r = record_from_json(j);
            require(cp.records.empty() || cp.records.back().d < r.d, "scan: checkpoint records out of order");
            cp.records.push_back(std::move(r));
        }
        cp.chain = chain;
        cp.lines.push_back(raw[i]);
    }
    // Re-verify everything cheaply and recompute the tail.
    for (const auto &r : cp.records) verify_record(r);
    const std::size_t from = cp.records.size() > 100 ? cp.records.size() - 100 : 0;
    for (std::size_t i = from; i < cp.records.size(); ++i) {
        const auto &r = cp.records[i];
        const auto again = compute_record(r.d, r.primes, r.l, opt);
        require(again == r, "scan: checkpoint record for d=" + std::to_string(r.d) + " does not recompute");
    }
    return cp;
}

}  // namespace detail

inline ScanResult scan(u64 N, i64 l, ScanOptions opt = {}, bool keep_records = true) {
    require(arith::supported_l(l), "scan: unsupported l=" + std::to_string(l));
    require(N <= max_scan_n, "scan: N exceeds 10^8");
    require(!opt.with_classgroup || N <= max_classgroup_n, "scan: class-group pass limited to N <= 10^5");
    require(opt.workers >= 1 && opt.workers <= 256, "scan: workers must lie in [1, 256]");
    require(opt.chunk >= 1, "scan: chunk must be positive");

    const json header = header_json(N, l, opt);
    ScanResult res;
    Aggregator agg;
    agg.set_n(N);
    std::string chain = chain_seed;
    std::ofstream out;
    u64 start = 2;

    if (!opt.checkpoint_path.empty()) {
        const bool have = opt.resume && std::filesystem::exists(opt.checkpoint_path);
        std::vector<std::string> keep;
        if (have) {
            auto cp = detail::load_checkpoint(opt.checkpoint_path, header, opt);
            keep = std::move(cp.lines);
            chain = cp.chain;
            res.resumed_records = cp.records.size();
            for (auto &r : cp.records) {
                agg.add(r);
                start = r.d + 1;
                if (keep_records) res.records.push_back(std::move(r));
            }
        }
        out.open(opt.checkpoint_path, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out), "scan: cannot write " + opt.checkpoint_path);
        if (keep.empty()) {
            chain = chain_seed;
            keep.push_back(chained_line(header, chain));
        }
        for (const auto &line : keep) out << line << '\n';
        out.flush();
        require(static_cast<bool>(out), "scan: write failed on " + opt.checkpoint_path);
    }

    std::vector<std::pair<u64, u64>> intervals;
    for (u64 lo = start; lo <= N; lo += opt.chunk) intervals.emplace_back(lo, std::min(N, lo + opt.chunk - 1));

    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::optional<std::vector<ScanRecord>>> slots(intervals.size());
    std::atomic<std::size_t> next{0};
    std::size_t written = 0;
    const std::size_t window = 4 * static_cast<std::size_t>(opt.workers);
    std::exception_ptr failure;
    bool abort = false;

    auto worker = [&] {
        while (true) {
            const std::size_t idx = next++;
            if (idx >= intervals.size()) return;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return abort || idx < written + window; });
                if (abort) return;
            }
            std::vector<ScanRecord> recs;
            try {
                for_each_family(intervals[idx].first, intervals[idx].second, l,
                                [&](u64 d, const std::vector<u64> &p) { recs.push_back(compute_record(d, p, l, opt)); });
            } catch (...) {
                std::lock_guard lk(mu);
                if (!failure) failure = std::current_exception();
                abort = true;
                cv.notify_all();
                return;
            }
            std::lock_guard lk(mu);
            slots[idx] = std::move(recs);
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    const std::size_t nthreads = std::min<std::size_t>(opt.workers, std::max<std::size_t>(intervals.size(), 1));
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);

    try {
        for (std::size_t idx = 0; idx < intervals.size(); ++idx) {
            std::vector<ScanRecord> recs;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return abort || slots[idx].has_value(); });
                if (abort) break;
                recs = std::move(*slots[idx]);
                slots[idx].reset();
            }
            std::string block;
            for (auto &r : recs) {
                agg.add(r);
                if (out.is_open()) {
                    block += chained_line(record_to_json(r), chain);
                    block += '\n';
                } else {
                    chained_line(record_to_json(r), chain);
                }
                if (keep_records) res.records.push_back(std::move(r));
            }
            if (out.is_open()) {
                out << block;
                out.flush();
                if (!out) {
                    std::lock_guard lk(mu);
                    abort = true;
                    cv.notify_all();
                    throw InputError("scan: write failed on " + opt.checkpoint_path);
                }
            }
            std::lock_guard lk(mu);
            written = idx + 1;
            cv.notify_all();
        }
    } catch (...) {
        {
            std::lock_guard lk(mu);
            abort = true;
            cv.notify_all();
        }
        for (auto &t : pool) t.join();
        throw;
    }
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    res.summary = agg.summary();
    res.summary.l = l;
    res.records_chain = chain;
    json sj = summary_to_json(res.summary, opt.with_classgroup);
    sj["records_chain"] = res.records_chain;
    const std::string line = chained_line(sj, chain);
    res.summary_chain = chain;
    if (out.is_open()) {
        out << line << '\n';
        out.flush();
        require(static_cast<bool>(out), "scan: write failed on " + opt.checkpoint_path);
        out.close();
        std::ofstream sf(opt.checkpoint_path + ".summary.json", std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(sf), "scan: cannot write summary file");
        sf << json::parse(line).dump(2) << '\n';
    }
    return res;
}

}  // namespace pell::scan
