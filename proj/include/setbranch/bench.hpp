#ifndef SETBRANCH_BENCH_HPP
#define SETBRANCH_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "setbranch/branching.hpp"
#include "setbranch/errors.hpp"
#include "setbranch/generators.hpp"
#include "setbranch/instance_io.hpp"
#include "setbranch/records.hpp"
#include "setbranch/search.hpp"

namespace setbranch {

// One manifest line: an instance file or an inline generator spec.
struct ManifestEntry {
    std::optional<std::filesystem::path> path;
    std::optional<GenSpec> spec;
    std::size_t line = 0;
};

// Lines are instance paths (relative to `base_dir`) or "gen FAMILY key=value
// ...". Blank lines and lines starting with '#' are skipped.
inline std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {}) {
    std::vector<ManifestEntry> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos || raw[b] == '#') continue;
        const auto e = raw.find_last_not_of(" \t\r");
        const std::string s = raw.substr(b, e - b + 1);
        ManifestEntry entry;
        entry.line = line;
        if (s.rfind("gen ", 0) == 0 || s.rfind("gen\t", 0) == 0) {
            try {
                entry.spec = parse_gen_spec(s.substr(4));
            } catch (const Error& err) {
                throw Error("manifest line " + std::to_string(line) + ": " + err.what());
            }
        } else {
            std::filesystem::path p(s);
            entry.path = p.is_absolute() ? p : base_dir / p;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

inline std::vector<ManifestEntry> read_manifest_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot read manifest " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), file.parent_path());
}

struct BenchInstance {
    std::string name;
    Problem problem;
};

// File instances are named by their stem, generated ones by spec_name.
inline BenchInstance load_entry(const ManifestEntry& e) {
    if (e.spec) return {spec_name(*e.spec), generate(*e.spec)};
    try {
        return {e.path->stem().string(), read_instance_file(e.path->string())};
    } catch (const ParseError& err) {
        throw Error(e.path->string() + ":" + err.what());
    }
}

struct BenchOptions {
    std::vector<Scheme> schemes;
    Limits limits;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    // Called once per record, in job order (instance-major, then scheme).
    std::function<void(const RunRecord&)> on_record;
};

inline RunRecord run_one(const BenchInstance& inst, const Scheme& scheme, const BenchOptions& opt) {
    SolveOptions so;
    so.scheme = scheme;
    so.limits = opt.limits;
    so.seed = opt.seed;
    const Outcome o = solve(inst.problem, so);
    RunRecord r;
    r.instance = inst.name;
    r.scheme = std::string(scheme_name(scheme.kind));
    r.status = o.status;
    r.nodes = o.stats.nodes;
    r.decisions = o.stats.decisions;
    r.wipeouts = o.stats.wipeouts;
    r.elapsed_ms = o.stats.elapsed_ms;
    r.seed = opt.seed;
    return r;
}

// Every (instance, scheme) pair is solved once. Runs execute on `jobs`
// threads; records come back in job order.
inline std::vector<RunRecord> run_bench(const std::vector<BenchInstance>& instances, const BenchOptions& opt) {
    const std::size_t total = instances.size() * opt.schemes.size();
    std::vector<std::optional<RunRecord>> slots(total);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t flushed = 0;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= total) return;
            {
                std::lock_guard lock(mu);
                if (failure) return;
            }
            try {
                RunRecord r = run_one(instances[job / opt.schemes.size()], opt.schemes[job % opt.schemes.size()], opt);
                std::lock_guard lock(mu);
                slots[job] = std::move(r);
                while (flushed < total && slots[flushed]) {
                    if (opt.on_record) opt.on_record(*slots[flushed]);
                    ++flushed;
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const unsigned n = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<RunRecord> out;
    out.reserve(total);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

inline std::vector<RunRecord> run_bench(const std::vector<ManifestEntry>& manifest, const BenchOptions& opt) {
    std::vector<BenchInstance> instances;
    for (const auto& e : manifest) instances.push_back(load_entry(e));
    return run_bench(instances, opt);
}

}  // namespace setbranch

#endif
