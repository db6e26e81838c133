#ifndef SETBRANCH_CLI_HPP
#define SETBRANCH_CLI_HPP

#include <cctype>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setbranch/bench.hpp"
#include "setbranch/branching.hpp"
#include "setbranch/generators.hpp"
#include "setbranch/instance_io.hpp"
#include "setbranch/records.hpp"
#include "setbranch/search.hpp"
#include "setbranch/stats.hpp"

namespace setbranch {

inline constexpr const char* kCliGrammar =
    "usage:\n"
    "  setbranch gen   --family F --out FILE [--n N --d D --p1 K --p2 K --order O --holes H --edges E --k K "
    "--seed S]\n"
    "  setbranch solve --instance FILE --scheme SCHEME [--threshold 0.25] [--kmax 4] [--timeout-ms T] "
    "[--max-nodes N] [--seed S] [--trace FILE]\n"
    "  setbranch bench --manifest FILE --schemes s1,s2,... --out results.csv [--timeout-ms T] [--seed S] "
    "[--jobs J]\n"
    "  setbranch stats --results results.csv --baseline SCHEME [--ttest] [--categorize] [--speedups]\n"
    "families: pigeons langford randomb forced qwh coloring\n"
    "schemes:  dway 2way split ties-dway ties-2way clust-dway clust-2way\n";

namespace detail {

struct UsageError : Error {
    using Error::Error;
};

inline SchemeKind require_scheme(const std::string& name) {
    const auto k = parse_scheme(name);
    if (!k) throw UsageError("unknown scheme '" + name + "'");
    return *k;
}

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

inline Limits make_limits(std::optional<double> timeout_ms, std::optional<std::uint64_t> max_nodes) {
    Limits l;
    l.wall_time_ms = timeout_ms;
    l.max_nodes = max_nodes;
    return l;
}

}  // namespace detail

// Exit codes: 0 success, 1 usage error, 2 runtime error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Set branching CSP solver and benchmark harness", "setbranch"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "write a generated instance");
    std::string family;
    std::string gen_out;
    GenSpec spec;
    gen->add_option("--family", family)->required();
    gen->add_option("--out", gen_out)->required();
    gen->add_option("--n", spec.n);
    gen->add_option("--d", spec.d);
    gen->add_option("--p1", spec.p1);
    gen->add_option("--p2", spec.p2);
    gen->add_option("--order", spec.order);
    gen->add_option("--holes", spec.holes);
    gen->add_option("--edges", spec.edges);
    gen->add_option("--k", spec.k);
    gen->add_option("--seed", spec.seed);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
    std::string instance;
    std::string scheme_text;
    Scheme scheme;
    std::optional<double> timeout_ms;
    std::optional<std::uint64_t> max_nodes;
    std::uint64_t seed = 0;
    std::string trace_path;
    solve_cmd->add_option("--instance", instance)->required();
    solve_cmd->add_option("--scheme", scheme_text)->required();
    solve_cmd->add_option("--threshold", scheme.threshold_fraction)->check(CLI::Range(0.0, 1.0));
    solve_cmd->add_option("--kmax", scheme.kmax)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--timeout-ms", timeout_ms)->check(CLI::NonNegativeNumber);
    solve_cmd->add_option("--max-nodes", max_nodes);
    solve_cmd->add_option("--seed", seed);
    solve_cmd->add_option("--trace", trace_path);

    // bench
    auto* bench = app.add_subcommand("bench", "run every scheme on every manifest instance");
    std::string manifest;
    std::string schemes_text;
    std::string bench_out;
    std::optional<double> bench_timeout;
    std::uint64_t bench_seed = 0;
    unsigned jobs = 1;
    bench->add_option("--manifest", manifest)->required();
    bench->add_option("--schemes", schemes_text)->required();
    bench->add_option("--out", bench_out)->required();
    bench->add_option("--timeout-ms", bench_timeout)->check(CLI::NonNegativeNumber);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

    // stats
    auto* stats = app.add_subcommand("stats", "report on a results file");
    std::string results;
    std::string baseline;
    bool want_ttest = false;
    bool want_categorize = false;
    bool want_speedups = false;
    stats->add_option("--results", results)->required();
    stats->add_option("--baseline", baseline)->required();
    stats->add_flag("--ttest", want_ttest);
    stats->add_flag("--categorize", want_categorize);
    stats->add_flag("--speedups", want_speedups);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << kCliGrammar;
        return 1;
    }

    try {
        if (gen->parsed()) {
            const auto fam = parse_family(family);
            if (!fam) throw detail::UsageError("unknown family '" + family + "'");
            spec.family = *fam;
            std::optional<Problem> p;
            try {
                p.emplace(generate(spec));
            } catch (const ModelError& e) {
                throw detail::UsageError(e.what());
            }
            write_instance_file(*p, gen_out);
            out << "wrote " << gen_out << " (" << spec_name(spec) << ", " << p->num_variables() << " variables, "
                << p->num_constraints() << " constraints)\n";
            return 0;
        }

        if (solve_cmd->parsed()) {
            scheme.kind = detail::require_scheme(scheme_text);
            const Problem p = read_instance_file(instance);
            SolveOptions so;
            so.scheme = scheme;
            so.limits = detail::make_limits(timeout_ms, max_nodes);
            so.seed = seed;
            std::ofstream trace;
            if (!trace_path.empty()) {
                trace.open(trace_path, std::ios::binary);
                if (!trace) throw Error("cannot write " + trace_path);
                so.on_decision = [&](const Decision& d) { trace << format_decision(p, d) << '\n'; };
            }
            const Outcome o = solve(p, so);
            out << "status " << detail::upper(status_name(o.status)) << '\n';
            out << "nodes " << o.stats.nodes << '\n';
            out << "decisions " << o.stats.decisions << '\n';
            out << "backtracks " << o.stats.backtracks << '\n';
            out << "wipeouts " << o.stats.wipeouts << '\n';
            out << "time_ms " << detail::format_double(o.stats.elapsed_ms) << '\n';
            if (o.status == Status::Sat) {
                out << "solution";
                for (VarId x = 0; x < p.num_variables(); ++x) out << ' ' << p.name(x) << '=' << o.assignment[x];
                out << '\n';
            }
            return 0;
        }

        if (bench->parsed()) {
            BenchOptions bo;
            for (const auto& s : detail::split_commas(schemes_text)) {
                Scheme sc;
                sc.kind = detail::require_scheme(s);
                bo.schemes.push_back(sc);
            }
            if (bo.schemes.empty()) throw detail::UsageError("--schemes is empty");
            bo.limits = detail::make_limits(bench_timeout, std::nullopt);
            bo.seed = bench_seed;
            bo.jobs = jobs;
            const auto entries = read_manifest_file(manifest);
            std::ofstream csv(bench_out, std::ios::binary);
            if (!csv) throw Error("cannot write " + bench_out);
            write_csv_header(csv);
            std::size_t rows = 0;
            bo.on_record = [&](const RunRecord& r) {
                write_csv_row(csv, r);
                csv.flush();
                ++rows;
            };
            run_bench(entries, bo);
            if (!csv) throw Error("write failed for " + bench_out);
            out << "wrote " << rows << " rows to " << bench_out << '\n';
            return 0;
        }

        if (stats->parsed()) {
            detail::require_scheme(baseline);
            std::ifstream in(results, std::ios::binary);
            if (!in) throw Error("cannot read " + results);
            const auto records = read_csv(in);
            ReportSections sections;
            if (want_ttest || want_categorize || want_speedups) {
                sections.ttest = want_ttest;
                sections.categorize = want_categorize;
                sections.speedups = want_speedups;
            }
            out << format_report(records, baseline, sections);
            return 0;
        }
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << '\n' << kCliGrammar;
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << kCliGrammar;
    return 1;
}

}  // namespace setbranch

#endif
