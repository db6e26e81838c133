#ifndef SETBRANCH_STATS_HPP
#define SETBRANCH_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "setbranch/errors.hpp"
#include "setbranch/records.hpp"

namespace setbranch {

// Signed speedup: r = t_other / t_base, reported as r when r >= 1 and -1/r
// otherwise. Positive means the base run was faster.
inline double folded_ratio(double t_other, double t_base) {
    if (!(t_other > 0) || !(t_base > 0)) throw Error("folded_ratio: times must be positive");
    const double r = t_other / t_base;
    return r >= 1 ? r : -1 / r;
}

// ---- Student t ----------------------------------------------------------------

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double c = 1;
    double d = 1 - (a + b) * x / (a + 1);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((a + m2 - 1) * (a + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1));
        d = 1 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1) / (a + b + 2)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1 - front * detail::beta_continued_fraction(b, a, 1 - x) / b;
}

inline double student_t_cdf(double t, double nu) {
    const double tail = 0.5 * incomplete_beta(nu / 2, 0.5, nu / (nu + t * t));
    return t >= 0 ? 1 - tail : tail;
}

// Inverse CDF by bisection on the monotone CDF.
inline double student_t_quantile(double p, double nu) {
    if (!(p > 0 && p < 1) || !(nu > 0)) throw Error("student_t_quantile: bad arguments");
    if (p == 0.5) return 0;
    if (p < 0.5) return -student_t_quantile(1 - p, nu);
    double lo = 0;
    double hi = 1;
    while (student_t_cdf(hi, nu) < p) {
        lo = hi;
        hi *= 2;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
        const double mid = lo + (hi - lo) / 2;
        (student_t_cdf(mid, nu) < p ? lo : hi) = mid;
    }
    return lo + (hi - lo) / 2;
}

struct TTestReport {
    std::size_t n = 0;
    double mean = 0;
    double sd = 0;  // n - 1 denominator
    double t = 0;
    double t_crit = 0;  // 0.975 quantile, n - 1 degrees of freedom
    double ci_low = 0;
    double ci_high = 0;
};

// With sd = 0 the t value is 0 for a zero mean and +-infinity otherwise; the
// interval collapses to the mean.
inline TTestReport paired_ttest(std::span<const double> diffs) {
    if (diffs.size() < 2) throw Error("paired_ttest: need at least two differences");
    TTestReport r;
    r.n = diffs.size();
    const double n = static_cast<double>(r.n);
    double sum = 0;
    for (double d : diffs) sum += d;
    r.mean = sum / n;
    double ss = 0;
    for (double d : diffs) ss += (d - r.mean) * (d - r.mean);
    r.sd = std::sqrt(ss / (n - 1));
    r.t_crit = student_t_quantile(0.975, n - 1);
    const double se = r.sd / std::sqrt(n);
    if (se == 0) {
        r.t = r.mean == 0 ? 0 : std::copysign(std::numeric_limits<double>::infinity(), r.mean);
    } else {
        r.t = r.mean / se;
    }
    r.ci_low = r.mean - r.t_crit * se;
    r.ci_high = r.mean + r.t_crit * se;
    return r;
}

// ---- pairing records --------------------------------------------------------

// Time used in ratios; zero timings are floored.
inline double report_ms(const RunRecord& r) { return std::max(r.elapsed_ms, 1e-3); }

// Text before the first '-' of the instance name.
inline std::string instance_class(std::string_view instance) {
    return std::string(instance.substr(0, instance.find('-')));
}

struct RunPair {
    const RunRecord* base = nullptr;
    const RunRecord* other = nullptr;

    bool has_limit() const { return base->status == Status::Limit || other->status == Status::Limit; }
};

struct PairedRuns {
    std::vector<std::string> schemes;  // non-baseline schemes in first-seen order
    std::map<std::string, std::vector<RunPair>> pairs;
};

// Pairs every non-baseline row with the baseline row of the same
// (instance, seed).
inline PairedRuns pair_with_baseline(const std::vector<RunRecord>& records, std::string_view baseline) {
    std::map<std::pair<std::string, std::uint64_t>, const RunRecord*> base;
    for (const auto& r : records) {
        if (r.scheme != baseline) continue;
        if (!base.emplace(std::pair{r.instance, r.seed}, &r).second)
            throw Error("duplicate baseline row for " + r.instance);
    }
    if (base.empty()) throw Error("no rows for baseline scheme '" + std::string(baseline) + "'");
    PairedRuns out;
    for (const auto& r : records) {
        if (r.scheme == baseline) continue;
        const auto it = base.find({r.instance, r.seed});
        if (it == base.end()) throw Error("missing baseline row for " + r.instance);
        auto [slot, fresh] = out.pairs.try_emplace(r.scheme);
        if (fresh) out.schemes.push_back(r.scheme);
        slot->second.push_back({it->second, &r});
    }
    return out;
}

// ---- categorization -----------------------------------------------------------

// Buckets over g = folded_ratio(t_base, t_other): g > 1 means the scheme beat
// the baseline, "<k" rows count g < -k (scheme slower by more than k).
struct Categorization {
    std::size_t counted = 0;
    std::size_t excluded = 0;  // pairs with a limit on either side
    std::size_t faster[3] = {0, 0, 0};  // > 1, > 2, > 3
    std::size_t equal = 0;
    std::size_t slower[3] = {0, 0, 0};  // < 1, < 2, < 3

    double percent(std::size_t count) const {
        return counted == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(counted);
    }
};

inline Categorization categorize_pairs(std::span<const RunPair> pairs) {
    Categorization c;
    for (const auto& p : pairs) {
        if (p.has_limit()) {
            ++c.excluded;
            continue;
        }
        ++c.counted;
        const double g = folded_ratio(report_ms(*p.base), report_ms(*p.other));
        if (g == 1) ++c.equal;
        for (int k = 0; k < 3; ++k) {
            if (g > k + 1) ++c.faster[k];
            if (g < -(k + 1)) ++c.slower[k];
        }
    }
    return c;
}

inline std::map<std::string, Categorization> categorize(const std::vector<RunRecord>& records,
                                                        std::string_view base_scheme) {
    const auto paired = pair_with_baseline(records, base_scheme);
    std::map<std::string, Categorization> out;
    for (const auto& s : paired.schemes) out[s] = categorize_pairs(paired.pairs.at(s));
    return out;
}

// ---- speedups -----------------------------------------------------------------

struct SpeedupCell {
    std::size_t count = 0;
    double mean = 0;  // arithmetic mean of folded_ratio(t_scheme, t_base)
};

// Per instance class, per scheme. Limit runs take part with their elapsed time.
inline std::map<std::string, std::map<std::string, SpeedupCell>> speedups(const PairedRuns& paired) {
    std::map<std::string, std::map<std::string, SpeedupCell>> out;
    for (const auto& s : paired.schemes) {
        for (const auto& p : paired.pairs.at(s)) {
            auto& cell = out[instance_class(p.base->instance)][s];
            cell.mean += folded_ratio(report_ms(*p.other), report_ms(*p.base));
            ++cell.count;
        }
    }
    for (auto& [cls, row] : out)
        for (auto& [s, cell] : row) cell.mean /= static_cast<double>(cell.count);
    return out;
}

// Differences t_base - t_other over pairs where neither side hit a limit.
inline std::vector<double> paired_differences(std::span<const RunPair> pairs) {
    std::vector<double> d;
    for (const auto& p : pairs)
        if (!p.has_limit()) d.push_back(p.base->elapsed_ms - p.other->elapsed_ms);
    return d;
}

// ---- text report --------------------------------------------------------------

struct ReportSections {
    bool speedups = true;
    bool categorize = true;
    bool ttest = true;
};

namespace detail {

inline std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

inline std::string pad_right(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace detail

inline std::string format_report(const std::vector<RunRecord>& records, std::string_view baseline,
                                 ReportSections sections = {}) {
    const auto paired = pair_with_baseline(records, baseline);
    std::size_t width = 12;
    for (const auto& s : paired.schemes) width = std::max(width, s.size() + 2);
    std::string out;

    // Per-scheme totals, including the baseline.
    {
        std::vector<std::string> all{std::string(baseline)};
        all.insert(all.end(), paired.schemes.begin(), paired.schemes.end());
        out += "Runs\n";
        out += detail::pad_right("scheme", width);
        for (const char* h : {"runs", "sat", "unsat", "limit", "nodes", "time_ms"}) out += detail::pad(h, 12);
        out += '\n';
        for (const auto& s : all) {
            std::size_t runs = 0, sat = 0, unsat = 0, limit = 0;
            std::uint64_t nodes = 0;
            double ms = 0;
            for (const auto& r : records) {
                if (r.scheme != s) continue;
                ++runs;
                sat += r.status == Status::Sat;
                unsat += r.status == Status::Unsat;
                limit += r.status == Status::Limit;
                nodes += r.nodes;
                ms += r.elapsed_ms;
            }
            out += detail::pad_right(s, width);
            for (auto v : {runs, sat, unsat, limit}) out += detail::pad(std::to_string(v), 12);
            out += detail::pad(std::to_string(nodes), 12) + detail::pad(detail::fmt("%.1f", ms), 12) + '\n';
        }
    }

    if (sections.speedups) {
        const auto table = speedups(paired);
        out += "\nSpeedups of " + std::string(baseline) +
               " by class (mean folded ratio; positive: " + std::string(baseline) + " faster)\n";
        out += detail::pad_right("class", width);
        for (const auto& s : paired.schemes) out += detail::pad(s, width);
        out += '\n';
        for (const auto& [cls, row] : table) {
            out += detail::pad_right(cls, width);
            for (const auto& s : paired.schemes) {
                const auto it = row.find(s);
                out += detail::pad(it == row.end() ? "-" : detail::fmt("%.2f", it->second.mean), width);
            }
            out += '\n';
        }
    }

    if (sections.categorize) {
        out += "\nCategorization vs " + std::string(baseline) + " (% of instances; >k: scheme faster by more than k)\n";
        out += detail::pad_right("speedup", width);
        for (const auto& s : paired.schemes) out += detail::pad(s, width);
        out += '\n';
        std::vector<Categorization> cats;
        for (const auto& s : paired.schemes) cats.push_back(categorize_pairs(paired.pairs.at(s)));
        auto row = [&](const std::string& label, auto get) {
            out += detail::pad_right(label, width);
            for (const auto& c : cats) out += detail::pad(detail::fmt("%.0f%%", c.percent(get(c))), width);
            out += '\n';
        };
        for (int k = 0; k < 3; ++k) row(">" + std::to_string(k + 1), [k](const Categorization& c) { return c.faster[k]; });
        row("=1", [](const Categorization& c) { return c.equal; });
        for (int k = 0; k < 3; ++k) row("<" + std::to_string(k + 1), [k](const Categorization& c) { return c.slower[k]; });
        out += detail::pad_right("counted", width);
        for (const auto& c : cats) out += detail::pad(std::to_string(c.counted), width);
        out += '\n' + detail::pad_right("excluded", width);
        for (const auto& c : cats) out += detail::pad(std::to_string(c.excluded), width);
        out += '\n';
    }

    if (sections.ttest) {
        out += "\nPaired t-test, t(" + std::string(baseline) + ") - t(scheme) in ms, 95% CI\n";
        out += detail::pad_right("scheme", width);
        for (const char* h : {"n", "mean", "sd", "t", "ci_low", "ci_high"}) out += detail::pad(h, 12);
        out += '\n';
        for (const auto& s : paired.schemes) {
            const auto diffs = paired_differences(paired.pairs.at(s));
            out += detail::pad_right(s, width);
            if (diffs.size() < 2) {
                out += detail::pad(std::to_string(diffs.size()), 12) + "  too few commonly solved instances\n";
                continue;
            }
            const auto t = paired_ttest(diffs);
            out += detail::pad(std::to_string(t.n), 12);
            for (double v : {t.mean, t.sd}) out += detail::pad(detail::fmt("%.2f", v), 12);
            out += detail::pad(detail::fmt("%.3f", t.t), 12);
            for (double v : {t.ci_low, t.ci_high}) out += detail::pad(detail::fmt("%.2f", v), 12);
            out += '\n';
        }
    }
    return out;
}

}  // namespace setbranch

#endif
