#ifndef SETBRANCH_TESTS_ORACLES_HPP
#define SETBRANCH_TESTS_ORACLES_HPP

// Independent reference implementations used by the tests. Nothing here
// calls the propagator, the heuristics or the clustering code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "setbranch/setbranch.hpp"

namespace oracle {

using setbranch::Problem;
using setbranch::Value;

// First solution in lexicographic order of original domain indices.
inline std::optional<std::vector<Value>> brute_force(const Problem& p) {
    const std::size_t n = p.num_variables();
    std::vector<std::size_t> idx(n, 0);
    std::vector<Value> a(n);
    std::vector<Value> tuple;
    for (;;) {
        for (std::size_t x = 0; x < n; ++x) a[x] = p.domain(static_cast<setbranch::VarId>(x))[idx[x]];
        bool ok = true;
        for (const auto& c : p.constraints()) {
            tuple.clear();
            for (auto x : c.scope) tuple.push_back(a[x]);
            if (!setbranch::check_tuple(c, tuple)) {
                ok = false;
                break;
            }
        }
        if (ok) return a;
        std::size_t k = 0;
        while (k < n) {
            if (++idx[k] < p.domain(static_cast<setbranch::VarId>(k)).size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == n) return std::nullopt;
    }
}

inline std::size_t count_solutions(const Problem& p) {
    const std::size_t n = p.num_variables();
    std::vector<std::size_t> idx(n, 0);
    std::vector<Value> tuple;
    std::size_t count = 0;
    for (;;) {
        bool ok = true;
        for (const auto& c : p.constraints()) {
            tuple.clear();
            for (auto x : c.scope) tuple.push_back(p.domain(x)[idx[x]]);
            if (!setbranch::check_tuple(c, tuple)) {
                ok = false;
                break;
            }
        }
        count += ok;
        std::size_t k = 0;
        while (k < n) {
            if (++idx[k] < p.domain(static_cast<setbranch::VarId>(k)).size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == n) return count;
    }
}

using Domains = std::vector<std::vector<Value>>;

inline Domains original_domains(const Problem& p) {
    Domains d;
    for (const auto& v : p.variables()) d.push_back(v.domain);
    return d;
}

// Does value v at scope position `pos` have a supporting tuple over `dom`?
inline bool has_support(const setbranch::Constraint& c, const Domains& dom, std::size_t pos, Value v) {
    const std::size_t k = c.scope.size();
    std::vector<std::size_t> idx(k, 0);
    std::vector<Value> t(k);
    for (std::size_t i = 0; i < k; ++i)
        if (i != pos && dom[c.scope[i]].empty()) return false;
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) t[i] = i == pos ? v : dom[c.scope[i]][idx[i]];
        if (setbranch::check_tuple(c, t)) return true;
        std::size_t i = 0;
        while (i < k) {
            if (i != pos && ++idx[i] < dom[c.scope[i]].size()) break;
            idx[i] = 0;
            ++i;
        }
        if (i == k) return false;
    }
}

// Naive GAC closure: sweep every (constraint, variable, value) until nothing
// changes. Returns nullopt when some domain empties.
inline std::optional<Domains> gac_closure(const Problem& p, Domains dom) {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& c : p.constraints()) {
            for (std::size_t pos = 0; pos < c.scope.size(); ++pos) {
                auto& d = dom[c.scope[pos]];
                std::vector<Value> keep;
                for (Value v : d)
                    if (has_support(c, dom, pos, v)) keep.push_back(v);
                if (keep.size() != d.size()) {
                    d = std::move(keep);
                    changed = true;
                    if (d.empty()) return std::nullopt;
                }
            }
        }
    }
    return dom;
}

inline Domains current_domains(const setbranch::SearchState& s) {
    Domains d;
    for (setbranch::VarId x = 0; x < s.num_variables(); ++x) d.push_back(s.values(x));
    return d;
}

// Small random problem mixing extensional allowed/forbidden tables, unary
// tables and intensional binary/ternary constraints.
inline Problem random_mixed(std::mt19937_64& rng, std::size_t max_n = 6, std::size_t max_d = 5) {
    using namespace setbranch;
    auto uni = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    const std::size_t n = uni(2, max_n);
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t d = uni(1, max_d);
        std::vector<Value> dom;
        if (uni(0, 3) == 0) {
            // sparse domain
            Value v = static_cast<Value>(uni(0, 3)) - 2;
            for (std::size_t j = 0; j < d; ++j) {
                dom.push_back(v);
                v += static_cast<Value>(uni(1, 3));
            }
        } else {
            for (std::size_t j = 0; j < d; ++j) dom.push_back(static_cast<Value>(j));
        }
        vars.push_back({"v" + std::to_string(i), dom});
    }
    std::vector<Constraint> cons;
    const std::size_t m = uni(1, 2 * n);
    for (std::size_t c = 0; c < m; ++c) {
        const std::size_t kind = uni(0, 5);
        std::vector<VarId> scope;
        const std::size_t arity = kind == 5 && n >= 3 ? 3 : (kind == 4 ? 1 : 2);
        while (scope.size() < arity) {
            const auto x = static_cast<VarId>(uni(0, n - 1));
            if (std::find(scope.begin(), scope.end(), x) == scope.end()) scope.push_back(x);
        }
        Constraint con;
        con.scope = scope;
        auto name = [&](std::size_t i) { return Expr::var(vars[scope[i]].name); };
        if (arity == 3) {
            con.relation = Intensional{Expr::binary(uni(0, 1) ? Op::Le : Op::Eq, Expr::binary(Op::Add, name(0), name(1)), name(2))};
        } else if (kind == 2 || kind == 3) {
            static const Op ops[] = {Op::Ne, Op::Lt, Op::Le, Op::Eq, Op::Gt};
            if (kind == 3)
                con.relation = Intensional{Expr::binary(Op::Le, Expr::binary(Op::Dist, name(0), name(1)),
                                                        Expr::number(static_cast<Value>(uni(0, 2))))};
            else
                con.relation = Intensional{Expr::binary(ops[uni(0, 4)], name(0), name(1))};
        } else {
            Extensional ext;
            ext.allowed = uni(0, 1) == 0;
            std::size_t total = 1;
            for (auto x : scope) total *= vars[x].domain.size();
            const std::size_t count = uni(0, total);
            for (std::size_t t = 0; t < count; ++t) {
                Tuple tuple;
                for (auto x : scope) tuple.push_back(vars[x].domain[uni(0, vars[x].domain.size() - 1)]);
                ext.tuples.push_back(tuple);
            }
            con.relation = std::move(ext);
        }
        cons.push_back(std::move(con));
    }
    return Problem(std::move(vars), std::move(cons));
}

// BIC of a contiguous partition of the sorted scores, computed from scratch.
inline double contiguous_bic(const std::vector<double>& sorted, const std::vector<std::size_t>& cuts) {
    const std::size_t n = sorted.size();
    std::vector<std::size_t> bounds{0};
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(n);
    const std::size_t k = bounds.size() - 1;
    double rss = 0;
    double loglik = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t a = bounds[j], b = bounds[j + 1];
        double mean = 0;
        for (std::size_t i = a; i < b; ++i) mean += sorted[i];
        mean /= static_cast<double>(b - a);
        for (std::size_t i = a; i < b; ++i) rss += (sorted[i] - mean) * (sorted[i] - mean);
        loglik += static_cast<double>(b - a) * std::log(static_cast<double>(b - a) / static_cast<double>(n));
    }
    double var = n > k ? rss / static_cast<double>(n - k) : 0;
    var = std::max(var, 1e-9);
    loglik += -0.5 * static_cast<double>(n) * std::log(2 * std::numbers::pi * var) - rss / (2 * var);
    return loglik - static_cast<double>(k) * std::log(static_cast<double>(n));
}

// Best BIC over every split of the sorted scores into at most kmax runs whose
// boundaries never separate equal scores.
inline double best_contiguous_bic(std::vector<double> scores, std::size_t kmax) {
    std::sort(scores.begin(), scores.end());
    std::vector<std::size_t> legal;  // cut positions between distinct neighbors
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] != scores[i - 1]) legal.push_back(i);
    double best = -INFINITY;
    std::vector<std::size_t> cuts;
    auto rec = [&](auto&& self, std::size_t from) -> void {
        best = std::max(best, contiguous_bic(scores, cuts));
        if (cuts.size() + 1 >= kmax) return;
        for (std::size_t i = from; i < legal.size(); ++i) {
            cuts.push_back(legal[i]);
            self(self, i + 1);
            cuts.pop_back();
        }
    };
    rec(rec, 0);
    return best;
}

struct TracedRun {
    setbranch::Outcome outcome;
    std::vector<std::string> trace;
};

inline TracedRun traced_solve(const Problem& p, const setbranch::Scheme& scheme, setbranch::Limits limits = {}) {
    TracedRun r;
    setbranch::SolveOptions o;
    o.scheme = scheme;
    o.limits = limits;
    o.on_decision = [&](const setbranch::Decision& d) { r.trace.push_back(setbranch::format_decision(p, d)); };
    r.outcome = setbranch::solve(p, o);
    return r;
}

inline setbranch::Scheme scheme_of(setbranch::SchemeKind k, double threshold = 0.25, std::size_t kmax = 4) {
    setbranch::Scheme s;
    s.kind = k;
    s.threshold_fraction = threshold;
    s.kmax = kmax;
    return s;
}

}  // namespace oracle

#endif
