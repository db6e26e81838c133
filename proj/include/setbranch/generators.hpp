#ifndef SETBRANCH_GENERATORS_HPP
#define SETBRANCH_GENERATORS_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "setbranch/errors.hpp"
#include "setbranch/model.hpp"
#include "setbranch/prng.hpp"

// Seeded benchmark families. Every random draw goes through XorShift64Star
// in the order documented on each generator, so a spec always produces the
// same instance.

namespace setbranch {

namespace detail {

inline std::vector<Value> range_domain(Value lo, Value hi) {
    std::vector<Value> d;
    for (Value v = lo; v <= hi; ++v) d.push_back(v);
    return d;
}

inline Constraint intensional(std::vector<VarId> scope, Expr e) {
    Constraint c;
    c.scope = std::move(scope);
    c.relation = Intensional{std::move(e)};
    return c;
}

inline Constraint not_equal(const std::vector<Variable>& vars, VarId a, VarId b) {
    return intensional({a, b}, Expr::binary(Op::Ne, Expr::var(vars[a].name), Expr::var(vars[b].name)));
}

// All pairs (i, j), i < j, in lexicographic order.
inline std::vector<std::pair<VarId, VarId>> all_pairs(std::size_t n) {
    std::vector<std::pair<VarId, VarId>> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(static_cast<VarId>(i), static_cast<VarId>(j));
    return out;
}

inline std::vector<Variable> numbered(std::string_view prefix, std::size_t n, const std::vector<Value>& domain) {
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < n; ++i) vars.push_back({std::string(prefix) + std::to_string(i), domain});
    return vars;
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ModelError(what);
}

}  // namespace detail

// Pigeonhole: n pigeons, n-1 holes, pairwise ne. Unsatisfiable.
inline Problem gen_pigeons(std::size_t n) {
    detail::require(n >= 2, "pigeons: n must be at least 2");
    auto vars = detail::numbered("p", n, detail::range_domain(0, static_cast<Value>(n) - 2));
    std::vector<Constraint> cons;
    for (const auto& [a, b] : detail::all_pairs(n)) cons.push_back(detail::not_equal(vars, a, b));
    return Problem(std::move(vars), std::move(cons));
}

// Langford L(2, n): positions of the two copies of each i in 0..2n-1, second
// copy exactly i + 1 places after the first, all positions distinct.
// Satisfiable iff n mod 4 is 0 or 3.
inline Problem gen_langford(std::size_t n) {
    detail::require(n >= 2, "langford: n must be at least 2");
    const auto domain = detail::range_domain(0, 2 * static_cast<Value>(n) - 1);
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= n; ++i) {
        vars.push_back({"p" + std::to_string(i) + "_1", domain});
        vars.push_back({"p" + std::to_string(i) + "_2", domain});
    }
    std::vector<Constraint> cons;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto first = static_cast<VarId>(2 * (i - 1));
        const auto second = static_cast<VarId>(first + 1);
        cons.push_back(detail::intensional(
            {first, second},
            Expr::binary(Op::Eq, Expr::var(vars[second].name),
                         Expr::binary(Op::Add, Expr::var(vars[first].name), Expr::number(static_cast<Value>(i) + 1)))));
    }
    for (const auto& [a, b] : detail::all_pairs(vars.size())) cons.push_back(detail::not_equal(vars, a, b));
    return Problem(std::move(vars), std::move(cons));
}

// Model B with exact counts. Draw order: p1 pairs sampled from the
// lexicographic pair list, then sorted; then for each pair in that order, p2
// tuple indices t in 0..d^2-1 (tuple = (t / d, t mod d)).
inline Problem gen_randomb(std::size_t n, std::size_t d, std::size_t p1, std::size_t p2, std::uint64_t seed) {
    detail::require(n >= 2 && d >= 1, "randomb: need n >= 2 and d >= 1");
    detail::require(p1 > 0 && p1 <= n * (n - 1) / 2, "randomb: p1 must be in 1..n(n-1)/2");
    detail::require(p2 > 0 && p2 <= d * d, "randomb: p2 must be in 1..d^2");
    XorShift64Star rng(seed);
    auto vars = detail::numbered("x", n, detail::range_domain(0, static_cast<Value>(d) - 1));
    const auto pairs = detail::all_pairs(n);
    auto chosen = rng.sample(pairs.size(), p1);
    std::sort(chosen.begin(), chosen.end());
    std::vector<Constraint> cons;
    for (std::size_t pi : chosen) {
        Extensional ext{false, {}};
        for (std::size_t t : rng.sample(d * d, p2))
            ext.tuples.push_back({static_cast<Value>(t / d), static_cast<Value>(t % d)});
        Constraint c;
        c.scope = {pairs[pi].first, pairs[pi].second};
        c.relation = std::move(ext);
        cons.push_back(std::move(c));
    }
    return Problem(std::move(vars), std::move(cons));
}

struct PlantedInstance {
    Problem problem;
    std::vector<Value> solution;
};

// Model B around a planted solution. Draw order: n planted values, the pair
// sample as in gen_randomb, then per pair p2 indices into the d^2 - 1 tuples
// other than the planted one (ascending tuple order with the planted tuple
// skipped).
inline PlantedInstance gen_forced_planted(std::size_t n, std::size_t d, std::size_t p1, std::size_t p2,
                                          std::uint64_t seed) {
    detail::require(n >= 2 && d >= 1, "forced: need n >= 2 and d >= 1");
    detail::require(p1 > 0 && p1 <= n * (n - 1) / 2, "forced: p1 must be in 1..n(n-1)/2");
    detail::require(p2 > 0 && p2 + 1 <= d * d, "forced: p2 must be in 1..d^2-1");
    XorShift64Star rng(seed);
    std::vector<Value> planted(n);
    for (auto& v : planted) v = static_cast<Value>(rng.bounded(d));
    auto vars = detail::numbered("x", n, detail::range_domain(0, static_cast<Value>(d) - 1));
    const auto pairs = detail::all_pairs(n);
    auto chosen = rng.sample(pairs.size(), p1);
    std::sort(chosen.begin(), chosen.end());
    std::vector<Constraint> cons;
    for (std::size_t pi : chosen) {
        const auto [a, b] = pairs[pi];
        const auto skip = static_cast<std::size_t>(planted[a]) * d + static_cast<std::size_t>(planted[b]);
        Extensional ext{false, {}};
        for (std::size_t t : rng.sample(d * d - 1, p2)) {
            if (t >= skip) ++t;
            ext.tuples.push_back({static_cast<Value>(t / d), static_cast<Value>(t % d)});
        }
        Constraint c;
        c.scope = {a, b};
        c.relation = std::move(ext);
        cons.push_back(std::move(c));
    }
    return {Problem(std::move(vars), std::move(cons)), std::move(planted)};
}

inline Problem gen_forced(std::size_t n, std::size_t d, std::size_t p1, std::size_t p2, std::uint64_t seed) {
    return gen_forced_planted(n, d, p1, p2, seed).problem;
}

// Quasigroup with holes. Square L(i,j) = sym[(row[i] + col[j]) mod order]
// from three shuffled permutations (rows, then columns, then symbols), then
// `holes` cells sampled from the row-major cell list. Every cell is a
// variable; a filled cell has the singleton domain {L(i,j)} and a unary
// allowed constraint. Rows and columns are pairwise ne.
inline PlantedInstance gen_qwh_planted(std::size_t order, std::size_t holes, std::uint64_t seed) {
    detail::require(order >= 2, "qwh: order must be at least 2");
    detail::require(holes <= order * order, "qwh: holes must be at most order^2");
    XorShift64Star rng(seed);
    auto perm = [&] {
        std::vector<std::size_t> p(order);
        for (std::size_t i = 0; i < order; ++i) p[i] = i;
        rng.shuffle(p);
        return p;
    };
    const auto row = perm();
    const auto col = perm();
    const auto sym = perm();
    std::vector<Value> square(order * order);
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = 0; j < order; ++j)
            square[i * order + j] = static_cast<Value>(sym[(row[i] + col[j]) % order]);
    std::vector<bool> blank(order * order, false);
    for (std::size_t cell : rng.sample(order * order, holes)) blank[cell] = true;

    const auto full = detail::range_domain(0, static_cast<Value>(order) - 1);
    std::vector<Variable> vars;
    std::vector<Constraint> cons;
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = 0; j < order; ++j) {
            const std::size_t cell = i * order + j;
            std::string name = "c" + std::to_string(i) + "_" + std::to_string(j);
            if (blank[cell]) {
                vars.push_back({std::move(name), full});
            } else {
                vars.push_back({std::move(name), {square[cell]}});
                Constraint c;
                c.scope = {static_cast<VarId>(cell)};
                c.relation = Extensional{true, {{square[cell]}}};
                cons.push_back(std::move(c));
            }
        }
    }
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t a = 0; a < order; ++a) {
            for (std::size_t b = a + 1; b < order; ++b) {
                cons.push_back(detail::not_equal(vars, static_cast<VarId>(i * order + a), static_cast<VarId>(i * order + b)));
                cons.push_back(detail::not_equal(vars, static_cast<VarId>(a * order + i), static_cast<VarId>(b * order + i)));
            }
        }
    }
    return {Problem(std::move(vars), std::move(cons)), std::move(square)};
}

inline Problem gen_qwh(std::size_t order, std::size_t holes, std::uint64_t seed) {
    return gen_qwh_planted(order, holes, seed).problem;
}

// Random simple graph (edge_count pairs sampled from the lexicographic pair
// list, then sorted), k colors, ne per edge.
inline Problem gen_coloring(std::size_t n, std::size_t edge_count, std::size_t k, std::uint64_t seed) {
    detail::require(n >= 1 && k >= 1, "coloring: need n >= 1 and k >= 1");
    detail::require(edge_count <= n * (n - 1) / 2, "coloring: too many edges");
    XorShift64Star rng(seed);
    auto vars = detail::numbered("v", n, detail::range_domain(0, static_cast<Value>(k) - 1));
    const auto pairs = detail::all_pairs(n);
    auto chosen = rng.sample(pairs.size(), edge_count);
    std::sort(chosen.begin(), chosen.end());
    std::vector<Constraint> cons;
    for (std::size_t pi : chosen) cons.push_back(detail::not_equal(vars, pairs[pi].first, pairs[pi].second));
    return Problem(std::move(vars), std::move(cons));
}

// ---- generator specs --------------------------------------------------------

enum class Family { Pigeons, Langford, RandomB, Forced, Qwh, Coloring };

inline constexpr std::pair<Family, std::string_view> kFamilyNames[] = {
    {Family::Pigeons, "pigeons"}, {Family::Langford, "langford"}, {Family::RandomB, "randomb"},
    {Family::Forced, "forced"},   {Family::Qwh, "qwh"},           {Family::Coloring, "coloring"},
};

inline std::optional<Family> parse_family(std::string_view s) {
    for (const auto& [f, name] : kFamilyNames)
        if (name == s) return f;
    return std::nullopt;
}

inline std::string_view family_name(Family f) {
    for (const auto& [fam, name] : kFamilyNames)
        if (fam == f) return name;
    return {};
}

struct GenSpec {
    Family family = Family::Pigeons;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t p1 = 0;
    std::size_t p2 = 0;
    std::size_t order = 0;
    std::size_t holes = 0;
    std::size_t edges = 0;
    std::size_t k = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

inline Problem generate(const GenSpec& g) {
    switch (g.family) {
        case Family::Pigeons: return gen_pigeons(g.n);
        case Family::Langford: return gen_langford(g.n);
        case Family::RandomB: return gen_randomb(g.n, g.d, g.p1, g.p2, g.seed);
        case Family::Forced: return gen_forced(g.n, g.d, g.p1, g.p2, g.seed);
        case Family::Qwh: return gen_qwh(g.order, g.holes, g.seed);
        case Family::Coloring: return gen_coloring(g.n, g.edges, g.k, g.seed);
    }
    throw ModelError("unknown family");
}

// Canonical instance name, "<family>-<params>". The text before the first
// '-' is the instance class used by the statistics reports.
inline std::string spec_name(const GenSpec& g) {
    std::string s(family_name(g.family));
    auto add = [&](std::string_view key, std::uint64_t v) { s += "-" + std::string(key) + std::to_string(v); };
    switch (g.family) {
        case Family::Pigeons:
        case Family::Langford: add("n", g.n); break;
        case Family::RandomB:
        case Family::Forced:
            add("n", g.n);
            add("d", g.d);
            add("p", g.p1);
            add("t", g.p2);
            add("s", g.seed);
            break;
        case Family::Qwh:
            add("o", g.order);
            add("h", g.holes);
            add("s", g.seed);
            break;
        case Family::Coloring:
            add("n", g.n);
            add("e", g.edges);
            add("k", g.k);
            add("s", g.seed);
            break;
    }
    return s;
}

// Parses "FAMILY key=value ..." with keys n, d, p1, p2, order, holes,
// edges, k, seed.
inline GenSpec parse_gen_spec(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word;
    if (!(in >> word)) throw Error("empty generator spec");
    const auto fam = parse_family(word);
    if (!fam) throw Error("unknown family '" + word + "'");
    GenSpec g;
    g.family = *fam;
    while (in >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) throw Error("expected key=value, found '" + word + "'");
        const std::string key = word.substr(0, eq);
        const std::string val = word.substr(eq + 1);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc() || ptr != val.data() + val.size()) throw Error("bad number in '" + word + "'");
        if (key == "n") g.n = v;
        else if (key == "d") g.d = v;
        else if (key == "p1") g.p1 = v;
        else if (key == "p2") g.p2 = v;
        else if (key == "order") g.order = v;
        else if (key == "holes") g.holes = v;
        else if (key == "edges") g.edges = v;
        else if (key == "k") g.k = v;
        else if (key == "seed") g.seed = v;
        else throw Error("unknown generator parameter '" + key + "'");
    }
    return g;
}

}  // namespace setbranch

#endif
