#ifndef SETBRANCH_BRANCHING_HPP
#define SETBRANCH_BRANCHING_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setbranch/clustering.hpp"
#include "setbranch/heuristics.hpp"
#include "setbranch/state.hpp"

namespace setbranch {

enum class SchemeKind { DWay, TwoWay, DomainSplit, TiesDWay, TiesTwoWay, ClustDWay, ClustTwoWay };

inline constexpr std::array<std::pair<SchemeKind, std::string_view>, 7> kSchemeNames{{
    {SchemeKind::DWay, "dway"},
    {SchemeKind::TwoWay, "2way"},
    {SchemeKind::DomainSplit, "split"},
    {SchemeKind::TiesDWay, "ties-dway"},
    {SchemeKind::TiesTwoWay, "ties-2way"},
    {SchemeKind::ClustDWay, "clust-dway"},
    {SchemeKind::ClustTwoWay, "clust-2way"},
}};

inline std::string_view scheme_name(SchemeKind k) {
    for (const auto& [kind, name] : kSchemeNames)
        if (kind == k) return name;
    return {};
}

inline std::optional<SchemeKind> parse_scheme(std::string_view name) {
    for (const auto& [kind, text] : kSchemeNames)
        if (text == name) return kind;
    return std::nullopt;
}

struct Scheme {
    SchemeKind kind = SchemeKind::TwoWay;
    double threshold_fraction = 0.25;  // set/split construction only when |D| > fraction * |D0|
    std::size_t kmax = 4;              // clustering kinds only
};

enum class BranchStyle { Enumerated, Binary };

// Enumerated: branch i reduces D(x) to sets[i] from the choice-point domain.
// Binary: left reduces D(x) to sets[0], right removes sets[0] from D(x).
struct BranchPlan {
    BranchStyle style = BranchStyle::Enumerated;
    VarId variable = 0;
    std::vector<std::vector<Value>> sets;  // each set ascending

    friend bool operator==(const BranchPlan&, const BranchPlan&) = default;
};

inline bool is_binary_style(SchemeKind k) {
    return k == SchemeKind::TwoWay || k == SchemeKind::DomainSplit || k == SchemeKind::TiesTwoWay ||
           k == SchemeKind::ClustTwoWay;
}

// Whether the set/split construction applies to a domain of this size.
inline bool passes_threshold(const Scheme& scheme, std::size_t current_size, std::size_t original_size) {
    return static_cast<double>(current_size) > scheme.threshold_fraction * static_cast<double>(original_size);
}

namespace detail {

inline std::vector<Value> sorted_set(std::vector<Value> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline BranchPlan dway_plan(VarId x, std::span<const ScoredValue> scored) {
    BranchPlan p{BranchStyle::Enumerated, x, {}};
    for (const auto& sv : scored) p.sets.push_back({sv.value});
    return p;
}

inline BranchPlan twoway_plan(VarId x, std::span<const ScoredValue> scored) {
    return BranchPlan{BranchStyle::Binary, x, {{scored.front().value}}};
}

inline BranchPlan base_plan(SchemeKind kind, VarId x, std::span<const ScoredValue> scored) {
    return is_binary_style(kind) ? twoway_plan(x, scored) : dway_plan(x, scored);
}

inline BranchPlan from_partition(SchemeKind kind, VarId x, std::vector<std::vector<Value>> partition) {
    BranchPlan p{is_binary_style(kind) ? BranchStyle::Binary : BranchStyle::Enumerated, x, {}};
    for (auto& s : partition) p.sets.push_back(sorted_set(std::move(s)));
    if (p.style == BranchStyle::Binary) p.sets.resize(1);
    return p;
}

}  // namespace detail

// Partition of promise-ordered values into runs of exactly equal score.
inline std::vector<std::vector<Value>> ties_partition(std::span<const ScoredValue> scored) {
    std::vector<std::vector<Value>> out;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (i == 0 || scored[i].score != scored[i - 1].score) out.emplace_back();
        out.back().push_back(scored[i].value);
    }
    return out;
}

// Clusters of the scores, highest mean first. Scores beyond double range
// saturate at the largest double.
inline std::vector<std::vector<Value>> cluster_partition(std::span<const ScoredValue> scored, std::size_t kmax) {
    std::vector<double> scores;
    scores.reserve(scored.size());
    for (const auto& sv : scored) {
        const Score s = std::min<Score>(sv.score, std::numeric_limits<double>::max());
        scores.push_back(static_cast<double>(s));
    }
    XMeansOptions opts;
    opts.kmax = kmax;
    const Clustering c = xmeans(scores, opts);
    std::vector<std::vector<Value>> out;
    for (const auto& cluster : c.clusters) {
        out.emplace_back();
        for (std::size_t i : cluster) out.back().push_back(scored[i].value);
    }
    return out;
}

// Plan from an already scored domain (descending promise, ties ascending
// value). Set kinds fall back to their base scheme when the threshold fails
// or the partition has one set or only singletons; domain splitting falls
// back to 2-way.
inline BranchPlan plan_from_scores(const Scheme& scheme, VarId x, std::span<const ScoredValue> scored,
                                   std::size_t original_size) {
    const std::size_t size = scored.size();
    switch (scheme.kind) {
        case SchemeKind::DWay: return detail::dway_plan(x, scored);
        case SchemeKind::TwoWay: return detail::twoway_plan(x, scored);
        case SchemeKind::DomainSplit: {
            if (size < 2 || !passes_threshold(scheme, size, original_size)) return detail::twoway_plan(x, scored);
            std::vector<Value> top;
            for (std::size_t i = 0; i < (size + 1) / 2; ++i) top.push_back(scored[i].value);
            return BranchPlan{BranchStyle::Binary, x, {detail::sorted_set(std::move(top))}};
        }
        case SchemeKind::TiesDWay:
        case SchemeKind::TiesTwoWay:
        case SchemeKind::ClustDWay:
        case SchemeKind::ClustTwoWay: {
            if (!passes_threshold(scheme, size, original_size)) return detail::base_plan(scheme.kind, x, scored);
            const bool ties = scheme.kind == SchemeKind::TiesDWay || scheme.kind == SchemeKind::TiesTwoWay;
            auto partition = ties ? ties_partition(scored) : cluster_partition(scored, scheme.kmax);
            if (partition.size() <= 1 || partition.size() == size) return detail::base_plan(scheme.kind, x, scored);
            return detail::from_partition(scheme.kind, x, std::move(partition));
        }
    }
    return detail::dway_plan(x, scored);
}

// Scores D(x) once and builds the plan for `scheme`.
inline BranchPlan plan(const Scheme& scheme, const SearchState& s, VarId x) {
    const auto scored = score_domain(s, x);
    return plan_from_scores(scheme, x, scored, s.problem().domain(x).size());
}

}  // namespace setbranch

#endif
