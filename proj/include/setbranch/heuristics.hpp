#ifndef SETBRANCH_HEURISTICS_HPP
#define SETBRANCH_HEURISTICS_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "setbranch/model.hpp"
#include "setbranch/state.hpp"

namespace setbranch {

// Promise scores are products of per-neighbor counts. long double keeps
// products of up to 64 counts of at most 2^16 finite; anything larger
// saturates at kMaxScore.
using Score = long double;
inline constexpr Score kMaxScore = std::numeric_limits<Score>::max();

struct ScoredValue {
    Value value = 0;
    Score score = 0;

    friend bool operator==(const ScoredValue&, const ScoredValue&) = default;
};

// Sum of weights over constraints on x that involve another unassigned variable.
inline std::uint64_t wdeg(const SearchState& s, VarId x) {
    const Problem& p = s.problem();
    std::uint64_t total = 0;
    for (ConstraintId cid : p.constraints_of(x)) {
        for (VarId y : p.constraint(cid).scope) {
            if (y != x && !s.is_assigned(y)) {
                total += s.weight(cid);
                break;
            }
        }
    }
    return total;
}

// dom/wdeg: unassigned variable with the smallest |D(x)| / wdeg(x). A zero
// weighted degree counts as an infinite ratio; ties go to the smallest id.
// Returns nothing when every variable is assigned.
inline std::optional<VarId> select_variable(const SearchState& s) {
    std::optional<VarId> best;
    std::uint64_t best_size = 0;
    std::uint64_t best_wdeg = 0;
    for (VarId x = 0; x < s.num_variables(); ++x) {
        if (s.size(x) < 2) continue;
        const std::uint64_t size = s.size(x);
        const std::uint64_t w = wdeg(s, x);
        bool better = false;
        if (!best) {
            better = true;
        } else if (w == 0) {
            better = false;
        } else if (best_wdeg == 0) {
            better = true;
        } else {
            // size / w < best_size / best_wdeg
            better = static_cast<unsigned __int128>(size) * best_wdeg <
                     static_cast<unsigned __int128>(best_size) * w;
        }
        if (better) {
            best = x;
            best_size = size;
            best_wdeg = w;
        }
    }
    return best;
}

namespace detail {

// |{ b in D(y) : (x=a, y=b) satisfies every binary constraint on {x, y} }|
inline std::uint64_t compatible_count(const SearchState& s, VarId x, std::size_t a_index,
                                      const BinaryNeighbor& nb) {
    const Problem& p = s.problem();
    const auto dom_y = s.bits(nb.other);
    std::vector<std::uint64_t> acc(dom_y.begin(), dom_y.end());
    const Value a = p.domain(x)[a_index];
    for (ConstraintId cid : nb.constraints) {
        const Constraint& c = p.constraint(cid);
        const bool x_first = c.scope[0] == x;
        if (const BinarySupport* sup = p.binary_support(cid)) {
            const auto row = sup->row(x_first, a_index);
            for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= row[w];
        } else {
            const auto& dy = p.domain(nb.other);
            Value pair[2];
            pair[x_first ? 0 : 1] = a;
            for (std::size_t w = 0; w < acc.size(); ++w) {
                std::uint64_t word = acc[w];
                while (word) {
                    const auto bit = static_cast<std::size_t>(std::countr_zero(word));
                    word &= word - 1;
                    pair[x_first ? 1 : 0] = dy[w * 64 + bit];
                    if (!check_tuple(c, pair)) acc[w] &= ~(std::uint64_t{1} << bit);
                }
            }
        }
    }
    std::uint64_t count = 0;
    for (std::uint64_t w : acc) count += static_cast<std::uint64_t>(std::popcount(w));
    return count;
}

inline Score promise_at(const SearchState& s, VarId x, std::size_t a_index) {
    Score product = 1;
    for (const BinaryNeighbor& nb : s.problem().binary_neighbors(x)) {
        if (s.is_assigned(nb.other)) continue;
        const auto count = compatible_count(s, x, a_index, nb);
        if (count == 0) return 0;
        const Score factor = static_cast<Score>(count);
        product = product > kMaxScore / factor ? kMaxScore : product * factor;
    }
    return product;
}

}  // namespace detail

// Geelen's promise of x=a: product over unassigned binary neighbors y of the
// number of values of y compatible with a. Non-binary constraints contribute
// no factor; the empty product is 1.
inline ScoredValue promise(const SearchState& s, VarId x, Value a) {
    const auto idx = s.problem().index_of(x, a);
    if (!idx || !s.contains_index(x, *idx)) return {a, 0};
    return {a, detail::promise_at(s, x, *idx)};
}

// Current domain of x by descending promise, ties by ascending value.
inline std::vector<ScoredValue> score_domain(const SearchState& s, VarId x) {
    std::vector<ScoredValue> out;
    out.reserve(s.size(x));
    const auto& d = s.problem().domain(x);
    s.for_each_index(x, [&](std::size_t i) { out.push_back({d[i], detail::promise_at(s, x, i)}); });
    std::stable_sort(out.begin(), out.end(), [](const ScoredValue& a, const ScoredValue& b) { return a.score > b.score; });
    return out;
}

}  // namespace setbranch

#endif
