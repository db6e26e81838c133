#ifndef SETBRANCH_STATE_HPP
#define SETBRANCH_STATE_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "setbranch/model.hpp"

namespace setbranch {

// Mutable search-time view of a Problem: current domains as bitsets over
// original-domain indices, an undo trail with level marks, dom/wdeg
// constraint weights and the run counters.
//
// A variable is assigned exactly when its current domain is a singleton;
// assignment and set branching are both domain reductions.
class SearchState {
public:
    using LevelToken = std::size_t;

    explicit SearchState(const Problem& problem) : problem_(&problem) {
        const std::size_t n = problem.num_variables();
        offsets_.resize(n + 1, 0);
        sizes_.resize(n, 0);
        for (std::size_t x = 0; x < n; ++x)
            offsets_[x + 1] = offsets_[x] + words_for(problem.domain(static_cast<VarId>(x)).size());
        bits_.assign(offsets_[n], 0);
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t d = problem.domain(static_cast<VarId>(x)).size();
            for (std::size_t i = 0; i < d; ++i) bits_[offsets_[x] + i / 64] |= std::uint64_t{1} << (i % 64);
            sizes_[x] = d;
        }
        weights_.assign(problem.num_constraints(), 1);
    }

    const Problem& problem() const { return *problem_; }
    std::size_t num_variables() const { return sizes_.size(); }

    // ---- domains ----------------------------------------------------------

    std::size_t size(VarId x) const { return sizes_[x]; }
    bool is_assigned(VarId x) const { return sizes_[x] == 1; }
    bool empty(VarId x) const { return sizes_[x] == 0; }

    std::span<const std::uint64_t> bits(VarId x) const {
        return std::span<const std::uint64_t>(bits_).subspan(offsets_[x], offsets_[x + 1] - offsets_[x]);
    }

    bool contains_index(VarId x, std::size_t i) const {
        return (bits_[offsets_[x] + i / 64] >> (i % 64)) & 1U;
    }

    bool contains(VarId x, Value v) const {
        const auto i = problem_->index_of(x, v);
        return i && contains_index(x, *i);
    }

    // Calls f(index) for every index in the current domain, ascending.
    template <typename F>
    void for_each_index(VarId x, F&& f) const {
        for (std::size_t w = offsets_[x]; w < offsets_[x + 1]; ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                const auto bit = static_cast<std::size_t>(std::countr_zero(word));
                f((w - offsets_[x]) * 64 + bit);
                word &= word - 1;
            }
        }
    }

    std::vector<Value> values(VarId x) const {
        std::vector<Value> out;
        out.reserve(sizes_[x]);
        const auto& d = problem_->domain(x);
        for_each_index(x, [&](std::size_t i) { out.push_back(d[i]); });
        return out;
    }

    // Smallest value; only meaningful for a non-empty domain.
    Value first_value(VarId x) const {
        std::size_t found = 0;
        for (std::size_t w = offsets_[x]; w < offsets_[x + 1]; ++w) {
            if (bits_[w]) {
                found = (w - offsets_[x]) * 64 + static_cast<std::size_t>(std::countr_zero(bits_[w]));
                break;
            }
        }
        return problem_->domain(x)[found];
    }

    bool remove_index(VarId x, std::size_t i) {
        std::uint64_t& word = bits_[offsets_[x] + i / 64];
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (!(word & mask)) return false;
        word &= ~mask;
        --sizes_[x];
        trail_.push_back({x, static_cast<std::uint32_t>(i)});
        return true;
    }

    // Removes v from D(x); returns whether it was present.
    bool remove_value(VarId x, Value v) {
        const auto i = problem_->index_of(x, v);
        return i && remove_index(x, *i);
    }

    // D(x) := D(x) ∩ keep. Returns true iff the result is empty.
    bool reduce_domain(VarId x, std::span<const Value> keep) {
        std::vector<std::uint64_t> mask(offsets_[x + 1] - offsets_[x], 0);
        for (Value v : keep)
            if (const auto i = problem_->index_of(x, v)) mask[*i / 64] |= std::uint64_t{1} << (*i % 64);
        for (std::size_t w = 0; w < mask.size(); ++w) {
            std::uint64_t drop = bits_[offsets_[x] + w] & ~mask[w];
            while (drop) {
                const auto bit = static_cast<std::size_t>(std::countr_zero(drop));
                remove_index(x, w * 64 + bit);
                drop &= drop - 1;
            }
        }
        return sizes_[x] == 0;
    }

    // ---- trail ------------------------------------------------------------

    // Marks the current trail position; undo_to(token) restores the domains
    // that held when the token was issued. A fresh state issues token 0.
    LevelToken push_level() {
        marks_.push_back(trail_.size());
        return marks_.size() - 1;
    }

    void undo_to(LevelToken token) {
        if (token >= marks_.size()) return;
        const std::size_t target = marks_[token];
        while (trail_.size() > target) {
            const auto [x, i] = trail_.back();
            trail_.pop_back();
            bits_[offsets_[x] + i / 64] |= std::uint64_t{1} << (i % 64);
            ++sizes_[x];
        }
        marks_.resize(token);
    }

    std::size_t level() const { return marks_.size(); }
    std::size_t trail_size() const { return trail_.size(); }

    // ---- weights and counters ----------------------------------------------

    std::uint64_t weight(ConstraintId c) const { return weights_[c]; }
    const std::vector<std::uint64_t>& weights() const { return weights_; }
    void bump_weight(ConstraintId c) { ++weights_[c]; }
    void set_weight(ConstraintId c, std::uint64_t w) { weights_[c] = w < 1 ? 1 : w; }

    struct Counters {
        std::uint64_t nodes = 0;
        std::uint64_t decisions = 0;
        std::uint64_t wipeouts = 0;
        std::uint64_t backtracks = 0;
    };

    Counters counters;

private:
    struct TrailEntry {
        VarId var;
        std::uint32_t index;
    };

    const Problem* problem_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> sizes_;
    std::vector<std::uint64_t> bits_;
    std::vector<TrailEntry> trail_;
    std::vector<std::size_t> marks_;
    std::vector<std::uint64_t> weights_;
};

}  // namespace setbranch

#endif
