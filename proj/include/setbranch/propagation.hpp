#ifndef SETBRANCH_PROPAGATION_HPP
#define SETBRANCH_PROPAGATION_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "setbranch/model.hpp"
#include "setbranch/state.hpp"

namespace setbranch {

struct Arc {
    ConstraintId constraint;
    VarId variable;

    friend bool operator==(const Arc&, const Arc&) = default;
};

struct PropagationResult {
    enum class Status { Consistent, Wipeout };

    Status status = Status::Consistent;
    VarId variable = 0;          // emptied variable on wipeout
    ConstraintId constraint = 0; // constraint whose revision emptied it
    std::uint64_t removed = 0;   // values deleted during this call

    bool consistent() const { return status == Status::Consistent; }
};

namespace detail {

// Calls f(tuple) over the Cartesian product of the current domains of the
// scope, with position `fixed` held at `value`, in ascending lexicographic
// order. Stops when f returns true; returns whether it did.
template <typename F>
bool any_tuple(const SearchState& s, const Constraint& c, std::size_t fixed, Value value, F&& f) {
    const std::size_t k = c.scope.size();
    std::vector<std::vector<Value>> lists(k);
    for (std::size_t p = 0; p < k; ++p) {
        if (p == fixed) {
            lists[p] = {value};
        } else {
            lists[p] = s.values(c.scope[p]);
            if (lists[p].empty()) return false;
        }
    }
    std::vector<std::size_t> pos(k, 0);
    std::vector<Value> tuple(k);
    for (;;) {
        for (std::size_t p = 0; p < k; ++p) tuple[p] = lists[p][pos[p]];
        if (f(std::span<const Value>(tuple))) return true;
        std::size_t p = k;
        while (p > 0) {
            --p;
            if (++pos[p] < lists[p].size()) break;
            pos[p] = 0;
            if (p == 0) return false;
        }
    }
}

inline bool intersects(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    for (std::size_t w = 0; w < a.size(); ++w)
        if (a[w] & b[w]) return true;
    return false;
}

}  // namespace detail

// Deletes from D(x) every value without a support in `c` over the current
// domains of the rest of the scope. Returns whether anything was deleted.
inline bool revise(SearchState& s, const Constraint& c, VarId x) {
    const Problem& problem = s.problem();
    const std::size_t fixed = static_cast<std::size_t>(std::find(c.scope.begin(), c.scope.end(), x) - c.scope.begin());
    bool changed = false;

    if (const BinarySupport* sup = problem.binary_support(c.id)) {
        const VarId y = c.scope[1 - fixed];
        const auto other = s.bits(y);
        std::vector<std::size_t> drop;
        s.for_each_index(x, [&](std::size_t i) {
            if (!detail::intersects(sup->row(fixed == 0, i), other)) drop.push_back(i);
        });
        for (std::size_t i : drop) changed |= s.remove_index(x, i);
        return changed;
    }

    const auto& dx = problem.domain(x);
    const auto* ext = std::get_if<Extensional>(&c.relation);
    if (ext && ext->allowed) {
        std::vector<bool> supported(dx.size(), false);
        for (const auto& t : ext->tuples) {
            bool alive = true;
            for (std::size_t p = 0; p < t.size() && alive; ++p) alive = s.contains(c.scope[p], t[p]);
            if (alive) supported[*problem.index_of(x, t[fixed])] = true;
        }
        std::vector<std::size_t> drop;
        s.for_each_index(x, [&](std::size_t i) {
            if (!supported[i]) drop.push_back(i);
        });
        for (std::size_t i : drop) changed |= s.remove_index(x, i);
        return changed;
    }

    std::vector<std::size_t> drop;
    s.for_each_index(x, [&](std::size_t i) {
        const bool ok = detail::any_tuple(s, c, fixed, dx[i], [&](std::span<const Value> t) { return check_tuple(c, t); });
        if (!ok) drop.push_back(i);
    });
    for (std::size_t i : drop) changed |= s.remove_index(x, i);
    return changed;
}

// AC-3 arc queue over one problem. FIFO with deduplication; keeps its buffers
// between calls.
class Propagator {
public:
    explicit Propagator(const Problem& problem) : problem_(&problem) {
        offsets_.resize(problem.num_constraints() + 1, 0);
        by_var_.resize(problem.num_constraints());
        for (const auto& c : problem.constraints()) {
            offsets_[c.id + 1] = offsets_[c.id] + c.scope.size();
            auto& order = by_var_[c.id];
            order.resize(c.scope.size());
            for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c.scope[a] < c.scope[b]; });
        }
        queued_.assign(offsets_.back(), false);
    }

    // Every arc (c, x) with x in scope(c), ascending by (constraint, variable).
    std::vector<Arc> all_arcs() const {
        std::vector<Arc> arcs;
        for (const auto& c : problem_->constraints())
            for (std::size_t p : by_var_[c.id]) arcs.push_back({c.id, c.scope[p]});
        return arcs;
    }

    // Arcs (c, y) for every constraint c on x and every other y in scope(c),
    // ascending by (constraint, variable).
    std::vector<Arc> arcs_touching(VarId x) const {
        std::vector<Arc> arcs;
        for (ConstraintId cid : problem_->constraints_of(x)) {
            const auto& c = problem_->constraint(cid);
            for (std::size_t p : by_var_[cid])
                if (c.scope[p] != x) arcs.push_back({cid, c.scope[p]});
        }
        return arcs;
    }

    PropagationResult propagate(SearchState& s, std::span<const Arc> seeds) {
        PropagationResult result;
        for (const Arc& a : seeds) enqueue(a.constraint, a.variable);
        const std::size_t before = s.trail_size();
        while (!queue_.empty()) {
            const auto [cid, x] = pop();
            const auto& c = problem_->constraint(cid);
            if (!revise(s, c, x)) continue;
            if (s.empty(x)) {
                s.bump_weight(cid);
                ++s.counters.wipeouts;
                clear();
                result.status = PropagationResult::Status::Wipeout;
                result.variable = x;
                result.constraint = cid;
                result.removed = s.trail_size() - before;
                return result;
            }
            for (ConstraintId other : problem_->constraints_of(x)) {
                if (other == cid && c.is_binary()) continue;
                const auto& oc = problem_->constraint(other);
                for (std::size_t p : by_var_[other])
                    if (oc.scope[p] != x) enqueue(other, oc.scope[p]);
            }
        }
        result.removed = s.trail_size() - before;
        return result;
    }

    PropagationResult propagate_all(SearchState& s) {
        const auto arcs = all_arcs();
        return propagate(s, arcs);
    }

private:
    std::size_t arc_index(ConstraintId c, VarId x) const {
        const auto& scope = problem_->constraint(c).scope;
        return offsets_[c] + static_cast<std::size_t>(std::find(scope.begin(), scope.end(), x) - scope.begin());
    }

    void enqueue(ConstraintId c, VarId x) {
        const std::size_t idx = arc_index(c, x);
        if (queued_[idx]) return;
        queued_[idx] = true;
        queue_.push_back({c, x});
    }

    Arc pop() {
        const Arc a = queue_.front();
        queue_.pop_front();
        queued_[arc_index(a.constraint, a.variable)] = false;
        return a;
    }

    void clear() {
        for (const Arc& a : queue_) queued_[arc_index(a.constraint, a.variable)] = false;
        queue_.clear();
    }

    const Problem* problem_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::size_t>> by_var_;
    std::vector<bool> queued_;
    std::deque<Arc> queue_;
};

// Fixpoint of revise from `seeds`. On a wipeout the emptying constraint's
// weight goes up by one and propagation stops.
inline PropagationResult propagate(SearchState& s, std::span<const Arc> seeds) {
    Propagator p(s.problem());
    return p.propagate(s, seeds);
}

// Full arc queue from a fresh state.
inline PropagationResult establish_root_gac(SearchState& s) {
    Propagator p(s.problem());
    return p.propagate_all(s);
}

}  // namespace setbranch

#endif
