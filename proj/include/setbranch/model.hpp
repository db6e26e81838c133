#ifndef SETBRANCH_MODEL_HPP
#define SETBRANCH_MODEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "setbranch/errors.hpp"
#include "setbranch/expr.hpp"

namespace setbranch {

using VarId = std::uint32_t;
using ConstraintId = std::uint32_t;
using Tuple = std::vector<Value>;

struct Variable {
    std::string name;
    std::vector<Value> domain;  // ascending, duplicate-free

    friend bool operator==(const Variable&, const Variable&) = default;
};

struct Extensional {
    bool allowed = true;        // false: the tuples are forbidden
    std::vector<Tuple> tuples;  // sorted, duplicate-free once inside a Problem

    friend bool operator==(const Extensional&, const Extensional&) = default;
};

struct Intensional {
    Expr expr;

    friend bool operator==(const Intensional&, const Intensional&) = default;
};

using Relation = std::variant<Extensional, Intensional>;

struct Constraint {
    ConstraintId id = 0;
    std::vector<VarId> scope;
    Relation relation;

    std::size_t arity() const { return scope.size(); }
    bool is_binary() const { return scope.size() == 2; }

    friend bool operator==(const Constraint& a, const Constraint& b) {
        return a.id == b.id && a.scope == b.scope && a.relation == b.relation;
    }
};

// Expression evaluation failures inside check_tuple are counted here; the
// first one per process is reported on std::clog.
inline std::atomic<std::uint64_t>& eval_error_count() {
    static std::atomic<std::uint64_t> count{0};
    return count;
}

inline void report_eval_error(const Constraint& c, const EvalError& err) {
    if (eval_error_count().fetch_add(1) == 0) {
        std::clog << "setbranch: constraint " << c.id << ": " << err.what()
                  << "; tuple treated as unsatisfying\n";
    }
}

// True iff `tuple` (one value per scope position) satisfies `c`.
inline bool check_tuple(const Constraint& c, std::span<const Value> tuple) {
    if (const auto* ext = std::get_if<Extensional>(&c.relation)) {
        const bool found = std::binary_search(
            ext->tuples.begin(), ext->tuples.end(), tuple,
            [](const auto& a, const auto& b) {
                return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
            });
        return found == ext->allowed;
    }
    const auto& in = std::get<Intensional>(c.relation);
    try {
        return eval(in.expr, tuple) != 0;
    } catch (const EvalError& err) {
        report_eval_error(c, err);
        return false;
    }
}

// Support bitsets for a binary constraint over original-domain indices.
// forward[i] is the set of indices j of scope[1] compatible with index i of
// scope[0]; backward is the transpose. Rows are word-aligned to the other
// variable's domain layout.
struct BinarySupport {
    std::size_t words0 = 0;
    std::size_t words1 = 0;
    std::vector<std::uint64_t> forward;
    std::vector<std::uint64_t> backward;

    std::span<const std::uint64_t> row(bool from_first, std::size_t index) const {
        return from_first ? std::span<const std::uint64_t>(forward).subspan(index * words1, words1)
                          : std::span<const std::uint64_t>(backward).subspan(index * words0, words0);
    }
};

inline std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

// Neighbor of a variable through binary constraints sharing exactly that pair.
struct BinaryNeighbor {
    VarId other = 0;
    std::vector<ConstraintId> constraints;
};

// Immutable problem. Construction validates and canonicalizes (extensional
// tuples sorted and deduplicated) and builds the lookup indexes used during
// search.
class Problem {
public:
    // Binary constraints over domains larger than this product are checked
    // tuple by tuple instead of through a precomputed support matrix.
    static constexpr std::size_t kMaxSupportMatrixCells = std::size_t{1} << 22;

    Problem() = default;

    Problem(std::vector<Variable> variables, std::vector<Constraint> constraints)
        : variables_(std::move(variables)), constraints_(std::move(constraints)) {
        validate();
        build_indexes();
    }

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(VarId x) const { return variables_[x]; }
    const std::vector<Value>& domain(VarId x) const { return variables_[x].domain; }
    const std::string& name(VarId x) const { return variables_[x].name; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const Constraint& constraint(ConstraintId c) const { return constraints_[c]; }

    // Constraint ids whose scope contains x, ascending.
    const std::vector<ConstraintId>& constraints_of(VarId x) const { return var_constraints_[x]; }
    const std::vector<BinaryNeighbor>& binary_neighbors(VarId x) const { return neighbors_[x]; }

    // Null when the constraint is not binary or its matrix would be too large.
    const BinarySupport* binary_support(ConstraintId c) const {
        return supports_[c] ? &*supports_[c] : nullptr;
    }

    // Position of v in the original domain of x.
    std::optional<std::size_t> index_of(VarId x, Value v) const {
        const auto& d = variables_[x].domain;
        if (contiguous_[x]) {
            if (v < d.front() || v > d.back()) return std::nullopt;
            return static_cast<std::size_t>(v - d.front());
        }
        auto it = std::lower_bound(d.begin(), d.end(), v);
        if (it == d.end() || *it != v) return std::nullopt;
        return static_cast<std::size_t>(it - d.begin());
    }

    std::optional<VarId> find_variable(std::string_view name) const {
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i].name == name) return static_cast<VarId>(i);
        return std::nullopt;
    }

    friend bool operator==(const Problem& a, const Problem& b) {
        return a.variables_ == b.variables_ && a.constraints_ == b.constraints_;
    }

private:
    void validate() {
        std::unordered_set<std::string> names;
        for (auto& v : variables_) {
            if (v.domain.empty()) throw ModelError("variable '" + v.name + "' has an empty domain");
            if (!names.insert(v.name).second) throw ModelError("duplicate variable '" + v.name + "'");
            std::sort(v.domain.begin(), v.domain.end());
            if (std::adjacent_find(v.domain.begin(), v.domain.end()) != v.domain.end())
                throw ModelError("variable '" + v.name + "' has duplicate domain values");
        }
        for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
            auto& c = constraints_[ci];
            c.id = static_cast<ConstraintId>(ci);
            if (c.scope.empty()) throw ModelError("constraint " + std::to_string(ci) + " has an empty scope");
            std::vector<std::string> scope_names;
            for (std::size_t i = 0; i < c.scope.size(); ++i) {
                if (c.scope[i] >= variables_.size())
                    throw ModelError("constraint " + std::to_string(ci) + " references an unknown variable");
                for (std::size_t j = 0; j < i; ++j)
                    if (c.scope[i] == c.scope[j])
                        throw ModelError("constraint " + std::to_string(ci) + " repeats a variable");
                scope_names.push_back(variables_[c.scope[i]].name);
            }
            if (auto* ext = std::get_if<Extensional>(&c.relation)) {
                for (const auto& t : ext->tuples) {
                    if (t.size() != c.scope.size())
                        throw ModelError("constraint " + std::to_string(ci) + " has a tuple of wrong arity");
                    for (std::size_t i = 0; i < t.size(); ++i) {
                        const auto& d = variables_[c.scope[i]].domain;
                        if (!std::binary_search(d.begin(), d.end(), t[i]))
                            throw ModelError("constraint " + std::to_string(ci) + ": tuple value " +
                                             std::to_string(t[i]) + " outside the domain of '" +
                                             scope_names[i] + "'");
                    }
                }
                std::sort(ext->tuples.begin(), ext->tuples.end());
                ext->tuples.erase(std::unique(ext->tuples.begin(), ext->tuples.end()), ext->tuples.end());
            } else {
                auto& in = std::get<Intensional>(c.relation);
                if (auto missing = bind_slots(in.expr, scope_names))
                    throw ModelError("constraint " + std::to_string(ci) + " references '" + *missing +
                                     "' outside its scope");
            }
        }
    }

    void build_indexes() {
        const std::size_t n = variables_.size();
        contiguous_.assign(n, false);
        for (std::size_t x = 0; x < n; ++x) {
            const auto& d = variables_[x].domain;
            contiguous_[x] =
                static_cast<std::uint64_t>(d.back()) - static_cast<std::uint64_t>(d.front()) + 1 == d.size();
        }
        var_constraints_.assign(n, {});
        neighbors_.assign(n, {});
        supports_.assign(constraints_.size(), std::nullopt);
        for (const auto& c : constraints_) {
            for (VarId x : c.scope) var_constraints_[x].push_back(c.id);
            if (!c.is_binary()) continue;
            for (int side = 0; side < 2; ++side) {
                const VarId x = c.scope[side];
                const VarId y = c.scope[1 - side];
                auto& list = neighbors_[x];
                auto it = std::find_if(list.begin(), list.end(), [&](const auto& nb) { return nb.other == y; });
                if (it == list.end()) {
                    list.push_back({y, {}});
                    it = std::prev(list.end());
                }
                it->constraints.push_back(c.id);
            }
            const std::size_t d0 = variables_[c.scope[0]].domain.size();
            const std::size_t d1 = variables_[c.scope[1]].domain.size();
            if (d0 * d1 <= kMaxSupportMatrixCells) supports_[c.id] = build_support(c);
        }
        for (auto& list : neighbors_)
            std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.other < b.other; });
    }

    BinarySupport build_support(const Constraint& c) const {
        const auto& d0 = variables_[c.scope[0]].domain;
        const auto& d1 = variables_[c.scope[1]].domain;
        BinarySupport s;
        s.words0 = words_for(d0.size());
        s.words1 = words_for(d1.size());
        s.forward.assign(d0.size() * s.words1, 0);
        s.backward.assign(d1.size() * s.words0, 0);
        Value pair[2];
        for (std::size_t i = 0; i < d0.size(); ++i) {
            pair[0] = d0[i];
            for (std::size_t j = 0; j < d1.size(); ++j) {
                pair[1] = d1[j];
                if (!check_tuple(c, pair)) continue;
                s.forward[i * s.words1 + j / 64] |= std::uint64_t{1} << (j % 64);
                s.backward[j * s.words0 + i / 64] |= std::uint64_t{1} << (i % 64);
            }
        }
        return s;
    }

    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::vector<bool> contiguous_;
    std::vector<std::vector<ConstraintId>> var_constraints_;
    std::vector<std::vector<BinaryNeighbor>> neighbors_;
    std::vector<std::optional<BinarySupport>> supports_;
};

}  // namespace setbranch

#endif
