#ifndef SETBRANCH_SEARCH_HPP
#define SETBRANCH_SEARCH_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "setbranch/branching.hpp"
#include "setbranch/heuristics.hpp"
#include "setbranch/model.hpp"
#include "setbranch/propagation.hpp"
#include "setbranch/state.hpp"

namespace setbranch {

struct Limits {
    std::optional<double> wall_time_ms;
    std::optional<std::uint64_t> max_nodes;
};

enum class Status { Sat, Unsat, Limit };

inline std::string_view status_name(Status s) {
    switch (s) {
        case Status::Sat: return "sat";
        case Status::Unsat: return "unsat";
        case Status::Limit: return "limit";
    }
    return {};
}

inline std::optional<Status> parse_status(std::string_view s) {
    if (s == "sat") return Status::Sat;
    if (s == "unsat") return Status::Unsat;
    if (s == "limit") return Status::Limit;
    return std::nullopt;
}

struct RunStats {
    std::uint64_t nodes = 0;       // applied and propagated decisions
    std::uint64_t decisions = 0;   // choice points opened
    std::uint64_t backtracks = 0;  // choice points exhausted without a solution
    std::uint64_t wipeouts = 0;
    std::uint64_t tied_choice_points = 0;  // choice points whose scores had a tie
    std::uint64_t set_choice_points = 0;   // choice points branching on a non-singleton set
    double elapsed_ms = 0;
};

// One applied decision. kind: 'L' reduce to the set, 'R' remove the set,
// 'E' reduce to set `index` of an enumerated plan.
struct Decision {
    std::size_t level = 0;
    VarId variable = 0;
    std::vector<Value> values;
    char kind = 'E';
    std::size_t index = 0;
};

// "LEVEL VAR {VALUES} L|R|E#i"
inline std::string format_decision(const Problem& p, const Decision& d) {
    std::string s = std::to_string(d.level) + " " + p.name(d.variable) + " {";
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(d.values[i]);
    }
    s += "} ";
    if (d.kind == 'E') {
        s += "E#" + std::to_string(d.index);
    } else {
        s += d.kind;
    }
    return s;
}

struct SolveOptions {
    Scheme scheme;
    Limits limits;
    std::uint64_t seed = 0;
    std::function<void(const Decision&)> on_decision;
};

struct Outcome {
    Status status = Status::Unsat;
    std::vector<Value> assignment;  // one value per variable when Sat
    RunStats stats;
};

// True iff every constraint accepts the assignment.
inline bool verify(const Problem& p, std::span<const Value> assignment) {
    if (assignment.size() != p.num_variables()) return false;
    for (std::size_t x = 0; x < p.num_variables(); ++x)
        if (!p.index_of(static_cast<VarId>(x), assignment[x])) return false;
    std::vector<Value> tuple;
    for (const auto& c : p.constraints()) {
        tuple.clear();
        for (VarId x : c.scope) tuple.push_back(assignment[x]);
        if (!check_tuple(c, tuple)) return false;
    }
    return true;
}

// MAC depth-first search running one branching scheme.
class Solver {
public:
    Solver(const Problem& problem, SolveOptions options)
        : problem_(&problem), options_(std::move(options)), state_(problem), propagator_(problem) {}

    Outcome run() {
        start_ = std::chrono::steady_clock::now();
        Outcome out;
        root_ = state_.push_level();
        const auto root = propagator_.propagate_all(state_);
        Result r = Result::Fail;
        if (root.consistent()) r = dfs(0);
        switch (r) {
            case Result::Sat: {
                out.status = Status::Sat;
                out.assignment.resize(problem_->num_variables());
                for (VarId x = 0; x < problem_->num_variables(); ++x) out.assignment[x] = state_.first_value(x);
                if (!verify(*problem_, out.assignment)) throw std::logic_error("search produced an invalid solution");
                break;
            }
            case Result::Fail: out.status = Status::Unsat; break;
            case Result::Limit: out.status = Status::Limit; break;
        }
        stats_.wipeouts = state_.counters.wipeouts;
        stats_.elapsed_ms = elapsed_ms();
        out.stats = stats_;
        return out;
    }

    const SearchState& state() const { return state_; }
    SearchState& state() { return state_; }
    SearchState::LevelToken root_token() const { return root_; }

private:
    enum class Result { Sat, Fail, Limit };

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

    // Checked before every node; the clock is read every 64 nodes.
    bool limit_reached() {
        if (options_.limits.max_nodes && stats_.nodes >= *options_.limits.max_nodes) return true;
        if (options_.limits.wall_time_ms && stats_.nodes % 64 == 0 && elapsed_ms() >= *options_.limits.wall_time_ms)
            return true;
        return false;
    }

    void emit(std::size_t level, VarId x, const std::vector<Value>& values, char kind, std::size_t index) {
        if (options_.on_decision) options_.on_decision(Decision{level, x, values, kind, index});
    }

    // Applies one decision on x and propagates it. True when consistent.
    bool apply_reduce(VarId x, const std::vector<Value>& keep) {
        ++stats_.nodes;
        if (state_.reduce_domain(x, keep)) return false;
        const auto arcs = propagator_.arcs_touching(x);
        return propagator_.propagate(state_, arcs).consistent();
    }

    bool apply_remove(VarId x, const std::vector<Value>& drop) {
        ++stats_.nodes;
        for (Value v : drop) state_.remove_value(x, v);
        if (state_.empty(x)) return false;
        const auto arcs = propagator_.arcs_touching(x);
        return propagator_.propagate(state_, arcs).consistent();
    }

    Result dfs(std::size_t level) {
        const auto selected = select_variable(state_);
        if (!selected) return Result::Sat;
        const VarId x = *selected;
        const auto scored = score_domain(state_, x);
        for (std::size_t i = 1; i < scored.size(); ++i) {
            if (scored[i].score == scored[i - 1].score) {
                ++stats_.tied_choice_points;
                break;
            }
        }
        const BranchPlan p = plan_from_scores(options_.scheme, x, scored, problem_->domain(x).size());
        ++stats_.decisions;
        for (const auto& set : p.sets) {
            if (set.size() > 1) {
                ++stats_.set_choice_points;
                break;
            }
        }

        if (p.style == BranchStyle::Enumerated) {
            for (std::size_t i = 0; i < p.sets.size(); ++i) {
                if (limit_reached()) return Result::Limit;
                const auto token = state_.push_level();
                emit(level, x, p.sets[i], 'E', i);
                if (apply_reduce(x, p.sets[i])) {
                    const Result r = dfs(level + 1);
                    if (r != Result::Fail) return r;
                }
                state_.undo_to(token);
            }
            ++stats_.backtracks;
            return Result::Fail;
        }

        const auto& first = p.sets.front();
        if (limit_reached()) return Result::Limit;
        auto token = state_.push_level();
        emit(level, x, first, 'L', 0);
        if (apply_reduce(x, first)) {
            const Result r = dfs(level + 1);
            if (r != Result::Fail) return r;
        }
        state_.undo_to(token);

        if (first.size() < state_.size(x)) {
            if (limit_reached()) return Result::Limit;
            token = state_.push_level();
            emit(level, x, first, 'R', 0);
            if (apply_remove(x, first)) {
                const Result r = dfs(level + 1);
                if (r != Result::Fail) return r;
            }
            state_.undo_to(token);
        }
        ++stats_.backtracks;
        return Result::Fail;
    }

    const Problem* problem_;
    SolveOptions options_;
    SearchState state_;
    Propagator propagator_;
    RunStats stats_;
    SearchState::LevelToken root_ = 0;
    std::chrono::steady_clock::time_point start_;
};

inline Outcome solve(const Problem& problem, const SolveOptions& options) {
    Solver solver(problem, options);
    return solver.run();
}

}  // namespace setbranch

#endif
