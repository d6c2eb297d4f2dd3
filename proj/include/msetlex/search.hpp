#pragma once

#include <atomic>
#include <chrono>
#include <thread>

#include "msetlex/propagate.hpp"

// Depth-first branch-and-bound over multiset variables.  Variables are tried
// in declaration order; value branching binds the alpha-least value first
// (left: X = lb, right: lb moves to its successor).  Backtracking restores
// domains from a trail of saved bounds rather than by copying stores.

namespace msetlex {

enum class Repr : std::uint8_t { Alpha, SB };

struct Representation {
    Repr kind = Repr::Alpha;
    Ordering ord = Ordering::LVL;  // also the chain order under SB

    static Representation alpha(Ordering o) { return {Repr::Alpha, o}; }
    static Representation sb() { return {Repr::SB, Ordering::LL}; }

    friend bool operator==(Representation, Representation) = default;
};

inline std::string to_string(Representation r) {
    return r.kind == Repr::SB ? "sb" : std::string(to_string(r.ord));
}

struct MaximizeVarietySum {
    std::vector<int> vars;
};

// Minimize, over team pairs, the number of weeks beyond the first in which
// the pair shares a group.
struct MinimizeMeetExcess {
    int teams = 0;
    int groups_per_week = 0;
    std::vector<int> group_vars;  // week-major
};

using Objective = std::variant<std::monostate, MaximizeVarietySum, MinimizeMeetExcess>;

struct Model {
    Universe universe;
    Representation repr;
    std::vector<VarDomain> domains;
    std::vector<Propagator> propagators;
    Objective objective;

    Model(Universe u, Representation r) : universe(std::move(u)), repr(r) {}

    int add_variable() {
        domains.push_back(repr.kind == Repr::SB
                              ? VarDomain(SubsetBoundsCV::full(universe))
                              : VarDomain(AlphaInterval::full(universe, repr.ord)));
        return static_cast<int>(domains.size()) - 1;
    }

    int add_constant(const Multiset& value) {
        domains.push_back(repr.kind == Repr::SB
                              ? VarDomain(SubsetBoundsCV::point(value))
                              : VarDomain(AlphaInterval::singleton(repr.ord, value)));
        return static_cast<int>(domains.size()) - 1;
    }

    void add(Propagator p) {
        for (int v : p.scope)
            if (v < 0 || v >= static_cast<int>(domains.size()))
                throw std::invalid_argument("propagator scope names unknown variable");
        propagators.push_back(std::move(p));
    }
};

enum class SolveStatus : std::uint8_t { Optimal, Satisfiable, Unsatisfiable, Timeout };

inline std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal:       return "optimal";
        case SolveStatus::Satisfiable:   return "satisfiable";
        case SolveStatus::Unsatisfiable: return "unsatisfiable";
        case SolveStatus::Timeout:       return "timeout";
    }
    return "?";
}

struct SearchStats {
    std::uint64_t fails = 0;
    std::uint64_t nodes = 0;
    double wall_seconds = 0.0;
    std::optional<long long> best_objective;
    SolveStatus status = SolveStatus::Unsatisfiable;
};

struct SearchLimits {
    double timeout_seconds = std::numeric_limits<double>::infinity();
    std::uint64_t node_cap = std::numeric_limits<std::uint64_t>::max();
};

struct Solution {
    std::vector<Multiset> values;
};

// Left/right decisions for an interval domain of size >= 2: bind the least
// value, or remove it.  The two sides partition the domain.
inline std::pair<AlphaInterval, AlphaInterval> branch(const Universe& u,
                                                      const AlphaInterval& dom) {
    if (dom.is_singleton())
        throw std::invalid_argument("cannot branch on a singleton domain");
    auto next = successor(u, dom.ordering(), dom.lb());
    if (!next) throw std::logic_error("non-singleton interval with no successor");
    auto right = AlphaInterval::make(dom.ordering(), std::move(*next), dom.ub());
    if (!right) throw std::logic_error("branch right side empty");
    return {AlphaInterval::singleton(dom.ordering(), dom.lb()), std::move(*right)};
}

// Subset-bounds branching: first unfixed element, occurrence floor first.
inline std::pair<std::optional<VarDomain>, std::optional<VarDomain>> branch_sb(
    const Universe& u, const SubsetBoundsCV& dom) {
    for (int e = 1; e <= u.size(); ++e) {
        const IntRange r = dom.occ(e);
        if (r.is_point()) continue;
        OccBox left = dom.box();
        left.occ[static_cast<std::size_t>(e - 1)] = IntRange::at(r.lo);
        OccBox right = dom.box();
        right.occ[static_cast<std::size_t>(e - 1)] = IntRange{r.lo + 1, r.hi};
        auto lsb = SubsetBoundsCV::from_box(u, left);
        auto rsb = SubsetBoundsCV::from_box(u, right);
        return {lsb ? std::make_optional(VarDomain(std::move(*lsb))) : std::nullopt,
                rsb ? std::make_optional(VarDomain(std::move(*rsb))) : std::nullopt};
    }
    throw std::invalid_argument("cannot branch on a singleton domain");
}

inline long long objective_value(const Objective& obj,
                                 const std::vector<Multiset>& values) {
    if (const auto* max_var = std::get_if<MaximizeVarietySum>(&obj)) {
        long long total = 0;
        for (int v : max_var->vars)
            total += values[static_cast<std::size_t>(v)].variety();
        return total;
    }
    const auto& mm = std::get<MinimizeMeetExcess>(obj);
    const int weeks = static_cast<int>(mm.group_vars.size()) / mm.groups_per_week;
    long long excess = 0;
    for (int a = 1; a <= mm.teams; ++a) {
        for (int b = a + 1; b <= mm.teams; ++b) {
            int met = 0;
            for (int w = 0; w < weeks; ++w) {
                bool meet = false;
                for (int g = 0; g < mm.groups_per_week && !meet; ++g) {
                    const auto& gv = values[static_cast<std::size_t>(
                        mm.group_vars[static_cast<std::size_t>(w * mm.groups_per_week + g)])];
                    meet = gv.occ(a) > 0 && gv.occ(b) > 0;
                }
                if (meet) ++met;
            }
            excess += std::max(0, met - 1);
        }
    }
    return excess;
}

namespace detail {

class Engine {
public:
    Engine(const Model& model, SearchLimits limits)
        : model_(model), limits_(limits), store_(model.universe),
          props_(model.propagators) {
        for (const auto& d : model.domains) store_.add_variable(d);
        if (const auto* mv = std::get_if<MaximizeVarietySum>(&model.objective)) {
            Propagator p{PropagatorKind::VarietySumAtLeast, mv->vars, {}, 0,
                         std::numeric_limits<long long>::min(), Ordering::LL, 0, 0};
            objective_prop_ = static_cast<int>(props_.size());
            props_.push_back(std::move(p));
        } else if (const auto* mm = std::get_if<MinimizeMeetExcess>(&model.objective)) {
            Propagator p{PropagatorKind::MeetExcessAtMost, mm->group_vars, {}, 0,
                         std::numeric_limits<long long>::max(), Ordering::LL,
                         mm->groups_per_week, mm->teams};
            objective_prop_ = static_cast<int>(props_.size());
            props_.push_back(std::move(p));
        }
    }

    std::pair<std::optional<Solution>, SearchStats> run() {
        start_ = std::chrono::steady_clock::now();
        dfs();
        stats_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                .count();
        const bool has_objective =
            !std::holds_alternative<std::monostate>(model_.objective);
        if (timed_out_)
            stats_.status = SolveStatus::Timeout;
        else if (!best_)
            stats_.status = SolveStatus::Unsatisfiable;
        else
            stats_.status =
                has_objective ? SolveStatus::Optimal : SolveStatus::Satisfiable;
        if (best_ && has_objective) stats_.best_objective = best_value_;
        return {best_ ? std::make_optional(Solution{*best_}) : std::nullopt,
                std::move(stats_)};
    }

private:
    struct Frame {
        std::size_t trail_mark;
        int var;
        std::optional<VarDomain> right;
    };

    bool propagate_node() {
        ++stats_.nodes;
        std::vector<int> changed;
        std::deque<int> queue;
        std::vector<bool> queued(props_.size(), false);
        for (std::size_t pi = 0; pi < props_.size(); ++pi) {
            queue.push_back(static_cast<int>(pi));
            queued[pi] = true;
        }
        while (!queue.empty()) {
            const int pi = queue.front();
            queue.pop_front();
            queued[static_cast<std::size_t>(pi)] = false;
            changed.clear();
            const PropStatus st =
                run_propagator(model_.universe, store_,
                               props_[static_cast<std::size_t>(pi)], changed, &trail_);
            if (st == PropStatus::Failed) {
                ++stats_.fails;
                return false;
            }
            for (int v : changed) {
                for (std::size_t wi = 0; wi < props_.size(); ++wi) {
                    const auto& scope = props_[wi].scope;
                    if (!queued[wi] &&
                        std::find(scope.begin(), scope.end(), v) != scope.end()) {
                        queue.push_back(static_cast<int>(wi));
                        queued[wi] = true;
                    }
                }
            }
        }
        return true;
    }

    bool out_of_budget() {
        if (stats_.nodes >= limits_.node_cap) return timed_out_ = true;
        if ((stats_.nodes & 0x3f) == 0) {
            const auto dt = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start_)
                                .count();
            if (dt > limits_.timeout_seconds) return timed_out_ = true;
        }
        return false;
    }

    // Applies a decision domain with trailing; empty decisions fail directly.
    bool apply_decision(int var, std::optional<VarDomain> dom) {
        if (!dom) {
            ++stats_.nodes;
            ++stats_.fails;
            return false;
        }
        trail_.emplace_back(var, store_.domain(var));
        store_.set_domain(var, std::move(*dom));
        return propagate_node();
    }

    int select_variable() const {
        for (int v = 0; v < store_.size(); ++v)
            if (!domain_is_singleton(store_.domain(v))) return v;
        return -1;
    }

    void on_solution() {
        auto values = store_.values();
        if (collect_all_) collect_all_->push_back(values);
        if (std::holds_alternative<std::monostate>(model_.objective)) {
            best_ = std::move(values);
            return;
        }
        const long long obj = objective_value(model_.objective, values);
        const bool maximize =
            std::holds_alternative<MaximizeVarietySum>(model_.objective);
        if (!best_ || (maximize ? obj > best_value_ : obj < best_value_)) {
            best_ = std::move(values);
            best_value_ = obj;
            props_[static_cast<std::size_t>(objective_prop_)].bound =
                maximize ? obj + 1 : obj - 1;
        }
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            store_.set_domain(trail_.back().first, std::move(trail_.back().second));
            trail_.pop_back();
        }
    }

    void dfs() {
        const bool satisfaction =
            std::holds_alternative<std::monostate>(model_.objective);
        std::vector<Frame> stack;
        bool failed = !propagate_node();

        for (;;) {
            if (out_of_budget()) return;
            if (!failed) {
                const int var = select_variable();
                if (var < 0) {
                    on_solution();
                    if (satisfaction && !collect_all_) return;
                    failed = true;  // force a backtrack to look for better
                } else {
                    std::optional<VarDomain> left, right;
                    if (const auto* iv =
                            std::get_if<AlphaInterval>(&store_.domain(var))) {
                        auto [l, r] = branch(model_.universe, *iv);
                        left = VarDomain(std::move(l));
                        right = VarDomain(std::move(r));
                    } else {
                        auto [l, r] = branch_sb(
                            model_.universe,
                            std::get<SubsetBoundsCV>(store_.domain(var)));
                        left = std::move(l);
                        right = std::move(r);
                    }
                    stack.push_back(Frame{trail_.size(), var, std::move(right)});
                    failed = !apply_decision(var, std::move(left));
                }
            } else {
                // backtrack to the deepest open right branch
                if (stack.empty()) return;
                Frame frame = std::move(stack.back());
                stack.pop_back();
                undo_to(frame.trail_mark);
                failed = !apply_decision(frame.var, std::move(frame.right));
            }
        }
    }

    const Model& model_;
    SearchLimits limits_;
    Store store_;
    std::vector<Propagator> props_;
    int objective_prop_ = -1;
    SearchStats stats_;
    std::vector<std::pair<int, VarDomain>> trail_;
    std::optional<std::vector<Multiset>> best_;
    long long best_value_ = 0;
    bool timed_out_ = false;
    std::chrono::steady_clock::time_point start_;

public:
    void collect_into(std::vector<std::vector<Multiset>>* sink) { collect_all_ = sink; }

private:
    std::vector<std::vector<Multiset>>* collect_all_ = nullptr;
};

}  // namespace detail

inline std::pair<std::optional<Solution>, SearchStats> solve(const Model& model,
                                                             SearchLimits limits = {}) {
    detail::Engine engine(model, limits);
    return engine.run();
}

// Exhaustive solution listing for desk-scale oracle checks.
inline std::vector<std::vector<Multiset>> enumerate_solutions(const Model& model,
                                                              SearchLimits limits = {}) {
    std::vector<std::vector<Multiset>> out;
    detail::Engine engine(model, limits);
    engine.collect_into(&out);
    engine.run();
    return out;
}

// Runs independent jobs in parallel with isolated state; results come back in
// input order.
template <typename Job, typename Fn>
std::vector<std::invoke_result_t<Fn, const Job&>> run_many(const std::vector<Job>& jobs,
                                                           Fn&& fn, int threads) {
    using Result = std::invoke_result_t<Fn, const Job&>;
    std::vector<Result> results(jobs.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = fn(jobs[i]);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(threads, static_cast<int>(jobs.size()));
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                results[i] = fn(jobs[i]);
            }
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

}  // namespace msetlex
