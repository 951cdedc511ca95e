#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mlgcp/graph.hpp"
#include "mlgcp/lp.hpp"

namespace mlgcp {

using Separator = std::function<std::vector<Row>(std::span<const double>)>;

/// An LP core plus the callbacks that turn it into a branch-and-cut model.
struct ModelInstance {
    LpProblem core;
    std::vector<int> integer_vars;
    std::vector<int> branch_priority;
    // Every feasible solution has an integral objective, so node bounds may be
    // rounded up.
    bool integral_objective = false;
    Separator separate_integer;     // lazy rows at LP-integral points
    Separator separate_fractional;  // user rows at fractional points
    std::function<CutSolution(std::span<const double>)> extract_solution;

    void validate() const {
        core.validate();
        for (int j : integer_vars) {
            if (j < 0 || j >= core.num_vars()) throw std::invalid_argument("integer variable out of range");
            if (core.lower[j] < 0.0 || core.upper[j] > 1.0)
                throw std::invalid_argument("integer variables must be binary");
        }
        std::vector<char> is_int(static_cast<std::size_t>(core.num_vars()), 0);
        for (int j : integer_vars) is_int[j] = 1;
        for (int j : branch_priority)
            if (j < 0 || j >= core.num_vars() || !is_int[j])
                throw std::invalid_argument("branch priority must reference integer variables");
        if (!extract_solution) throw std::invalid_argument("model needs an extract_solution callback");
    }
};

struct SolveLimits {
    double time_limit_s = 3600.0;
    long long node_limit = std::numeric_limits<long long>::max();
};

struct EngineOptions {
    std::ostream* log = nullptr;      // one line per node when set
    bool record_cuts = false;         // keep every separated row in the report
    int fractional_node_interval = 10;
};

enum class SolveStatus : std::uint8_t { optimal, time_limit, node_limit, infeasible };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::time_limit: return "time_limit";
        case SolveStatus::node_limit: return "node_limit";
        case SolveStatus::infeasible: return "infeasible";
    }
    return "?";
}

struct SolveReport {
    std::optional<CutSolution> best;
    std::vector<double> best_values;  // LP point of the incumbent, empty when it came from outside
    double lower_bound = 0.0;
    double root_relaxation = std::numeric_limits<double>::quiet_NaN();
    long long nodes = 0;
    long long cuts = 0;
    double wall_time_s = 0.0;
    SolveStatus status = SolveStatus::infeasible;
    std::vector<Row> cut_log;
    std::string note;

    std::optional<double> upper_bound() const {
        if (!best) return std::nullopt;
        return best->cost;
    }
};

/// 100 (UB - LB) / UB, clamped at 0; undefined without a positive UB.
inline std::optional<double> gap(const SolveReport& r) {
    if (!r.best || !(r.best->cost > 0.0)) return std::nullopt;
    return std::max(0.0, 100.0 * (r.best->cost - r.lower_bound) / r.best->cost);
}

/// 100 (LB - root) / LB, clamped at 0; undefined unless LB > 0.
inline std::optional<double> gapr(const SolveReport& r) {
    if (!(r.lower_bound > 0.0) || std::isnan(r.root_relaxation)) return std::nullopt;
    return std::max(0.0, 100.0 * (r.lower_bound - r.root_relaxation) / r.lower_bound);
}

namespace detail {

struct Node {
    long long id = 0;
    long long parent = -1;
    int depth = 0;
    double bound = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, double>> fixings;
    std::optional<Basis> basis;
};

// Best bound first, deeper first on ties, then creation order.
struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.id > b.id;
    }
};

}  // namespace detail

/// Best-bound branch-and-cut over a ModelInstance.
///
/// At every LP-integral node the lazy separator runs and the node is
/// re-solved until it returns nothing; only then is the point offered as an
/// incumbent. The fractional separator runs at every root iteration and at
/// every `fractional_node_interval`-th node afterwards. All rows are global.
inline SolveReport bnc_solve(const ModelInstance& model, const SolveLimits& limits,
                             const std::optional<CutSolution>& initial_ub = std::nullopt,
                             const EngineOptions& options = {}) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };
    constexpr double kIntegrality = 1e-6;
    constexpr double kViolation = 1e-9;

    model.validate();
    SolveReport report;

    double trivial = 0.0;
    for (int j = 0; j < model.core.num_vars(); ++j)
        trivial += std::min(model.core.objective[j] * model.core.lower[j], model.core.objective[j] * model.core.upper[j]);
    double lb = trivial;

    double ub = std::numeric_limits<double>::infinity();
    if (initial_ub) {
        if (!initial_ub->feasible()) throw std::invalid_argument("initial upper bound is not a feasible cut");
        report.best = *initial_ub;
        ub = initial_ub->cost;
    }

    auto rounded = [&](double v) { return model.integral_objective ? std::ceil(v - 1e-6) : v; };
    auto prunable = [&](double bound) {
        if (!std::isfinite(ub)) return false;
        return model.integral_objective ? bound > ub - 0.5 : bound >= ub - 1e-7;
    };
    auto finish = [&](SolveStatus status) {
        report.status = status;
        if (status == SolveStatus::optimal) lb = std::max(lb, ub);
        if (report.best) lb = std::min(lb, ub);
        report.lower_bound = lb;
        report.wall_time_s = elapsed();
        return report;
    };

    if (limits.time_limit_s <= 0.0) return finish(SolveStatus::time_limit);

    SimplexSolver lp(model.core);
    std::vector<double> root_lo = model.core.lower, root_hi = model.core.upper;
    auto check_rows = [&](const std::vector<Row>& rows, std::span<const double> x, const char* who) {
        for (const Row& r : rows)
            if (!(r.violation(x) > kViolation))
                throw std::logic_error(std::string(who) + " separator returned a row that the queried point satisfies");
    };
    auto add_cuts = [&](const std::vector<Row>& rows) {
        lp.add_rows(rows);
        report.cuts += static_cast<long long>(rows.size());
        if (options.record_cuts) report.cut_log.insert(report.cut_log.end(), rows.begin(), rows.end());
    };
    auto log = [&](const detail::Node& node, double value, const std::string& action) {
        if (!options.log) return;
        *options.log << "node " << node.id << " depth " << node.depth << " lp " << value << " action " << action << '\n';
    };

    std::priority_queue<detail::Node, std::vector<detail::Node>, detail::NodeOrder> open;
    open.push(detail::Node{});
    long long next_id = 1;
    long long last_solved = -1;

    while (!open.empty()) {
        if (elapsed() >= limits.time_limit_s) return finish(SolveStatus::time_limit);
        if (report.nodes >= limits.node_limit) return finish(SolveStatus::node_limit);

        detail::Node node = open.top();
        open.pop();
        lb = std::max(lb, std::min(node.bound, ub));
        if (prunable(node.bound)) {
            log(node, node.bound, "prune-bound");
            continue;
        }
        ++report.nodes;

        for (int j : model.integer_vars)
            if (lp.lower(j) != root_lo[j] || lp.upper(j) != root_hi[j]) lp.set_bounds(j, root_lo[j], root_hi[j]);
        for (auto [j, v] : node.fixings) lp.set_bounds(j, v, v);
        if (node.basis && node.parent != last_solved) lp.set_basis(*node.basis);

        const bool at_root = node.id == 0;
        const bool fractional_due = at_root || (options.fractional_node_interval > 0 &&
                                                report.nodes % options.fractional_node_interval == 0);
        for (;;) {
            const LpSolution sol = lp.solve();
            last_solved = node.id;
            if (sol.status == LpStatus::infeasible) {
                log(node, std::numeric_limits<double>::infinity(), "prune-infeasible");
                break;
            }
            if (at_root) report.root_relaxation = sol.objective;
            const double bound = rounded(sol.objective);
            if (prunable(bound)) {
                log(node, sol.objective, "prune-bound");
                break;
            }
            if (elapsed() >= limits.time_limit_s) {
                node.bound = std::max(node.bound, bound);
                open.push(std::move(node));
                lb = std::max(lb, std::min(open.top().bound, ub));
                return finish(SolveStatus::time_limit);
            }

            bool integral = true;
            for (int j : model.integer_vars) {
                const double f = sol.values[j] - std::floor(sol.values[j]);
                if (f > kIntegrality && f < 1.0 - kIntegrality) {
                    integral = false;
                    break;
                }
            }

            if (!integral && fractional_due && model.separate_fractional) {
                std::vector<Row> rows = model.separate_fractional(sol.values);
                if (!rows.empty()) {
                    check_rows(rows, sol.values, "fractional");
                    add_cuts(rows);
                    log(node, sol.objective, "user-cuts " + std::to_string(rows.size()));
                    continue;
                }
            }

            if (integral) {
                if (model.separate_integer) {
                    std::vector<Row> rows = model.separate_integer(sol.values);
                    if (!rows.empty()) {
                        check_rows(rows, sol.values, "lazy");
                        add_cuts(rows);
                        log(node, sol.objective, "lazy-cuts " + std::to_string(rows.size()));
                        continue;
                    }
                }
                CutSolution candidate = model.extract_solution(sol.values);
                if (!candidate.feasible())
                    throw std::logic_error("separation-clean integral point does not describe a feasible cut");
                if (candidate.cost < ub - 1e-9) {
                    ub = candidate.cost;
                    report.best = std::move(candidate);
                    report.best_values = sol.values;
                    log(node, sol.objective, "incumbent");
                } else {
                    log(node, sol.objective, "integral");
                }
                break;
            }

            int branch_var = -1;
            double best_frac = -1.0;
            auto consider = [&](int j) {
                const double f = sol.values[j] - std::floor(sol.values[j]);
                const double score = std::min(f, 1.0 - f);
                if (score <= kIntegrality) return;
                if (score > best_frac + 1e-12 || (std::abs(score - best_frac) <= 1e-12 && j < branch_var)) {
                    best_frac = score;
                    branch_var = j;
                }
            };
            for (int j : model.branch_priority) consider(j);
            if (branch_var < 0)
                for (int j : model.integer_vars) consider(j);

            const Basis basis = lp.basis();
            for (double value : {std::floor(sol.values[branch_var]), std::ceil(sol.values[branch_var])}) {
                detail::Node child;
                child.id = next_id++;
                child.parent = node.id;
                child.depth = node.depth + 1;
                child.bound = bound;
                child.fixings = node.fixings;
                child.fixings.emplace_back(branch_var, value);
                child.basis = basis;
                open.push(std::move(child));
            }
            log(node, sol.objective, "branch x" + std::to_string(branch_var));
            break;
        }
    }
    return finish(report.best ? SolveStatus::optimal : SolveStatus::infeasible);
}

}  // namespace mlgcp
