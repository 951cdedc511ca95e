#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "mlgcp/bnc.hpp"
#include "mlgcp/formulations.hpp"
#include "mlgcp/graph.hpp"
#include "mlgcp/heuristics.hpp"
#include "mlgcp/oracle.hpp"

namespace mlgcp {

enum class Method { part, part2, p3e, eac, bf, ls };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::part: return "part";
        case Method::part2: return "part2";
        case Method::p3e: return "p3e";
        case Method::eac: return "eac";
        case Method::bf: return "bf";
        case Method::ls: return "ls";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "part") return Method::part;
    if (s == "part2") return Method::part2;
    if (s == "p3e") return Method::p3e;
    if (s == "eac") return Method::eac;
    if (s == "bf") return Method::bf;
    if (s == "ls") return Method::ls;
    throw std::invalid_argument("unknown model `" + s + "` (expected part, part2, p3e, eac, bf or ls)");
}

inline bool is_formulation(Method m) { return m != Method::bf && m != Method::ls; }

inline ModelKind model_kind(Method m) {
    switch (m) {
        case Method::part: return ModelKind::part;
        case Method::part2: return ModelKind::part2;
        case Method::p3e: return ModelKind::p3e;
        case Method::eac: return ModelKind::eac;
        default: throw std::invalid_argument("method `" + to_string(m) + "` has no MILP model");
    }
}

struct SolveOptions {
    Method method = Method::part2;
    SolveLimits limits;
    bool use_heuristic = true;  // seed the upper bound with local search
    int heuristic_restarts = 0;
    std::uint64_t seed = 0;
    int oracle_cap = kDefaultOracleCap;
    FormulationOptions formulation;
    EngineOptions engine;
};

/// Runs one method on one instance. Disconnected inputs short-circuit to the
/// empty cut. `ls` proves nothing, so it reports status time_limit with a
/// lower bound of 0.
inline SolveReport solve_instance(const LabeledGraph& g, const SolveOptions& options) {
    if (g.num_vertices() < 2) throw std::invalid_argument("a cut needs at least two vertices");
    const auto start = std::chrono::steady_clock::now();
    auto seconds = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    if (!is_connected(g)) {
        SolveReport r;
        r.best = validate_cut(g, LabelSet{});
        r.status = SolveStatus::optimal;
        r.lower_bound = 0.0;
        r.root_relaxation = 0.0;
        r.note = "input graph is disconnected; the empty cut is optimal";
        r.wall_time_s = seconds();
        return r;
    }

    switch (options.method) {
        case Method::bf: {
            SolveReport r;
            r.best = brute_force(g, options.oracle_cap);
            r.status = SolveStatus::optimal;
            r.lower_bound = r.best->cost;
            r.wall_time_s = seconds();
            return r;
        }
        case Method::ls: {
            SolveReport r;
            r.best = local_search(g, options.heuristic_restarts, options.seed);
            r.status = SolveStatus::time_limit;
            r.lower_bound = 0.0;
            r.note = "heuristic only; no lower bound";
            r.wall_time_s = seconds();
            return r;
        }
        default: break;
    }

    std::optional<CutSolution> seed;
    if (options.use_heuristic)
        seed = local_search(g, options.heuristic_restarts, options.seed);
    const Formulation f = build_formulation(model_kind(options.method), g, options.formulation);
    SolveLimits limits = options.limits;
    limits.time_limit_s = std::max(0.0, limits.time_limit_s - seconds());
    if (options.limits.time_limit_s > 0.0 && limits.time_limit_s <= 0.0) limits.time_limit_s = 1e-9;
    SolveReport r = bnc_solve(f.model, limits, seed, options.engine);
    r.wall_time_s = seconds();
    return r;
}

}  // namespace mlgcp
