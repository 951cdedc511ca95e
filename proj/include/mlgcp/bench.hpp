#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mlgcp/generator.hpp"
#include "mlgcp/instance_io.hpp"
#include "mlgcp/random.hpp"
#include "mlgcp/solve.hpp"

namespace mlgcp {

struct BenchSpec {
    std::vector<int> sizes;        // n
    std::vector<int> label_counts; // |L|
    std::vector<double> densities; // d
    CostScenario scenario = CostScenario::unicost;
    int instances = 10;
    std::uint64_t seed = 1;
    std::vector<Method> models{Method::part2, Method::eac};
    SolveLimits limits;
    bool use_heuristic = true;
    FormulationOptions formulation;
    int jobs = 1;
};

struct BenchGroup {
    int n = 0;
    int num_labels = 0;
    double density = 0.0;
};

inline std::string density_code(double d) {
    if (d == 0.2) return "ld";
    if (d == 0.5) return "md";
    if (d == 0.8) return "hd";
    std::ostringstream out;
    out << "d" << d;
    return out.str();
}

// n<n>L<|L|>-<density code>, e.g. n50L25-md.
inline std::string group_name(const BenchGroup& g) {
    return "n" + std::to_string(g.n) + "L" + std::to_string(g.num_labels) + "-" + density_code(g.density);
}

inline std::uint64_t instance_seed(std::uint64_t base, const BenchGroup& g, CostScenario scenario, int index) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ static_cast<std::uint64_t>(g.n));
    h = splitmix64(h ^ static_cast<std::uint64_t>(g.num_labels));
    h = splitmix64(h ^ static_cast<std::uint64_t>(std::llround(g.density * 1e6)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(scenario));
    return splitmix64(h ^ static_cast<std::uint64_t>(index));
}

struct InstanceOutcome {
    std::optional<double> ub;
    bool optimal = false;
    double time_s = 0.0;
    std::optional<double> gap;
    std::optional<double> gapr;
    long long nodes = 0;
    long long cuts = 0;
    std::string error;
};

struct GroupRow {
    std::string group;
    std::string model;
    std::optional<double> mean_ub;
    int optimal = 0;
    double mean_time_s = 0.0;
    std::optional<double> mean_gap;
    std::optional<double> mean_gapr;
    double mean_nodes = 0.0;
    double mean_cuts = 0.0;
    int failures = 0;
};

struct BenchResult {
    std::vector<BenchGroup> groups;
    std::vector<Method> models;
    // outcomes[group][instance][model]
    std::vector<std::vector<std::vector<InstanceOutcome>>> outcomes;
    std::vector<GroupRow> rows;  // one per (group, model), group-major
};

namespace detail {

inline std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline InstanceOutcome run_one(const LabeledGraph& g, Method m, const BenchSpec& spec, std::uint64_t seed) {
    InstanceOutcome out;
    try {
        SolveOptions options;
        options.method = m;
        options.limits = spec.limits;
        options.use_heuristic = spec.use_heuristic;
        options.seed = seed;
        options.formulation = spec.formulation;
        const SolveReport r = solve_instance(g, options);
        out.ub = r.upper_bound();
        out.optimal = r.status == SolveStatus::optimal;
        out.time_s = r.wall_time_s;
        out.gap = gap(r);
        out.gapr = gapr(r);
        out.nodes = r.nodes;
        out.cuts = r.cuts;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace detail

/// Runs every (group, instance, model) combination and aggregates one row
/// per group and model. Instances are generated from seeds derived from the
/// spec, so reruns see identical graphs.
inline BenchResult run_bench(const BenchSpec& spec, std::ostream* progress = nullptr) {
    BenchResult result;
    result.models = spec.models;
    for (int n : spec.sizes)
        for (int L : spec.label_counts)
            for (double d : spec.densities) result.groups.push_back({n, L, d});

    const int G = static_cast<int>(result.groups.size());
    const int M = static_cast<int>(spec.models.size());
    const int I = spec.instances;
    result.outcomes.assign(static_cast<std::size_t>(G),
                           std::vector<std::vector<InstanceOutcome>>(static_cast<std::size_t>(I),
                                                                     std::vector<InstanceOutcome>(static_cast<std::size_t>(M))));

    std::atomic<int> next{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (;;) {
            const int task = next.fetch_add(1);
            if (task >= G * I) return;
            const int gi = task / I, ii = task % I;
            const BenchGroup& grp = result.groups[gi];
            InstanceSpec is;
            is.n = grp.n;
            is.num_labels = grp.num_labels;
            is.density = grp.density;
            is.scenario = spec.scenario;
            is.seed = instance_seed(spec.seed, grp, spec.scenario, ii);
            std::optional<LabeledGraph> g;
            std::string gen_error;
            try {
                g = generate(is);
            } catch (const std::exception& e) {
                gen_error = e.what();
            }
            for (int mi = 0; mi < M; ++mi) {
                InstanceOutcome o;
                if (g)
                    o = detail::run_one(*g, spec.models[mi], spec, is.seed);
                else
                    o.error = gen_error;
                result.outcomes[gi][ii][mi] = o;
                if (progress) {
                    std::lock_guard<std::mutex> lock(progress_mutex);
                    *progress << group_name(grp) << " #" << ii << ' ' << to_string(spec.models[mi]) << ": "
                              << (o.error.empty() ? (o.ub ? detail::format_double(*o.ub) : std::string("*")) : "error: " + o.error)
                              << '\n';
                }
            }
        }
    };
    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (int gi = 0; gi < G; ++gi)
        for (int mi = 0; mi < M; ++mi) {
            GroupRow row;
            row.group = group_name(result.groups[gi]);
            row.model = to_string(spec.models[mi]);
            std::vector<double> ubs, gaps, gaprs;
            double t = 0.0, nodes = 0.0, cuts = 0.0;
            int ran = 0;
            for (int ii = 0; ii < I; ++ii) {
                const InstanceOutcome& o = result.outcomes[gi][ii][mi];
                if (!o.error.empty()) {
                    ++row.failures;
                    continue;
                }
                ++ran;
                if (o.ub) ubs.push_back(*o.ub);
                if (o.optimal) ++row.optimal;
                if (o.gap) gaps.push_back(*o.gap);
                if (o.gapr) gaprs.push_back(*o.gapr);
                t += o.time_s;
                nodes += static_cast<double>(o.nodes);
                cuts += static_cast<double>(o.cuts);
            }
            row.mean_ub = detail::mean_of(ubs);
            row.mean_gap = detail::mean_of(gaps);
            row.mean_gapr = detail::mean_of(gaprs);
            if (ran > 0) {
                row.mean_time_s = t / ran;
                row.mean_nodes = nodes / ran;
                row.mean_cuts = cuts / ran;
            }
            result.rows.push_back(row);
        }
    return result;
}

namespace detail {

inline std::string fixed(std::optional<double> v, int digits) {
    if (!v) return "*";
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << *v;
    return out.str();
}

}  // namespace detail

inline void write_bench_csv(std::ostream& out, const BenchResult& r) {
    out << "group,model,mean_ub,O,t_s,gap,gapr,nodes,cuts\n";
    for (const GroupRow& row : r.rows)
        out << row.group << ',' << row.model << ',' << detail::fixed(row.mean_ub, 4) << ',' << row.optimal << ','
            << detail::fixed(row.mean_time_s, 3) << ',' << detail::fixed(row.mean_gap, 2) << ','
            << detail::fixed(row.mean_gapr, 2) << ',' << detail::fixed(row.mean_nodes, 1) << ','
            << detail::fixed(row.mean_cuts, 1) << '\n';
}

/// Aligned table in the layout of the published result tables: one line per
/// group with the mean best UB over all models, then O / t(s) / gap / gapr
/// per model.
inline void write_bench_table(std::ostream& out, const BenchResult& r) {
    const int M = static_cast<int>(r.models.size());
    out << std::left << std::setw(16) << "group" << std::right << std::setw(9) << "UB";
    for (Method m : r.models) out << " | " << std::setw(33) << std::left << to_string(m) << std::right;
    out << '\n' << std::setw(25) << "";
    for (int mi = 0; mi < M; ++mi)
        out << " | " << std::setw(4) << "O" << std::setw(10) << "t(s)" << std::setw(9) << "gap" << std::setw(10) << "gapr";
    out << '\n';
    for (std::size_t gi = 0; gi < r.groups.size(); ++gi) {
        std::vector<double> best;
        for (const auto& inst : r.outcomes[gi]) {
            std::optional<double> b;
            for (const InstanceOutcome& o : inst)
                if (o.ub && (!b || *o.ub < *b)) b = o.ub;
            if (b) best.push_back(*b);
        }
        out << std::left << std::setw(16) << group_name(r.groups[gi]) << std::right << std::setw(9)
            << detail::fixed(detail::mean_of(best), 2);
        for (int mi = 0; mi < M; ++mi) {
            const GroupRow& row = r.rows[gi * static_cast<std::size_t>(M) + static_cast<std::size_t>(mi)];
            out << " | " << std::setw(4) << row.optimal << std::setw(10) << detail::fixed(row.mean_time_s, 2)
                << std::setw(9) << detail::fixed(row.mean_gap, 2) << std::setw(10) << detail::fixed(row.mean_gapr, 2);
        }
        out << '\n';
    }
}

}  // namespace mlgcp
