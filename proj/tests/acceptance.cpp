// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any gated criterion fails; the throughput check is reported only.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mlgcp/bench.hpp"
#include "mlgcp/bnc.hpp"
#include "mlgcp/formulations.hpp"
#include "mlgcp/heuristics.hpp"
#include "mlgcp/oracle.hpp"
#include "test_support.hpp"

using namespace mlgcp;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t) {
    return std::chrono::duration<double>(clock_type::now() - t).count();
}

bool report(const std::string& id, bool ok, const std::string& detail, bool gated = true) {
    std::cout << id << ' ' << (ok ? "PASS" : "FAIL") << "  " << detail << (gated ? "" : "  [soft, not gated]")
              << std::endl;
    return ok || !gated;
}

struct SuiteRun {
    LabeledGraph g;
    CutSolution oracle;
    SolveReport reports[4];
};

constexpr ModelKind kModels[4] = {ModelKind::part, ModelKind::part2, ModelKind::p3e, ModelKind::eac};

// 200 instances with n in [5,12], |L| in [3,12], d in {0.2, 0.5, 0.8};
// alternating unicost and random costs. Draws that cannot be realised
// (too few edges for a spanning tree or for |L| labels) are redrawn.
std::vector<LabeledGraph> oracle_suite() {
    RandomStream rng(20240601, 99);
    const double densities[] = {0.2, 0.5, 0.8};
    std::vector<LabeledGraph> out;
    while (out.size() < 200) {
        InstanceSpec s;
        s.n = 5 + static_cast<int>(rng.below(8));
        s.num_labels = 3 + static_cast<int>(rng.below(10));
        s.density = densities[rng.below(3)];
        s.scenario = out.size() % 2 == 0 ? CostScenario::unicost : CostScenario::random;
        s.seed = rng.next();
        const int m = target_edge_count(s.n, s.density);
        if (m < s.n - 1 || s.num_labels > m) continue;
        out.push_back(generate(s));
    }
    return out;
}

bool same_optimum(const LabeledGraph& g, double a, double b) {
    return g.integral_costs() ? a == b : std::abs(a - b) <= 1e-6;
}

std::string describe(const LabeledGraph& g) {
    std::ostringstream o;
    o << "n=" << g.num_vertices() << " m=" << g.num_edges() << " L=" << g.num_labels()
      << (g.unicost() ? " unicost" : " weighted");
    return o.str();
}

// x_ij = 0 must be an equivalence relation on the vertices.
bool kept_edges_form_cliques(const Formulation& f, const std::vector<double>& x) {
    const int n = f.vars.n;
    auto kept = [&](int i, int j) { return x[f.vars.pair_var(i, j)] < 0.5; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (i != j && j != k && i != k && kept(i, j) && kept(j, k) && !kept(i, k)) return false;
    return true;
}

std::string run_cli(const std::string& args) {
    return std::string(MLGCP_CLI) + " " + args;
}

std::vector<std::string> stable_columns(const std::string& csv_path) {
    std::ifstream in(csv_path);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        if (cols.size() != 9) return {};
        // group, model, mean_ub, O, gap, gapr
        out.push_back(cols[0] + ',' + cols[1] + ',' + cols[2] + ',' + cols[3] + ',' + cols[5] + ',' + cols[6]);
    }
    return out;
}

}  // namespace

int main() {
    bool all_ok = true;

    // Criteria 1, 3, 4, 5 share one pass over the oracle suite.
    const auto suite_start = clock_type::now();
    const std::vector<LabeledGraph> instances = oracle_suite();
    std::vector<SuiteRun> runs;
    runs.reserve(instances.size());
    int mismatches = 0, oracle_disagreements = 0;
    for (const LabeledGraph& g : instances) {
        SuiteRun run{g, brute_force(g), {}};
        if (!same_optimum(g, run.oracle.cost, testing::exhaustive_optimum(g))) ++oracle_disagreements;
        for (int k = 0; k < 4; ++k) {
            const Formulation f = build_formulation(kModels[k], g);
            EngineOptions options;
            options.record_cuts = true;
            try {
                run.reports[k] = bnc_solve(f.model, SolveLimits{}, std::nullopt, options);
            } catch (const std::exception& e) {
                std::cout << "  error: " << to_string(kModels[k]) << " on " << describe(g) << ": " << e.what() << '\n';
                run.reports[k] = SolveReport{};
            }
            const SolveReport& r = run.reports[k];
            if (r.status != SolveStatus::optimal || !r.best || !r.best->feasible() ||
                !same_optimum(g, r.best->cost, run.oracle.cost)) {
                ++mismatches;
                std::cout << "  mismatch: " << to_string(kModels[k]) << " on " << describe(g) << " got "
                          << (r.best ? detail::format_double(r.best->cost) : std::string("none")) << " oracle "
                          << detail::format_double(run.oracle.cost) << '\n';
            }
        }
        runs.push_back(std::move(run));
    }
    const double suite_seconds = seconds_since(suite_start);
    {
        std::ostringstream d;
        d << runs.size() << " instances x 4 models, " << mismatches << " mismatches, " << oracle_disagreements
          << " oracle disagreements, " << std::fixed << std::setprecision(1) << suite_seconds << " s";
        all_ok &= report("C1 oracle-equivalence", mismatches == 0 && oracle_disagreements == 0 && suite_seconds < 900.0,
                         d.str());
    }

    // Criterion 2: first lazy round of the tree model from z = 0.
    {
        constexpr Label A = 0, B = 1, C = 2, D = 3, E = 4, F = 5;
        bool ok = true;
        const LabeledGraph line(5, {{0, 1, A}, {1, 2, C}, {2, 3, D}, {3, 4, E}}, 6);
        const Formulation f = build_eac(line);
        const std::vector<double> zero(static_cast<std::size_t>(f.model.core.num_vars()), 0.0);
        const auto rows = f.model.separate_integer(zero);
        std::set<int> expect{f.vars.label_vars[A], f.vars.label_vars[C], f.vars.label_vars[D], f.vars.label_vars[E]};
        std::set<int> got;
        bool unit = rows.size() == 1 && rows[0].sense == Sense::greater_equal && rows[0].rhs == 1.0;
        if (!rows.empty())
            for (const Term& t : rows[0].terms) {
                got.insert(t.var);
                unit &= t.coef == 1.0;
            }
        ok &= unit && got == expect && rows[0].violation(zero) == 1.0;

        // Same tree plus chords; every emitted row lives on labels not yet removed.
        const LabeledGraph chords(5, {{0, 1, A}, {1, 2, C}, {2, 3, D}, {3, 4, E}, {0, 2, B}, {1, 3, F}, {2, 4, B}}, 6);
        const Formulation fc = build_eac(chords);
        for (Label removed = -1; removed < 6; ++removed) {
            std::vector<double> z(static_cast<std::size_t>(fc.model.core.num_vars()), 0.0);
            if (removed >= 0) z[fc.vars.label_vars[removed]] = 1.0;
            const auto r = fc.model.separate_integer(z);
            const bool connected = testing::bfs_components(chords, removed >= 0 ? 1u << removed : 0u) == 1;
            if (!connected) {
                ok &= r.empty();
                continue;
            }
            ok &= r.size() == 1 && r[0].violation(z) == 1.0;
            if (!r.empty())
                for (const Term& t : r[0].terms) ok &= removed < 0 || t.var != fc.vars.label_vars[removed];
        }
        all_ok &= report("C2 tree-cut-emission", ok, "line tree row is z_A + z_C + z_D + z_E >= 1, violation 1.0");
    }

    // Criterion 3: tree model root bound against the two-index model.
    {
        int better_or_equal = 0, compared = 0;
        std::ostringstream exceptions;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const double part2 = runs[i].reports[1].root_relaxation;
            const double eac = runs[i].reports[3].root_relaxation;
            if (std::isnan(part2) || std::isnan(eac)) continue;
            ++compared;
            if (eac >= part2 - 1e-6)
                ++better_or_equal;
            else
                exceptions << "  exception: instance " << i << " (" << describe(runs[i].g) << ") part2 root " << part2
                           << " > eac root " << eac << '\n';
        }
        std::cout << exceptions.str();
        const double share = compared ? static_cast<double>(better_or_equal) / compared : 0.0;
        std::ostringstream d;
        d << better_or_equal << '/' << compared << " instances with eac root >= part2 root (" << std::fixed
          << std::setprecision(1) << 100.0 * share << "%)";
        all_ok &= report("C3 root-relaxation", compared == static_cast<int>(runs.size()) && share >= 0.95, d.str());
    }

    // Criterion 4: every separated row holds at every feasible integral cut.
    {
        long long rows_checked = 0, pairs_checked = 0, violations = 0;
        for (const SuiteRun& run : runs) {
            if (run.g.num_labels() > 10) continue;
            const auto cuts = enumerate_feasible_cuts(run.g);
            for (int k = 0; k < 4; ++k) {
                const auto& log = run.reports[k].cut_log;
                if (log.empty()) continue;
                const Formulation f = build_formulation(kModels[k], run.g);
                for (const LabelSet& cut : cuts) {
                    const auto x = integral_point(f, cut);
                    for (const Row& r : log) {
                        ++pairs_checked;
                        if (r.violation(x) > 1e-9) ++violations;
                    }
                }
                rows_checked += static_cast<long long>(log.size());
            }
        }
        std::ostringstream d;
        d << rows_checked << " rows against all feasible cuts (" << pairs_checked << " checks), " << violations
          << " violations";
        all_ok &= report("C4 separator-soundness", violations == 0 && rows_checked > 0, d.str());
    }

    // Criterion 5: clique structure of solved clique-partitioning points.
    {
        int checked = 0, bad = 0;
        for (const SuiteRun& run : runs) {
            if (run.g.num_vertices() > 8) continue;
            const SolveReport& r = run.reports[2];
            if (r.status != SolveStatus::optimal) continue;
            ++checked;
            const Formulation f = build_p3e(run.g);
            if (r.best_values.size() != static_cast<std::size_t>(f.model.core.num_vars()) ||
                !kept_edges_form_cliques(f, r.best_values))
                ++bad;
        }
        std::ostringstream d;
        d << checked << " solved instances with n <= 8, " << bad << " violations";
        all_ok &= report("C5 p3e-clique-structure", bad == 0 && checked > 0, d.str());
    }

    // Criterion 6: local search validity on 1000 instances.
    {
        RandomStream rng(77, 5);
        int infeasible = 0, worse_than_start = 0, counter_mismatch = 0;
        long long moves = 0;
        const auto start = clock_type::now();
        for (int t = 0; t < 1000; ++t) {
            const LabeledGraph g = testing::random_instance(rng, 4, 25, 2, 20, t % 2 == 1);
            LocalSearchOptions o;
            o.seed = static_cast<std::uint64_t>(t);
            o.on_move = [&](const VertexPartition& p, const ColorCounter& c) {
                ++moves;
                const ColorCounter fresh(g, p);
                if (!(fresh == c) || c.total() != static_cast<int>(crossing_labels(g, p).size())) ++counter_mismatch;
            };
            const LocalSearchResult r = local_search_run(g, o);
            if (!r.best.feasible() || testing::bfs_components(g, testing::mask_of(r.best.labels)) < 2) ++infeasible;
            if (r.best.cost > r.best_initial_cost) ++worse_than_start;
        }
        std::ostringstream d;
        d << "1000 instances, " << moves << " moves checked; infeasible " << infeasible << ", above initial "
          << worse_than_start << ", counter mismatches " << counter_mismatch << " (" << std::fixed
          << std::setprecision(1) << seconds_since(start) << " s)";
        all_ok &= report("C6 heuristic-validity", infeasible == 0 && worse_than_start == 0 && counter_mismatch == 0,
                         d.str());
    }

    // Criterion 7: two bench runs with the same seeds, one of them parallel.
    {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / ("mlgcp_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        const std::string args =
            "bench --n 8,11 --labels 4,7 --density 0.5,0.8 --scenario random --instances 3 --seed 5 "
            "--model part2,eac,p3e,ls --time-limit 60";
        const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
        const int ra = std::system((run_cli(args + " --jobs 1 --out " + a) + " > /dev/null").c_str());
        const int rb = std::system((run_cli(args + " --jobs 2 --out " + b) + " > /dev/null").c_str());
        const auto ca = stable_columns(a), cb = stable_columns(b);
        const bool ok = ra == 0 && rb == 0 && !ca.empty() && ca == cb;
        fs::remove_all(dir);
        all_ok &= report("C7 bench-determinism", ok,
                         std::to_string(ca.size() > 0 ? ca.size() - 1 : 0) + " rows, UB/O/gap/gapr identical across runs");
    }

    // Criterion 8: desk-scale throughput, reported only.
    {
        BenchSpec spec;
        spec.sizes = {30};
        spec.label_counts = {8};
        spec.densities = {0.2};
        spec.scenario = CostScenario::unicost;
        spec.instances = 10;
        spec.seed = 1;
        spec.models = {Method::part2};
        spec.limits.time_limit_s = 300.0;
        const BenchResult r = run_bench(spec);
        const GroupRow& row = r.rows.front();
        double worst = 0.0;
        for (const auto& inst : r.outcomes[0]) worst = std::max(worst, inst[0].time_s);
        std::ostringstream d;
        d << row.group << " part2: " << row.optimal << "/10 optimal, mean " << std::fixed << std::setprecision(3)
          << row.mean_time_s << " s, max " << worst << " s";
        report("C8 throughput", row.optimal >= 8, d.str(), false);
    }

    return all_ok ? 0 : 1;
}
