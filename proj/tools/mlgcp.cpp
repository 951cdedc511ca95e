// mlgcp: solve, generate, benchmark and validate minimum label cut instances.

#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlgcp/bench.hpp"
#include "mlgcp/generator.hpp"
#include "mlgcp/instance_io.hpp"
#include "mlgcp/solve.hpp"

namespace {

using namespace mlgcp;

std::string opt_number(std::optional<double> v) {
    if (!v) return "*";
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << *v;
    return out.str();
}

void warn_about(const LabeledGraph& g, const std::string& path) {
    if (g.duplicates_removed() > 0)
        std::cerr << "warning: " << path << ": dropped " << g.duplicates_removed() << " duplicate edge(s)\n";
    const LabelSet unused = g.unused_labels();
    if (!unused.empty()) {
        std::cerr << "warning: " << path << ": " << unused.size() << " unused label(s):";
        for (Label l : unused) std::cerr << ' ' << l;
        std::cerr << '\n';
    }
}

struct SolveArgs {
    std::string instance;
    std::string model = "part2";
    double time_limit = 3600.0;
    std::uint64_t seed = 0;
    std::string out;
    bool no_heuristic = false;
    bool verbose = false;
    int restarts = 0;
    bool p3e_fractional = false;
    std::string dump_lp;
};

int cmd_solve(const SolveArgs& a) {
    const Method method = parse_method(a.model);
    const LabeledGraph g = read_instance_file(a.instance);
    warn_about(g, a.instance);

    if (!a.dump_lp.empty()) {
        if (!is_formulation(method)) throw std::invalid_argument("--dump-lp needs a MILP model");
        const Formulation f = build_formulation(model_kind(method), g);
        std::ofstream lp(a.dump_lp);
        if (!lp) throw std::runtime_error("cannot write " + a.dump_lp);
        write_lp_format(lp, f.model.core, f.model.integer_vars);
    }

    SolveOptions options;
    options.method = method;
    options.limits.time_limit_s = a.time_limit;
    options.use_heuristic = !a.no_heuristic;
    options.heuristic_restarts = a.restarts;
    options.seed = a.seed;
    options.formulation.p3e_fractional = a.p3e_fractional;
    if (a.verbose) options.engine.log = &std::cerr;
    const SolveReport r = solve_instance(g, options);

    std::cout << "model   " << to_string(method) << '\n';
    if (r.best) {
        std::cout << "cost    " << detail::format_double(r.best->cost) << '\n' << "labels ";
        for (Label l : r.best->labels) std::cout << ' ' << l;
        std::cout << '\n';
    } else {
        std::cout << "cost    *\nlabels  *\n";
    }
    std::cout << "status  " << to_string(r.status) << '\n'
              << "t(s)    " << std::fixed << std::setprecision(3) << r.wall_time_s << std::defaultfloat << '\n'
              << "gap     " << opt_number(gap(r)) << '\n'
              << "gapr    " << opt_number(gapr(r)) << '\n'
              << "nodes   " << r.nodes << '\n'
              << "cuts    " << r.cuts << '\n';
    if (!std::isnan(r.root_relaxation)) std::cout << "root    " << detail::format_double(r.root_relaxation) << '\n';
    if (!r.note.empty()) std::cout << "note    " << r.note << '\n';

    if (r.best) {
        const std::string path = a.out.empty() ? a.instance + ".sol" : a.out;
        std::ofstream sol(path);
        if (!sol) throw std::runtime_error("cannot write " + path);
        write_solution(sol, *r.best);
    }
    return 0;
}

struct GenerateArgs {
    InstanceSpec spec;
    std::string scenario = "unicost";
    std::string out;
};

int cmd_generate(GenerateArgs a) {
    a.spec.scenario = parse_scenario(a.scenario);
    const LabeledGraph g = generate(a.spec);
    if (a.out.empty()) {
        write_instance(std::cout, g);
        return 0;
    }
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    write_instance(out, g);
    return 0;
}

struct BenchArgs {
    BenchSpec spec;
    std::string scenario = "unicost";
    std::vector<std::string> models{"part2", "eac"};
    double time_limit = 3600.0;
    bool no_heuristic = false;
    bool p3e_fractional = false;
    bool verbose = false;
    std::string out;
};

int cmd_bench(BenchArgs a) {
    a.spec.scenario = parse_scenario(a.scenario);
    a.spec.models.clear();
    for (const std::string& m : a.models) a.spec.models.push_back(parse_method(m));
    a.spec.limits.time_limit_s = a.time_limit;
    a.spec.use_heuristic = !a.no_heuristic;
    a.spec.formulation.p3e_fractional = a.p3e_fractional;
    const BenchResult r = run_bench(a.spec, a.verbose ? &std::cerr : nullptr);
    write_bench_table(std::cout, r);
    for (const GroupRow& row : r.rows)
        if (row.failures > 0)
            std::cerr << "warning: " << row.group << ' ' << row.model << ": " << row.failures << " instance(s) failed\n";
    if (a.verbose)
        for (std::size_t gi = 0; gi < r.groups.size(); ++gi)
            for (std::size_t ii = 0; ii < r.outcomes[gi].size(); ++ii)
                for (std::size_t mi = 0; mi < r.models.size(); ++mi)
                    if (!r.outcomes[gi][ii][mi].error.empty())
                        std::cerr << group_name(r.groups[gi]) << " #" << ii << ' ' << to_string(r.models[mi]) << ": "
                                  << r.outcomes[gi][ii][mi].error << '\n';
    if (!a.out.empty()) {
        std::ofstream csv(a.out);
        if (!csv) throw std::runtime_error("cannot write " + a.out);
        write_bench_csv(csv, r);
    }
    return 0;
}

// 0 valid, 1 infeasible, 2 claimed cost off by more than 1e-9.
int cmd_validate(const std::string& instance, const std::string& solution) {
    const LabeledGraph g = read_instance_file(instance);
    const SolutionFile s = read_solution_file(solution);
    for (Label l : s.labels)
        if (l < 0 || l >= g.num_labels()) {
            std::cout << "infeasible: label " << l << " out of range\n";
            return 1;
        }
    const CutSolution cut = validate_cut(g, s.labels);
    if (!cut.feasible()) {
        std::cout << "infeasible: graph stays connected after removing the labels\n";
        return 1;
    }
    if (std::abs(cut.cost - s.claimed_cost) > 1e-9) {
        std::cout << "cost mismatch: claimed " << detail::format_double(s.claimed_cost) << ", actual "
                  << detail::format_double(cut.cost) << '\n';
        return 2;
    }
    std::cout << "valid: cost " << detail::format_double(cut.cost) << ", " << cut.components_after
              << " components\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum label global cut solver"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Solve one instance");
    s->add_option("instance", solve.instance, "Instance file")->required();
    s->add_option("--model", solve.model, "part, part2, p3e, eac, bf or ls")->capture_default_str();
    s->add_option("--time-limit", solve.time_limit, "Wall-clock limit in seconds")->capture_default_str();
    s->add_option("--seed", solve.seed, "Local search seed")->capture_default_str();
    s->add_option("--restarts", solve.restarts, "Local search restarts (0: 10*ceil(log2 n))");
    s->add_option("--out", solve.out, "Solution file (default: INSTANCE.sol)");
    s->add_option("--dump-lp", solve.dump_lp, "Write the model in LP format");
    s->add_flag("--no-heuristic", solve.no_heuristic, "Do not seed the upper bound with local search");
    s->add_flag("--p3e-fractional", solve.p3e_fractional, "Also separate triangle rows at fractional points");
    s->add_flag("--verbose", solve.verbose, "Node log on stderr");

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Generate a random instance");
    g->add_option("--n", gen.spec.n, "Vertices")->required();
    g->add_option("--labels", gen.spec.num_labels, "Labels")->required();
    g->add_option("--density", gen.spec.density, "Edge density in (0, 1]")->required();
    g->add_option("--scenario", gen.scenario, "unicost, random or normal")->capture_default_str();
    g->add_option("--seed", gen.spec.seed, "Seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output file (default: stdout)");

    BenchArgs bench;
    bench.spec.sizes = {10};
    bench.spec.label_counts = {5};
    bench.spec.densities = {0.2, 0.5, 0.8};
    auto* b = app.add_subcommand("bench", "Run a benchmark sweep");
    b->add_option("--n", bench.spec.sizes, "Vertex counts")->delimiter(',')->capture_default_str();
    b->add_option("--labels", bench.spec.label_counts, "Label counts")->delimiter(',')->capture_default_str();
    b->add_option("--density", bench.spec.densities, "Densities")->delimiter(',')->capture_default_str();
    b->add_option("--scenario", bench.scenario, "unicost, random or normal")->capture_default_str();
    b->add_option("--instances", bench.spec.instances, "Instances per group")->capture_default_str();
    b->add_option("--seed", bench.spec.seed, "Base seed")->capture_default_str();
    b->add_option("--model", bench.models, "Models")->delimiter(',')->capture_default_str();
    b->add_option("--time-limit", bench.time_limit, "Per-solve limit in seconds")->capture_default_str();
    b->add_option("--jobs", bench.spec.jobs, "Parallel instances")->capture_default_str();
    b->add_option("--out", bench.out, "CSV output file");
    b->add_flag("--no-heuristic", bench.no_heuristic, "Do not seed the upper bound with local search");
    b->add_flag("--p3e-fractional", bench.p3e_fractional, "Also separate triangle rows at fractional points");
    b->add_flag("--verbose", bench.verbose, "Per-instance progress on stderr");

    std::string val_instance, val_solution;
    auto* v = app.add_subcommand("validate", "Check a solution file against an instance");
    v->add_option("instance", val_instance, "Instance file")->required();
    v->add_option("solution", val_solution, "Solution file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s) return cmd_solve(solve);
        if (*g) return cmd_generate(gen);
        if (*b) return cmd_bench(bench);
        if (*v) return cmd_validate(val_instance, val_solution);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
