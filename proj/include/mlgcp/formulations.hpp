#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mlgcp/bnc.hpp"
#include "mlgcp/graph.hpp"
#include "mlgcp/heuristics.hpp"
#include "mlgcp/lp.hpp"

namespace mlgcp {

enum class ModelKind { part, part2, p3e, eac };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::part: return "part";
        case ModelKind::part2: return "part2";
        case ModelKind::p3e: return "p3e";
        case ModelKind::eac: return "eac";
    }
    return "?";
}

/// Variable indices of a built model. Unused maps are empty.
struct VariableMap {
    int n = 0;
    std::vector<int> label_vars;   // z_l
    std::vector<int> vertex_vars;  // w_v
    std::vector<int> edge_vars;    // x_e per edge id (PART)
    std::vector<int> pair_vars;    // x_ij for every vertex pair i < j (P3E)

    static std::size_t pair_slot(int n, int i, int j) {
        if (i > j) std::swap(i, j);
        // Row-major upper triangle without the diagonal.
        return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + static_cast<std::size_t>(j - i - 1);
    }
    int pair_var(int i, int j) const { return pair_vars[pair_slot(n, i, j)]; }
};

struct FormulationOptions {
    bool p3e_fractional = false;  // also separate triangle rows at fractional points
    int p3e_row_cap = 500;
};

struct Formulation {
    ModelKind kind = ModelKind::part2;
    std::shared_ptr<const LabeledGraph> graph;
    VariableMap vars;
    ModelInstance model;
};

namespace detail {

inline Row covering_row(std::span<const int> vars) {
    Row r;
    r.sense = Sense::greater_equal;
    r.rhs = 1.0;
    for (int v : vars) r.terms.push_back({v, 1.0});
    return r;
}

inline void require_connected(const LabeledGraph& g) {
    if (g.num_vertices() < 2) throw std::invalid_argument("a cut needs at least two vertices");
    if (!is_connected(g)) throw std::invalid_argument("formulations expect a connected input graph");
}

inline void add_label_vars(const LabeledGraph& g, LpProblem& p, VariableMap& vars) {
    for (Label l = 0; l < g.num_labels(); ++l) vars.label_vars.push_back(p.add_variable(g.cost(l), 0.0, 1.0));
}

inline CutSolution cut_from_sides(const LabeledGraph& g, std::span<const double> x, std::span<const int> vertex_vars) {
    LabelSet labels;
    for (const Edge& e : g.edges())
        if ((x[vertex_vars[e.u]] >= 0.5) != (x[vertex_vars[e.v]] >= 0.5)) labels.push_back(e.label);
    return validate_cut(g, labels);
}

inline CutSolution cut_from_labels(const LabeledGraph& g, std::span<const double> x, std::span<const int> label_vars) {
    LabelSet labels;
    for (Label l = 0; l < g.num_labels(); ++l)
        if (x[label_vars[l]] >= 0.5) labels.push_back(l);
    return validate_cut(g, labels);
}

inline Formulation start(ModelKind kind, const LabeledGraph& g) {
    require_connected(g);
    Formulation f;
    f.kind = kind;
    f.graph = std::make_shared<const LabeledGraph>(g);
    f.vars.n = g.num_vertices();
    f.model.integral_objective = g.integral_costs();
    return f;
}

}  // namespace detail

/// Vertex-bipartition model with label, edge and side variables:
///   min sum c_l z_l
///   1 <= sum w_v <= n - 1
///   z_{l(e)} >= x_e,  x_ij >= w_i - w_j,  x_ij >= w_j - w_i
///   z, x in [0, 1];  w binary.
inline Formulation build_part(const LabeledGraph& g) {
    Formulation f = detail::start(ModelKind::part, g);
    LpProblem& p = f.model.core;
    VariableMap& vars = f.vars;
    detail::add_label_vars(g, p, vars);
    for (int e = 0; e < g.num_edges(); ++e) vars.edge_vars.push_back(p.add_variable(0.0, 0.0, 1.0));
    for (Vertex v = 0; v < g.num_vertices(); ++v) vars.vertex_vars.push_back(p.add_variable(0.0, 0.0, 1.0));

    Row card;
    for (int w : vars.vertex_vars) card.terms.push_back({w, 1.0});
    card.sense = Sense::greater_equal;
    card.rhs = 1.0;
    p.add_row(card);
    card.sense = Sense::less_equal;
    card.rhs = g.num_vertices() - 1.0;
    p.add_row(card);

    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        const int x = vars.edge_vars[e];
        const int z = vars.label_vars[ed.label];
        const int wi = vars.vertex_vars[ed.u], wj = vars.vertex_vars[ed.v];
        p.add_row({{{z, 1.0}, {x, -1.0}}, Sense::greater_equal, 0.0});
        p.add_row({{{x, 1.0}, {wi, -1.0}, {wj, 1.0}}, Sense::greater_equal, 0.0});
        p.add_row({{{x, 1.0}, {wj, -1.0}, {wi, 1.0}}, Sense::greater_equal, 0.0});
    }

    f.model.integer_vars = vars.vertex_vars;
    f.model.branch_priority = vars.vertex_vars;
    f.model.extract_solution = [graph = f.graph, w = vars.vertex_vars](std::span<const double> x) {
        return detail::cut_from_sides(*graph, x, w);
    };
    return f;
}

/// PART without edge variables and with vertex 0 fixed to the S side:
///   min sum c_l z_l
///   sum w_v <= n - 1,  w_0 = 1
///   z_{l(e_ij)} >= w_i - w_j,  z_{l(e_ij)} >= w_j - w_i
///   z in [0, 1];  w binary.
inline Formulation build_part2(const LabeledGraph& g) {
    Formulation f = detail::start(ModelKind::part2, g);
    LpProblem& p = f.model.core;
    VariableMap& vars = f.vars;
    detail::add_label_vars(g, p, vars);
    for (Vertex v = 0; v < g.num_vertices(); ++v) vars.vertex_vars.push_back(p.add_variable(0.0, 0.0, 1.0));
    p.lower[vars.vertex_vars[0]] = 1.0;

    Row card;
    for (int w : vars.vertex_vars) card.terms.push_back({w, 1.0});
    card.sense = Sense::less_equal;
    card.rhs = g.num_vertices() - 1.0;
    p.add_row(card);

    for (const Edge& e : g.edges()) {
        const int z = vars.label_vars[e.label];
        const int wi = vars.vertex_vars[e.u], wj = vars.vertex_vars[e.v];
        p.add_row({{{z, 1.0}, {wi, -1.0}, {wj, 1.0}}, Sense::greater_equal, 0.0});
        p.add_row({{{z, 1.0}, {wj, -1.0}, {wi, 1.0}}, Sense::greater_equal, 0.0});
    }

    f.model.integer_vars = vars.vertex_vars;
    f.model.branch_priority = vars.vertex_vars;
    f.model.extract_solution = [graph = f.graph, w = vars.vertex_vars](std::span<const double> x) {
        return detail::cut_from_sides(*graph, x, w);
    };
    return f;
}

/// Violated triangle rows x_ij + x_jk - x_ik >= 0 (all three orientations) over
/// every vertex triple, most violated first, at most `cap` rows.
inline std::vector<Row> separate_p3(const VariableMap& vars, std::span<const double> x, int cap = 500) {
    struct Candidate {
        double violation;
        int i, j, k, form;
    };
    std::vector<Candidate> found;
    const int n = vars.n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double xij = x[vars.pair_var(i, j)];
            for (int k = j + 1; k < n; ++k) {
                const double xjk = x[vars.pair_var(j, k)];
                const double xik = x[vars.pair_var(i, k)];
                // form 0: ik is the odd pair; form 1: jk; form 2: ij.
                const double lhs[3] = {xij + xjk - xik, xij - xjk + xik, -xij + xjk + xik};
                for (int form = 0; form < 3; ++form)
                    if (-lhs[form] > 1e-6) found.push_back({-lhs[form], i, j, k, form});
            }
        }
    std::stable_sort(found.begin(), found.end(),
                     [](const Candidate& a, const Candidate& b) { return a.violation > b.violation; });
    if (static_cast<int>(found.size()) > cap) found.resize(static_cast<std::size_t>(cap));

    std::vector<Row> rows;
    rows.reserve(found.size());
    for (const Candidate& c : found) {
        const int ij = vars.pair_var(c.i, c.j), jk = vars.pair_var(c.j, c.k), ik = vars.pair_var(c.i, c.k);
        const double s[3][3] = {{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
        rows.push_back({{{ij, s[c.form][0]}, {jk, s[c.form][1]}, {ik, s[c.form][2]}}, Sense::greater_equal, 0.0});
    }
    return rows;
}

/// Clique-partitioning model over all vertex pairs (non-edges carry no label
/// and no cost):
///   min sum c_l z_l
///   z_{l(e)} >= x_e for e in E,  sum_{e in E} x_e >= 1
///   triangle rows, separated lazily
///   x binary, z in [0, 1].
inline Formulation build_p3e(const LabeledGraph& g, const FormulationOptions& options = {}) {
    Formulation f = detail::start(ModelKind::p3e, g);
    LpProblem& p = f.model.core;
    VariableMap& vars = f.vars;
    const int n = g.num_vertices();
    detail::add_label_vars(g, p, vars);
    vars.pair_vars.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) vars.pair_vars[VariableMap::pair_slot(n, i, j)] = p.add_variable(0.0, 0.0, 1.0);

    std::vector<char> is_edge(vars.pair_vars.size(), 0);
    for (const Edge& e : g.edges()) {
        const int x = vars.pair_var(e.u, e.v);
        p.add_row({{{vars.label_vars[e.label], 1.0}, {x, -1.0}}, Sense::greater_equal, 0.0});
        is_edge[VariableMap::pair_slot(n, e.u, e.v)] = 1;
    }
    Row nonempty;
    nonempty.sense = Sense::greater_equal;
    nonempty.rhs = 1.0;
    for (std::size_t s = 0; s < is_edge.size(); ++s)
        if (is_edge[s]) nonempty.terms.push_back({vars.pair_vars[s], 1.0});
    p.add_row(nonempty);

    f.model.integer_vars = vars.pair_vars;
    f.model.branch_priority = vars.pair_vars;
    const int cap = options.p3e_row_cap;
    f.model.separate_integer = [vars, cap](std::span<const double> x) { return separate_p3(vars, x, cap); };
    if (options.p3e_fractional)
        f.model.separate_fractional = [vars, cap](std::span<const double> x) { return separate_p3(vars, x, cap); };
    f.model.extract_solution = [graph = f.graph, vars](std::span<const double> x) {
        LabelSet labels;
        for (const Edge& e : graph->edges())
            if (x[vars.pair_var(e.u, e.v)] >= 0.5) labels.push_back(e.label);
        return validate_cut(*graph, labels);
    };
    return f;
}

/// Lazy tree-elimination row at an integral point: drops the labels with
/// z >= 0.5, and if the rest still connects g, finds a small spanning label set
/// with MVCA, extracts one spanning tree from it and returns
/// sum_{l in L(T)} z_l >= 1.
inline std::vector<Row> separate_tree_integer(const LabeledGraph& g, std::span<const int> label_vars,
                                              std::span<const double> z) {
    std::vector<char> removed(static_cast<std::size_t>(g.num_labels()), 0);
    LabelSet remaining;
    for (Label l = 0; l < g.num_labels(); ++l) {
        if (z[label_vars[l]] >= 0.5)
            removed[l] = 1;
        else if (!g.edges_with_label(l).empty())
            remaining.push_back(l);
    }
    if (components_with_mask(g, removed).count >= 2) return {};
    const auto spanning = mvca(g, remaining);
    if (!spanning) throw std::logic_error("remaining labels connect the graph but MVCA found no spanning set");

    std::vector<char> allowed(static_cast<std::size_t>(g.num_labels()), 0);
    for (Label l : *spanning) allowed[l] = 1;
    std::vector<char> in_tree(static_cast<std::size_t>(g.num_labels()), 0);
    DisjointSet dsu(g.num_vertices());
    for (const Edge& e : g.edges())
        if (allowed[e.label] && dsu.unite(e.u, e.v)) in_tree[e.label] = 1;

    std::vector<int> support;
    for (Label l = 0; l < g.num_labels(); ++l)
        if (in_tree[l]) support.push_back(label_vars[l]);
    return {detail::covering_row(support)};
}

/// Greedy fractional tree separation: add labels by ascending z (ties by id)
/// to an empty graph until it connects; if their z-sum is below 1 the covering
/// row over the added labels is violated.
inline std::vector<Row> separate_tree_fractional(const LabeledGraph& g, std::span<const int> label_vars,
                                                 std::span<const double> z) {
    LabelSet order;
    for (Label l = 0; l < g.num_labels(); ++l)
        if (!g.edges_with_label(l).empty()) order.push_back(l);
    std::stable_sort(order.begin(), order.end(),
                     [&](Label a, Label b) { return z[label_vars[a]] < z[label_vars[b]]; });

    DisjointSet dsu(g.num_vertices());
    std::vector<int> support;
    double sum = 0.0;
    for (Label l : order) {
        if (dsu.sets() <= 1) break;
        for (int e : g.edges_with_label(l)) dsu.unite(g.edge(e).u, g.edge(e).v);
        support.push_back(label_vars[l]);
        sum += z[label_vars[l]];
    }
    if (dsu.sets() > 1 || sum >= 1.0 - 1e-6) return {};
    std::sort(support.begin(), support.end());
    return {detail::covering_row(support)};
}

/// Tree-elimination model: binary z only, no static rows; every spanning
/// tree must lose a label, enforced by the two tree separators.
inline Formulation build_eac(const LabeledGraph& g) {
    Formulation f = detail::start(ModelKind::eac, g);
    detail::add_label_vars(g, f.model.core, f.vars);
    f.model.integer_vars = f.vars.label_vars;
    f.model.branch_priority = f.vars.label_vars;
    f.model.separate_integer = [graph = f.graph, z = f.vars.label_vars](std::span<const double> x) {
        return separate_tree_integer(*graph, z, x);
    };
    f.model.separate_fractional = [graph = f.graph, z = f.vars.label_vars](std::span<const double> x) {
        return separate_tree_fractional(*graph, z, x);
    };
    f.model.extract_solution = [graph = f.graph, z = f.vars.label_vars](std::span<const double> x) {
        return detail::cut_from_labels(*graph, x, z);
    };
    return f;
}

inline Formulation build_formulation(ModelKind kind, const LabeledGraph& g, const FormulationOptions& options = {}) {
    switch (kind) {
        case ModelKind::part: return build_part(g);
        case ModelKind::part2: return build_part2(g);
        case ModelKind::p3e: return build_p3e(g, options);
        case ModelKind::eac: return build_eac(g);
    }
    throw std::invalid_argument("unknown model kind");
}

/// The model point that encodes a feasible label cut: S is the component of
/// vertex 0 after removing the cut labels, pairs are cut when their endpoints
/// land in different components, z is the indicator of the cut.
inline std::vector<double> integral_point(const Formulation& f, std::span<const Label> cut) {
    const LabeledGraph& g = *f.graph;
    const Components comps = components_after_removal(g, cut);
    std::vector<double> x(static_cast<std::size_t>(f.model.core.num_vars()), 0.0);
    for (Label l : cut) x[f.vars.label_vars[l]] = 1.0;
    auto in_s = [&](Vertex v) { return comps.assignment[v] == comps.assignment[0]; };
    for (Vertex v = 0; v < static_cast<int>(f.vars.vertex_vars.size()); ++v) x[f.vars.vertex_vars[v]] = in_s(v) ? 1.0 : 0.0;
    for (int e = 0; e < static_cast<int>(f.vars.edge_vars.size()); ++e)
        x[f.vars.edge_vars[e]] = in_s(g.edge(e).u) != in_s(g.edge(e).v) ? 1.0 : 0.0;
    if (!f.vars.pair_vars.empty())
        for (int i = 0; i < f.vars.n; ++i)
            for (int j = i + 1; j < f.vars.n; ++j)
                x[f.vars.pair_var(i, j)] = comps.assignment[i] != comps.assignment[j] ? 1.0 : 0.0;
    return x;
}

}  // namespace mlgcp
