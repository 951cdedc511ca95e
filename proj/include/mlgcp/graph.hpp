#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace mlgcp {

using Vertex = int;
using Label = int;
using LabelSet = std::vector<Label>;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    Label label = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Union-find with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1), sets_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns true when the two sets were distinct.
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --sets_;
        return true;
    }

    int sets() const { return sets_; }
    int size() const { return static_cast<int>(parent_.size()); }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
    int sets_;
};

/// Undirected multigraph whose edges carry labels (colors), with a removal
/// cost per label. Immutable after construction.
///
/// Construction validates ids and costs, rejects self-loops and drops exact
/// duplicate (u, v, label) triples; `duplicates_removed()` reports how many.
class LabeledGraph {
public:
    LabeledGraph() = default;

    LabeledGraph(int n, std::vector<Edge> edges, int num_labels, std::vector<double> label_costs = {})
        : n_(n), num_labels_(num_labels), costs_(std::move(label_costs)) {
        if (n < 0) throw std::invalid_argument("negative vertex count");
        if (num_labels < 0) throw std::invalid_argument("negative label count");
        if (costs_.empty()) costs_.assign(static_cast<std::size_t>(num_labels), 1.0);
        if (static_cast<int>(costs_.size()) != num_labels)
            throw std::invalid_argument("label cost vector must have one entry per label");
        for (double c : costs_)
            if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("label costs must be finite and > 0");

        edges_.reserve(edges.size());
        std::vector<Edge> seen;
        seen.reserve(edges.size());
        for (const Edge& raw : edges) {
            if (raw.u < 0 || raw.u >= n || raw.v < 0 || raw.v >= n)
                throw std::invalid_argument("edge endpoint out of range");
            if (raw.label < 0 || raw.label >= num_labels) throw std::invalid_argument("edge label out of range");
            if (raw.u == raw.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(raw.u));
            Edge key{std::min(raw.u, raw.v), std::max(raw.u, raw.v), raw.label};
            seen.push_back(key);
        }
        // Keep the first occurrence of every (u, v, label) triple, in input order.
        std::vector<std::size_t> order(seen.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const Edge& x = seen[a];
            const Edge& y = seen[b];
            return std::tie(x.u, x.v, x.label) < std::tie(y.u, y.v, y.label);
        });
        std::vector<char> keep(seen.size(), 1);
        for (std::size_t k = 1; k < order.size(); ++k)
            if (seen[order[k]] == seen[order[k - 1]]) keep[order[k]] = 0;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (keep[k])
                edges_.push_back(edges[k]);
            else
                ++duplicates_;
        }

        incident_.assign(static_cast<std::size_t>(n), {});
        label_edges_.assign(static_cast<std::size_t>(num_labels), {});
        for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
            incident_[edges_[e].u].push_back(e);
            incident_[edges_[e].v].push_back(e);
            label_edges_[edges_[e].label].push_back(e);
        }
        integral_costs_ = std::all_of(costs_.begin(), costs_.end(), [](double c) { return c == std::floor(c); });
    }

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_labels() const { return num_labels_; }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }
    std::span<const double> label_costs() const { return costs_; }
    double cost(Label l) const { return costs_[l]; }

    // Edge ids incident to v.
    std::span<const int> incident(Vertex v) const { return incident_[v]; }
    // Edge ids carrying label l.
    std::span<const int> edges_with_label(Label l) const { return label_edges_[l]; }

    Vertex other_end(int e, Vertex v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }

    bool unicost() const {
        return std::all_of(costs_.begin(), costs_.end(), [](double c) { return c == 1.0; });
    }
    // All costs are integers, so every objective value of a label set is integral.
    bool integral_costs() const { return integral_costs_; }

    int duplicates_removed() const { return duplicates_; }

    LabelSet unused_labels() const {
        LabelSet out;
        for (Label l = 0; l < num_labels_; ++l)
            if (label_edges_[l].empty()) out.push_back(l);
        return out;
    }

private:
    int n_ = 0;
    int num_labels_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> costs_;
    std::vector<std::vector<int>> incident_;
    std::vector<std::vector<int>> label_edges_;
    int duplicates_ = 0;
    bool integral_costs_ = true;
};

/// A label subset L' together with its cost and the number of components of
/// the graph that remains after deleting every edge whose label is in L'.
struct CutSolution {
    LabelSet labels;
    double cost = 0.0;
    int components_after = 0;

    bool feasible() const { return components_after >= 2; }
};

/// Two-sided vertex partition; `side[v]` is false for the left side and true
/// for the right side.
struct VertexPartition {
    std::vector<char> side;

    int right_count() const { return static_cast<int>(std::count(side.begin(), side.end(), char{1})); }
    int left_count() const { return static_cast<int>(side.size()) - right_count(); }
    bool proper() const { return left_count() > 0 && right_count() > 0; }
};

struct Components {
    int count = 0;
    std::vector<int> assignment;  // dense component id per vertex, numbered by first vertex
};

inline std::vector<char> label_mask(const LabeledGraph& g, std::span<const Label> labels) {
    std::vector<char> mask(static_cast<std::size_t>(g.num_labels()), 0);
    for (Label l : labels) {
        if (l < 0 || l >= g.num_labels()) throw std::out_of_range("label id " + std::to_string(l) + " out of range");
        mask[l] = 1;
    }
    return mask;
}

inline Components components_with_mask(const LabeledGraph& g, std::span<const char> removed) {
    DisjointSet dsu(g.num_vertices());
    for (const Edge& e : g.edges())
        if (!removed[e.label]) dsu.unite(e.u, e.v);
    Components out;
    out.count = dsu.sets();
    out.assignment.assign(static_cast<std::size_t>(g.num_vertices()), -1);
    std::vector<int> id(static_cast<std::size_t>(g.num_vertices()), -1);
    int next = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        int r = dsu.find(v);
        if (id[r] < 0) id[r] = next++;
        out.assignment[v] = id[r];
    }
    return out;
}

inline Components components_after_removal(const LabeledGraph& g, std::span<const Label> removed) {
    auto mask = label_mask(g, removed);
    return components_with_mask(g, mask);
}

inline bool is_connected(const LabeledGraph& g) {
    std::vector<char> none(static_cast<std::size_t>(g.num_labels()), 0);
    return components_with_mask(g, none).count <= 1;
}

inline LabelSet canonical_labels(LabelSet labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

inline CutSolution validate_cut(const LabeledGraph& g, std::span<const Label> labels) {
    CutSolution out;
    out.labels = canonical_labels(LabelSet(labels.begin(), labels.end()));
    auto mask = label_mask(g, out.labels);
    for (Label l : out.labels) out.cost += g.cost(l);
    out.components_after = components_with_mask(g, mask).count;
    return out;
}

inline LabelSet crossing_labels(const LabeledGraph& g, const VertexPartition& p) {
    if (static_cast<int>(p.side.size()) != g.num_vertices())
        throw std::invalid_argument("partition size does not match vertex count");
    if (!p.proper()) throw std::invalid_argument("partition has an empty side");
    std::vector<char> used(static_cast<std::size_t>(g.num_labels()), 0);
    for (const Edge& e : g.edges())
        if (p.side[e.u] != p.side[e.v]) used[e.label] = 1;
    LabelSet out;
    for (Label l = 0; l < g.num_labels(); ++l)
        if (used[l]) out.push_back(l);
    return out;
}

}  // namespace mlgcp
