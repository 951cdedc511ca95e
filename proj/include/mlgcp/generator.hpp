#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mlgcp/graph.hpp"
#include "mlgcp/random.hpp"

namespace mlgcp {

enum class CostScenario { unicost, random, normal };

inline std::string to_string(CostScenario s) {
    switch (s) {
        case CostScenario::unicost: return "unicost";
        case CostScenario::random: return "random";
        case CostScenario::normal: return "normal";
    }
    return "?";
}

inline CostScenario parse_scenario(const std::string& s) {
    if (s == "unicost") return CostScenario::unicost;
    if (s == "random") return CostScenario::random;
    if (s == "normal") return CostScenario::normal;
    throw std::invalid_argument("unknown cost scenario `" + s + "`");
}

struct InstanceSpec {
    int n = 2;
    int num_labels = 1;
    double density = 1.0;
    CostScenario scenario = CostScenario::unicost;
    std::uint64_t seed = 0;
};

inline constexpr double kMinRandomCost = 0.01;
inline constexpr double kMaxRandomCost = 0.99;
inline constexpr double kNormalCostMean = 0.5;
inline constexpr double kNormalCostVariance = 0.20;

inline int target_edge_count(int n, double density) {
    return static_cast<int>(std::llround(density * n * (n - 1) / 2.0));
}

namespace detail {

// Decodes a uniformly random Pruefer sequence into the edges of a uniformly
// random labelled tree on n vertices.
inline std::vector<std::pair<int, int>> random_tree(int n, RandomStream& rng) {
    std::vector<std::pair<int, int>> tree;
    if (n < 2) return tree;
    if (n == 2) return {{0, 1}};
    std::vector<int> code(static_cast<std::size_t>(n - 2));
    for (int& c : code) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (int c : code) ++degree[c];
    int ptr = 0;
    while (degree[ptr] != 1) ++ptr;
    int leaf = ptr;
    for (int c : code) {
        tree.emplace_back(std::min(leaf, c), std::max(leaf, c));
        if (--degree[c] == 1 && c < ptr) {
            leaf = c;
        } else {
            ++ptr;
            while (degree[ptr] != 1) ++ptr;
            leaf = ptr;
        }
    }
    tree.emplace_back(std::min(leaf, n - 1), std::max(leaf, n - 1));
    return tree;
}

}  // namespace detail

/// Random connected edge-labeled graph.
///
/// Topology: a uniform random spanning tree (Pruefer decoding), then the
/// remaining pairs sampled uniformly without replacement until the edge count
/// reaches round(d * n(n-1)/2). Labels: every label is first placed on one
/// distinct random edge, the rest are uniform. Edges are emitted sorted by
/// (u, v). Topology, labels and costs use independent substreams 1, 2, 3 of
/// the spec seed, so the output is a pure function of the spec.
inline LabeledGraph generate(const InstanceSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("generator needs n >= 2");
    if (spec.num_labels < 1) throw std::invalid_argument("generator needs at least one label");
    if (!(spec.density > 0.0 && spec.density <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
    const int n = spec.n;
    const int m = target_edge_count(n, spec.density);
    if (m < n - 1)
        throw std::invalid_argument("density too low: " + std::to_string(m) + " edges cannot connect " +
                                    std::to_string(n) + " vertices");
    if (spec.num_labels > m)
        throw std::invalid_argument("cannot use " + std::to_string(spec.num_labels) + " labels on " +
                                    std::to_string(m) + " edges");

    RandomStream topo(spec.seed, 1);
    RandomStream labels(spec.seed, 2);
    RandomStream costs(spec.seed, 3);

    std::vector<char> taken(static_cast<std::size_t>(n) * n, 0);
    std::vector<std::pair<int, int>> pairs = detail::random_tree(n, topo);
    for (auto [u, v] : pairs) taken[static_cast<std::size_t>(u) * n + v] = 1;

    std::vector<std::pair<int, int>> rest;
    rest.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!taken[static_cast<std::size_t>(u) * n + v]) rest.emplace_back(u, v);
    const int extra = m - (n - 1);
    for (int k = 0; k < extra; ++k) {
        auto j = static_cast<std::size_t>(k) + topo.below(rest.size() - static_cast<std::size_t>(k));
        std::swap(rest[static_cast<std::size_t>(k)], rest[j]);
        pairs.push_back(rest[static_cast<std::size_t>(k)]);
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<int> edge_label(pairs.size(), -1);
    std::vector<std::size_t> slots(pairs.size());
    for (std::size_t k = 0; k < slots.size(); ++k) slots[k] = k;
    for (int l = 0; l < spec.num_labels; ++l) {
        auto j = static_cast<std::size_t>(l) + labels.below(slots.size() - static_cast<std::size_t>(l));
        std::swap(slots[static_cast<std::size_t>(l)], slots[j]);
        edge_label[slots[static_cast<std::size_t>(l)]] = l;
    }
    for (int& l : edge_label)
        if (l < 0) l = static_cast<int>(labels.below(static_cast<std::uint64_t>(spec.num_labels)));

    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) edges.push_back({pairs[k].first, pairs[k].second, edge_label[k]});

    std::vector<double> label_costs(static_cast<std::size_t>(spec.num_labels), 1.0);
    switch (spec.scenario) {
        case CostScenario::unicost: break;
        case CostScenario::random:
            for (double& c : label_costs) c = costs.uniform(kMinRandomCost, kMaxRandomCost);
            break;
        case CostScenario::normal: {
            const double sd = std::sqrt(kNormalCostVariance);
            for (double& c : label_costs) {
                double x = costs.normal(kNormalCostMean, sd);
                for (int attempt = 1; attempt < 100 && (x < kMinRandomCost || x > kMaxRandomCost); ++attempt)
                    x = costs.normal(kNormalCostMean, sd);
                c = std::clamp(x, kMinRandomCost, kMaxRandomCost);
            }
            break;
        }
    }
    return LabeledGraph(n, std::move(edges), spec.num_labels, std::move(label_costs));
}

}  // namespace mlgcp
