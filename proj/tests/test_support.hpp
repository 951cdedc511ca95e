#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's connectivity, oracle or solver code.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "mlgcp/generator.hpp"
#include "mlgcp/graph.hpp"

namespace mlgcp::testing {

inline LabeledGraph single_edge() { return LabeledGraph(2, {{0, 1, 0}}, 1); }

// Triangle with distinct labels a=0 on (0,1), b=1 on (1,2), c=2 on (0,2).
inline LabeledGraph triangle(std::vector<double> costs = {}) {
    return LabeledGraph(3, {{0, 1, 0}, {1, 2, 1}, {0, 2, 2}}, 3, std::move(costs));
}

// Component count by breadth-first search over edges whose label is not in
// the removed mask.
inline int bfs_components(const LabeledGraph& g, std::uint64_t removed) {
    const int n = g.num_vertices();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const Edge& e : g.edges())
        if (!((removed >> e.label) & 1u)) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    int count = 0;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++count;
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
    }
    return count;
}

inline std::uint64_t mask_of(const LabelSet& labels) {
    std::uint64_t m = 0;
    for (Label l : labels) m |= std::uint64_t{1} << l;
    return m;
}

inline double mask_cost(const LabeledGraph& g, std::uint64_t mask) {
    double c = 0.0;
    for (Label l = 0; l < g.num_labels(); ++l)
        if ((mask >> l) & 1u) c += g.cost(l);
    return c;
}

// Minimum cost over every disconnecting label subset.
inline double exhaustive_optimum(const LabeledGraph& g) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.num_labels()); ++m)
        if (bfs_components(g, m) >= 2) best = std::min(best, mask_cost(g, m));
    return best;
}

inline std::vector<std::uint64_t> disconnecting_masks(const LabeledGraph& g) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.num_labels()); ++m)
        if (bfs_components(g, m) >= 2) out.push_back(m);
    return out;
}

// Random connected instance with n in [n_lo, n_hi], |L| in [l_lo, l_hi]; the
// density is raised until a spanning tree fits.
inline LabeledGraph random_instance(RandomStream& rng, int n_lo, int n_hi, int l_lo, int l_hi, bool weighted,
                                    double density = -1.0) {
    InstanceSpec s;
    s.n = n_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_hi - n_lo + 1)));
    const double ds[] = {0.2, 0.5, 0.8};
    s.density = density > 0 ? density : ds[rng.below(3)];
    while (target_edge_count(s.n, s.density) < s.n - 1) s.density += 0.05;
    const int m = target_edge_count(s.n, s.density);
    s.num_labels = std::min(m, l_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(l_hi - l_lo + 1))));
    s.scenario = weighted ? CostScenario::random : CostScenario::unicost;
    s.seed = rng.next();
    return generate(s);
}

}  // namespace mlgcp::testing
