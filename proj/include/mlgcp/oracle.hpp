#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlgcp/graph.hpp"

namespace mlgcp {

inline constexpr int kDefaultOracleCap = 22;

namespace detail {

inline int components_for_mask(const LabeledGraph& g, std::uint32_t removed) {
    DisjointSet dsu(g.num_vertices());
    for (const Edge& e : g.edges())
        if (!((removed >> e.label) & 1u)) dsu.unite(e.u, e.v);
    return dsu.sets();
}

inline LabelSet labels_of(std::uint32_t mask, int num_labels) {
    LabelSet out;
    for (Label l = 0; l < num_labels; ++l)
        if ((mask >> l) & 1u) out.push_back(l);
    return out;
}

inline void check_cap(const LabeledGraph& g, int cap) {
    if (g.num_labels() > cap || g.num_labels() > 31)
        throw std::invalid_argument("brute force limited to " + std::to_string(cap) + " labels, instance has " +
                                    std::to_string(g.num_labels()));
}

}  // namespace detail

/// Exact minimum label cut by exhaustion.
///
/// Unicost: subsets in order of cardinality, lexicographic within a level; the
/// first disconnecting subset is returned. Weighted: every subset is scanned
/// and the cheapest wins, ties to the lexicographically smallest label list.
inline CutSolution brute_force(const LabeledGraph& g, int max_labels = kDefaultOracleCap) {
    detail::check_cap(g, max_labels);
    if (g.num_vertices() < 2) throw std::invalid_argument("a cut needs at least two vertices");
    const int L = g.num_labels();
    if (detail::components_for_mask(g, 0) >= 2) return validate_cut(g, LabelSet{});

    if (g.unicost()) {
        for (int k = 1; k <= L; ++k) {
            std::vector<int> pick(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) pick[i] = i;
            for (;;) {
                std::uint32_t mask = 0;
                for (int l : pick) mask |= 1u << l;
                if (detail::components_for_mask(g, mask) >= 2) return validate_cut(g, detail::labels_of(mask, L));
                int i = k - 1;
                while (i >= 0 && pick[i] == L - k + i) --i;
                if (i < 0) break;
                ++pick[i];
                for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
        throw std::logic_error("removing every label must disconnect a graph with two or more vertices");
    }

    double best = std::numeric_limits<double>::infinity();
    LabelSet best_labels;
    const std::uint32_t end = L == 0 ? 1u : (1u << L);
    for (std::uint32_t mask = 1; mask < end; ++mask) {
        double cost = 0.0;
        for (Label l = 0; l < L; ++l)
            if ((mask >> l) & 1u) cost += g.cost(l);
        if (cost > best) continue;
        if (detail::components_for_mask(g, mask) < 2) continue;
        LabelSet labels = detail::labels_of(mask, L);
        if (cost < best || labels < best_labels) {
            best = cost;
            best_labels = std::move(labels);
        }
    }
    return validate_cut(g, best_labels);
}

/// Every label subset whose removal disconnects g.
inline std::vector<LabelSet> enumerate_feasible_cuts(const LabeledGraph& g, int max_labels = kDefaultOracleCap) {
    detail::check_cap(g, max_labels);
    std::vector<LabelSet> out;
    const std::uint32_t end = 1u << g.num_labels();
    for (std::uint32_t mask = 0; mask < end; ++mask)
        if (detail::components_for_mask(g, mask) >= 2) out.push_back(detail::labels_of(mask, g.num_labels()));
    return out;
}

}  // namespace mlgcp
