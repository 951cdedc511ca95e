#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mlgcp/graph.hpp"
#include "mlgcp/random.hpp"

namespace mlgcp {

/// Maximum vertex covering greedy: starting from the empty graph, repeatedly
/// add the allowed label whose edges leave the fewest components (ties: fewer
/// edges, then lower id) until the graph is connected. Returns nullopt when
/// the allowed labels cannot connect g.
inline std::optional<LabelSet> mvca(const LabeledGraph& g, std::span<const Label> allowed) {
    LabelSet candidates = canonical_labels(LabelSet(allowed.begin(), allowed.end()));
    for (Label l : candidates)
        if (l < 0 || l >= g.num_labels()) throw std::out_of_range("label id out of range");

    DisjointSet current(g.num_vertices());
    LabelSet picked;
    std::vector<char> used(candidates.size(), 0);
    while (current.sets() > 1) {
        int best = -1;
        int best_sets = current.sets();
        int best_edges = 0;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            if (used[k]) continue;
            const Label l = candidates[k];
            DisjointSet trial = current;
            for (int e : g.edges_with_label(l)) trial.unite(g.edge(e).u, g.edge(e).v);
            const int edges = static_cast<int>(g.edges_with_label(l).size());
            if (trial.sets() < best_sets || (best >= 0 && trial.sets() == best_sets && edges < best_edges)) {
                best = static_cast<int>(k);
                best_sets = trial.sets();
                best_edges = edges;
            }
        }
        if (best < 0) return std::nullopt;
        used[best] = 1;
        picked.push_back(candidates[best]);
        for (int e : g.edges_with_label(candidates[best])) current.unite(g.edge(e).u, g.edge(e).v);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

/// Per-label count of edges crossing a bipartition.
class ColorCounter {
public:
    ColorCounter() = default;

    ColorCounter(const LabeledGraph& g, const VertexPartition& p) : count_(static_cast<std::size_t>(g.num_labels()), 0) {
        for (const Edge& e : g.edges())
            if (p.side[e.u] != p.side[e.v]) bump(e.label, +1);
    }

    int count(Label l) const { return count_[l]; }
    // Number of distinct crossing labels, |L^G|.
    int total() const { return total_; }

    double cost(const LabeledGraph& g) const {
        double c = 0.0;
        for (Label l = 0; l < static_cast<Label>(count_.size()); ++l)
            if (count_[l] > 0) c += g.cost(l);
        return c;
    }

    LabelSet labels() const {
        LabelSet out;
        for (Label l = 0; l < static_cast<Label>(count_.size()); ++l)
            if (count_[l] > 0) out.push_back(l);
        return out;
    }

    void bump(Label l, int delta) {
        const bool was = count_[l] > 0;
        count_[l] += delta;
        if (count_[l] < 0) throw std::logic_error("color counter went negative");
        const bool now = count_[l] > 0;
        total_ += static_cast<int>(now) - static_cast<int>(was);
    }

    friend bool operator==(const ColorCounter&, const ColorCounter&) = default;

private:
    std::vector<int> count_;
    int total_ = 0;
};

namespace detail {

// Toggles the crossing status of every edge at v, skipping edges whose other
// end is `skip`. Uses the sides before any flip.
inline void toggle_incident(const LabeledGraph& g, ColorCounter& c, const VertexPartition& p, Vertex v, Vertex skip) {
    for (int e : g.incident(v)) {
        const Vertex w = g.other_end(e, v);
        if (w == skip) continue;
        c.bump(g.edge(e).label, p.side[v] != p.side[w] ? -1 : +1);
    }
}

}  // namespace detail

/// Moves v to the other side. Rejected (nullopt) when that would empty a side;
/// otherwise returns the new cut cost.
inline std::optional<double> apply_change_partition(const LabeledGraph& g, ColorCounter& c, VertexPartition& p,
                                                    Vertex v) {
    const int own = p.side[v] ? p.right_count() : p.left_count();
    if (own <= 1) return std::nullopt;
    detail::toggle_incident(g, c, p, v, -1);
    p.side[v] = !p.side[v];
    return c.cost(g);
}

/// Swaps u and v, which must lie on opposite sides. Edges between u and v stay
/// crossing and are not touched.
inline std::optional<double> apply_interchange(const LabeledGraph& g, ColorCounter& c, VertexPartition& p, Vertex u,
                                               Vertex v) {
    if (u == v || p.side[u] == p.side[v]) return std::nullopt;
    detail::toggle_incident(g, c, p, u, v);
    detail::toggle_incident(g, c, p, v, u);
    p.side[u] = !p.side[u];
    p.side[v] = !p.side[v];
    return c.cost(g);
}

/// Evaluates move deltas without mutating the counter.
class MoveEvaluator {
public:
    explicit MoveEvaluator(const LabeledGraph& g) : g_(&g), delta_(static_cast<std::size_t>(g.num_labels()), 0) {}

    // Cost change of moving v (and, when other >= 0, swapping it with other).
    double delta(const ColorCounter& c, const VertexPartition& p, Vertex v, Vertex other = -1) {
        collect(p, v, other);
        if (other >= 0) collect(p, other, v);
        double d = 0.0;
        for (Label l : touched_) {
            const int before = c.count(l);
            const int after = before + delta_[l];
            if (before > 0 && after == 0) d -= g_->cost(l);
            if (before == 0 && after > 0) d += g_->cost(l);
            delta_[l] = 0;
        }
        touched_.clear();
        return d;
    }

private:
    void collect(const VertexPartition& p, Vertex v, Vertex skip) {
        for (int e : g_->incident(v)) {
            const Vertex w = g_->other_end(e, v);
            if (w == skip) continue;
            const Label l = g_->edge(e).label;
            if (delta_[l] == 0) touched_.push_back(l);
            delta_[l] += p.side[v] != p.side[w] ? -1 : +1;
        }
    }

    const LabeledGraph* g_;
    std::vector<int> delta_;
    LabelSet touched_;
};

inline int default_restarts(int n) {
    const int bits = n <= 1 ? 1 : std::bit_width(static_cast<unsigned>(n - 1));
    return 10 * std::max(1, bits);
}

struct LocalSearchOptions {
    int restarts = 0;  // 0 selects 10 * ceil(log2 n)
    std::uint64_t seed = 0;
    // Called after every accepted move.
    std::function<void(const VertexPartition&, const ColorCounter&)> on_move;
};

struct LocalSearchResult {
    CutSolution best;
    double best_initial_cost = 0.0;
    long long moves = 0;
    std::vector<double> incumbent_trace;  // best cost after each restart
};

/// Multistart best-improvement descent over the change-partition and
/// interchange-partition neighborhoods, minimizing the total cost of the
/// labels that cross the bipartition.
inline LocalSearchResult local_search_run(const LabeledGraph& g, const LocalSearchOptions& options = {}) {
    const int n = g.num_vertices();
    if (n < 2) throw std::invalid_argument("local search needs at least two vertices");
    LocalSearchResult out;
    if (!is_connected(g)) {
        out.best = validate_cut(g, LabelSet{});
        return out;
    }

    const int restarts = options.restarts > 0 ? options.restarts : default_restarts(n);
    RandomStream rng(options.seed, 11);
    MoveEvaluator eval(g);
    double best_cost = std::numeric_limits<double>::infinity();
    double best_initial = std::numeric_limits<double>::infinity();
    LabelSet best_labels;

    for (int r = 0; r < restarts; ++r) {
        VertexPartition p;
        p.side.assign(static_cast<std::size_t>(n), 0);
        do {
            for (auto& s : p.side) s = rng.coin() ? 1 : 0;
        } while (!p.proper());
        ColorCounter counter(g, p);
        double cost = counter.cost(g);
        best_initial = std::min(best_initial, cost);

        for (;;) {
            double best_delta = -1e-12;
            Vertex mv = -1, mu = -1;
            const int left = p.left_count(), right = p.right_count();
            for (Vertex v = 0; v < n; ++v) {
                if ((p.side[v] ? right : left) <= 1) continue;
                const double d = eval.delta(counter, p, v);
                if (d < best_delta) {
                    best_delta = d;
                    mv = v;
                    mu = -1;
                }
            }
            for (Vertex u = 0; u < n; ++u) {
                if (p.side[u]) continue;
                for (Vertex v = 0; v < n; ++v) {
                    if (!p.side[v]) continue;
                    const double d = eval.delta(counter, p, u, v);
                    if (d < best_delta) {
                        best_delta = d;
                        mv = u;
                        mu = v;
                    }
                }
            }
            if (mv < 0) break;
            const auto next = mu < 0 ? apply_change_partition(g, counter, p, mv) : apply_interchange(g, counter, p, mv, mu);
            if (!next) throw std::logic_error("local search selected an illegal move");
            cost = *next;
            ++out.moves;
            if (options.on_move) options.on_move(p, counter);
        }
        if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best_labels = counter.labels();
        }
        out.incumbent_trace.push_back(best_cost);
    }
    out.best = validate_cut(g, best_labels);
    out.best_initial_cost = best_initial;
    return out;
}

inline CutSolution local_search(const LabeledGraph& g, int restarts = 0, std::uint64_t seed = 0) {
    LocalSearchOptions options;
    options.restarts = restarts;
    options.seed = seed;
    return local_search_run(g, options).best;
}

}  // namespace mlgcp
