// Builds a small labeled graph in code, then solves it with every method.
//
//   0 --a-- 1 --c-- 2
//   |       |       |
//   b       d       b
//   |       |       |
//   3 --a-- 4 --c-- 5

#include <iomanip>
#include <iostream>

#include "mlgcp.hpp"

int main() {
    using namespace mlgcp;
    enum : Label { a, b, c, d };
    const LabeledGraph g(6,
                         {{0, 1, a}, {1, 2, c}, {0, 3, b}, {1, 4, d}, {2, 5, b}, {3, 4, a}, {4, 5, c}},
                         4, {3.0, 2.0, 1.5, 0.5});

    for (Method m : {Method::bf, Method::ls, Method::part, Method::part2, Method::p3e, Method::eac}) {
        SolveOptions options;
        options.method = m;
        options.limits.time_limit_s = 10.0;
        const SolveReport r = solve_instance(g, options);
        std::cout << std::setw(6) << to_string(m) << "  cost " << r.best->cost << "  labels {";
        for (std::size_t k = 0; k < r.best->labels.size(); ++k) std::cout << (k ? "," : "") << "abcd"[r.best->labels[k]];
        std::cout << "}  " << to_string(r.status) << "  nodes " << r.nodes << "  cuts " << r.cuts << '\n';
    }
}
