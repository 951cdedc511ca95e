#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlgcp/graph.hpp"

// Text formats.
//
// Instance:
//     n m L
//     u v label          (m lines, 0-based ids)
//     costs c_0 ... c_{L-1}   (optional; all costs default to 1)
//
// Solution:
//     cost k
//     l_1 ... l_k

namespace mlgcp {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline bool parse_int(std::string_view s, long long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool parse_double(std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// Shortest representation that reads back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace detail

inline LabeledGraph parse_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_content = [&](std::vector<std::string>& toks) {
        while (std::getline(in, line)) {
            ++line_no;
            toks = detail::split_ws(line);
            if (!toks.empty()) return true;
        }
        return false;
    };

    std::vector<std::string> toks;
    if (!next_content(toks)) throw ParseError(line_no, "missing header `n m L`");
    long long n = 0, m = 0, num_labels = 0;
    if (toks.size() != 3 || !detail::parse_int(toks[0], n) || !detail::parse_int(toks[1], m) ||
        !detail::parse_int(toks[2], num_labels) || n < 0 || m < 0 || num_labels < 0)
        throw ParseError(line_no, "malformed header, expected `n m L` with nonnegative integers");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long k = 0; k < m; ++k) {
        if (!next_content(toks)) throw ParseError(line_no, "expected " + std::to_string(m) + " edges, found " + std::to_string(k));
        long long u = 0, v = 0, l = 0;
        if (toks.size() != 3 || !detail::parse_int(toks[0], u) || !detail::parse_int(toks[1], v) ||
            !detail::parse_int(toks[2], l))
            throw ParseError(line_no, "malformed edge, expected `u v label`");
        if (u < 0 || u >= n || v < 0 || v >= n) throw ParseError(line_no, "vertex id out of range");
        if (l < 0 || l >= num_labels) throw ParseError(line_no, "label id out of range");
        if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), static_cast<Label>(l)});
    }

    std::vector<double> costs;
    bool have_costs = false;
    while (next_content(toks)) {
        if (toks[0] != "costs") throw ParseError(line_no, "unexpected content after edge list");
        if (have_costs) throw ParseError(line_no, "duplicate cost section");
        have_costs = true;
        if (static_cast<long long>(toks.size()) != num_labels + 1)
            throw ParseError(line_no, "cost section must list exactly " + std::to_string(num_labels) + " values");
        for (std::size_t k = 1; k < toks.size(); ++k) {
            double c = 0.0;
            if (!detail::parse_double(toks[k], c)) throw ParseError(line_no, "malformed cost `" + toks[k] + "`");
            if (!(c > 0.0) || !std::isfinite(c)) throw ParseError(line_no, "label costs must be finite and > 0");
            costs.push_back(c);
        }
    }
    return LabeledGraph(static_cast<int>(n), std::move(edges), static_cast<int>(num_labels), std::move(costs));
}

inline LabeledGraph parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline LabeledGraph read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file `" + path + "`");
    return parse_instance(in);
}

inline void write_instance(std::ostream& out, const LabeledGraph& g) {
    out << g.num_vertices() << ' ' << g.num_edges() << ' ' << g.num_labels() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.label << '\n';
    if (!g.unicost()) {
        out << "costs";
        for (double c : g.label_costs()) out << ' ' << detail::format_double(c);
        out << '\n';
    }
}

inline std::string serialize_instance(const LabeledGraph& g) {
    std::ostringstream out;
    write_instance(out, g);
    return out.str();
}

struct SolutionFile {
    double claimed_cost = 0.0;
    LabelSet labels;
};

inline void write_solution(std::ostream& out, const CutSolution& s) {
    out << detail::format_double(s.cost) << ' ' << s.labels.size() << '\n';
    for (std::size_t k = 0; k < s.labels.size(); ++k) out << (k ? " " : "") << s.labels[k];
    out << '\n';
}

inline SolutionFile parse_solution(std::istream& in) {
    SolutionFile out;
    std::string tok;
    if (!(in >> tok) || !detail::parse_double(tok, out.claimed_cost)) throw ParseError(1, "malformed solution header");
    long long k = 0;
    if (!(in >> tok) || !detail::parse_int(tok, k) || k < 0) throw ParseError(1, "malformed label count");
    for (long long i = 0; i < k; ++i) {
        long long l = 0;
        if (!(in >> tok) || !detail::parse_int(tok, l)) throw ParseError(2, "expected " + std::to_string(k) + " label ids");
        out.labels.push_back(static_cast<Label>(l));
    }
    if (in >> tok) throw ParseError(2, "trailing content after label list");
    return out;
}

inline SolutionFile read_solution_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solution file `" + path + "`");
    return parse_solution(in);
}

}  // namespace mlgcp
