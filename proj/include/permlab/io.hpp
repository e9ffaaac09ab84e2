#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/graph.hpp"

namespace permlab {

// Input formats:
//   dense     one row per line, characters '0'/'1', optional whitespace
//   edgelist  header "bipartite <n> <m>", then m lines "<left> <right>" (0-based)
enum class GraphFormat { Dense, EdgeList };

namespace detail {

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

inline bool blank(const std::string& s) {
    return s.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace detail

inline BipartiteGraph parse_dense_matrix(const std::string& text) {
    std::vector<std::vector<int>> rows;
    for (const std::string& line : detail::split_lines(text)) {
        if (detail::blank(line)) continue;
        std::vector<int> row;
        for (char c : line) {
            if (c == ' ' || c == '\t') continue;
            if (c == '0') row.push_back(0);
            else if (c == '1') row.push_back(1);
            else throw ParseError(std::string("dense matrix: unexpected character '") + c + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("dense matrix: empty input");
    try {
        return BipartiteGraph::from_adjacency_matrix(rows);
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("dense matrix: ") + e.what());
    }
}

inline BipartiteGraph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    long long n = -1, m = -1;
    if (!(in >> magic >> n >> m) || magic != "bipartite")
        throw ParseError("edge list: expected header \"bipartite <n> <m>\"");
    if (n < 0 || m < 0) throw ParseError("edge list: negative n or m in header");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        long long u, v;
        if (!(in >> u >> v))
            throw ParseError("edge list: expected " + std::to_string(m) + " edges, got " +
                             std::to_string(i));
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    std::string extra;
    if (in >> extra) throw ParseError("edge list: trailing content after " + std::to_string(m) + " edges");
    try {
        return BipartiteGraph::from_edges(static_cast<int>(n), std::move(edges));
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("edge list: ") + e.what());
    }
}

// Sniffs the format: an edge list starts with the token "bipartite".
inline BipartiteGraph parse_graph(const std::string& text, GraphFormat* format_out = nullptr) {
    std::istringstream in(text);
    std::string first;
    in >> first;
    const GraphFormat fmt = (first == "bipartite") ? GraphFormat::EdgeList : GraphFormat::Dense;
    if (format_out) *format_out = fmt;
    return fmt == GraphFormat::EdgeList ? parse_edge_list(text) : parse_dense_matrix(text);
}

inline std::string emit_dense_matrix(const BipartiteGraph& g) {
    std::string out;
    const auto rows = g.to_adjacency_matrix();
    for (const auto& row : rows) {
        for (int v : row) out.push_back(v ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

inline std::string emit_edge_list(const BipartiteGraph& g) {
    std::string out = "bipartite " + std::to_string(g.part_size()) + " " +
                      std::to_string(g.edge_count()) + "\n";
    for (auto [l, r] : g.edges()) out += std::to_string(l) + " " + std::to_string(r) + "\n";
    return out;
}

// FNV-1a 64-bit digest of raw input bytes, reported in result documents.
inline std::string input_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace permlab
