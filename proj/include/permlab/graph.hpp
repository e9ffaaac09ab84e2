#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "permlab/errors.hpp"

namespace permlab {

enum class Side { Left, Right };

inline Side other_side(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

struct VertexId {
    Side side;
    int index;

    friend bool operator==(const VertexId&, const VertexId&) = default;
    friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct DegreeProfile {
    int max_degree = 0;
    std::vector<int> left_degrees;
    std::vector<int> right_degrees;
};

// Multi-word bitmask over vertex indices of one side.
struct IndexMask {
    std::vector<std::uint64_t> words;

    explicit IndexMask(int n = 0) : words((n + 63) / 64, 0) {}

    void set(int i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(int i) const { return (words[i >> 6] >> (i & 63)) & 1; }

    void or_with(std::span<const std::uint64_t> other) {
        for (std::size_t w = 0; w < words.size(); ++w) words[w] |= other[w];
    }

    int count() const {
        int c = 0;
        for (std::uint64_t w : words) c += std::popcount(w);
        return c;
    }

    std::vector<int> to_indices() const {
        std::vector<int> out;
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t x = words[w];
            while (x) {
                out.push_back(static_cast<int>(w * 64) + std::countr_zero(x));
                x &= x - 1;
            }
        }
        return out;
    }
};

// Balanced bipartite graph with part size n. Immutable after construction:
// all "mutating" operations return new graphs. Adjacency is kept both as
// sorted neighbor lists and as per-vertex bitmask rows (used by the exact
// permanent and by subset neighborhood queries).
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    static BipartiteGraph from_edges(int n, std::vector<std::pair<int, int>> edges) {
        if (n < 0) throw PreconditionError("part size must be nonnegative");
        std::sort(edges.begin(), edges.end());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            auto [l, r] = edges[i];
            if (l < 0 || l >= n || r < 0 || r >= n)
                throw PreconditionError("edge endpoint out of range: (" + std::to_string(l) +
                                        ", " + std::to_string(r) + ") with n = " + std::to_string(n));
            if (i > 0 && edges[i] == edges[i - 1])
                throw PreconditionError("duplicate edge (" + std::to_string(l) + ", " +
                                        std::to_string(r) + ")");
        }
        BipartiteGraph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        g.build_adjacency();
        return g;
    }

    // Graph with edge (i, j) iff rows[i][j] = 1. Rows must form a square 0/1 matrix.
    static BipartiteGraph from_adjacency_matrix(const std::vector<std::vector<int>>& rows) {
        const int n = static_cast<int>(rows.size());
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw PreconditionError("non-square adjacency matrix: row " + std::to_string(i) +
                                        " has " + std::to_string(rows[i].size()) +
                                        " entries, expected " + std::to_string(n));
            for (int j = 0; j < n; ++j) {
                if (rows[i][j] != 0 && rows[i][j] != 1)
                    throw PreconditionError("adjacency matrix entry outside {0,1} at (" +
                                            std::to_string(i) + ", " + std::to_string(j) + ")");
                if (rows[i][j] == 1) edges.emplace_back(i, j);
            }
        }
        return from_edges(n, std::move(edges));
    }

    int part_size() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::vector<int>& neighbors_of(Side side, int index) const {
        check_vertex(side, index);
        return side == Side::Left ? adj_left_[index] : adj_right_[index];
    }

    const std::vector<int>& neighbors_of(VertexId v) const { return neighbors_of(v.side, v.index); }

    int degree(Side side, int index) const {
        return static_cast<int>(neighbors_of(side, index).size());
    }

    bool has_edge(int left, int right) const {
        check_vertex(Side::Left, left);
        check_vertex(Side::Right, right);
        return (mask_word(Side::Left, left, right >> 6) >> (right & 63)) & 1;
    }

    // Bitmask of the neighbors of vertex `index` on side `side`, as words over
    // the opposite side's indices.
    std::span<const std::uint64_t> neighbor_mask(Side side, int index) const {
        check_vertex(side, index);
        const auto& store = side == Side::Left ? left_words_ : right_words_;
        return {store.data() + static_cast<std::size_t>(index) * words_, static_cast<std::size_t>(words_)};
    }

    std::vector<std::vector<int>> to_adjacency_matrix() const {
        std::vector<std::vector<int>> rows(n_, std::vector<int>(n_, 0));
        for (auto [l, r] : edges_) rows[l][r] = 1;
        return rows;
    }

    DegreeProfile degree_profile() const {
        DegreeProfile p;
        p.left_degrees.reserve(n_);
        p.right_degrees.reserve(n_);
        for (int i = 0; i < n_; ++i) p.left_degrees.push_back(static_cast<int>(adj_left_[i].size()));
        for (int j = 0; j < n_; ++j) p.right_degrees.push_back(static_cast<int>(adj_right_[j].size()));
        for (int d : p.left_degrees) p.max_degree = std::max(p.max_degree, d);
        for (int d : p.right_degrees) p.max_degree = std::max(p.max_degree, d);
        return p;
    }

    int max_degree() const { return degree_profile().max_degree; }

    BipartiteGraph transposed() const {
        std::vector<std::pair<int, int>> flipped;
        flipped.reserve(edges_.size());
        for (auto [l, r] : edges_) flipped.emplace_back(r, l);
        return from_edges(n_, std::move(flipped));
    }

    friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    void check_vertex(Side side, int index) const {
        if (index < 0 || index >= n_)
            throw PreconditionError(std::string(side_name(side)) + " vertex " +
                                    std::to_string(index) + " not in graph of part size " +
                                    std::to_string(n_));
    }

    std::uint64_t mask_word(Side side, int index, int word) const {
        const auto& store = side == Side::Left ? left_words_ : right_words_;
        return store[static_cast<std::size_t>(index) * words_ + word];
    }

    void build_adjacency() {
        words_ = (n_ + 63) / 64;
        adj_left_.assign(n_, {});
        adj_right_.assign(n_, {});
        left_words_.assign(static_cast<std::size_t>(n_) * words_, 0);
        right_words_.assign(static_cast<std::size_t>(n_) * words_, 0);
        for (auto [l, r] : edges_) {
            adj_left_[l].push_back(r);
            adj_right_[r].push_back(l);
            left_words_[static_cast<std::size_t>(l) * words_ + (r >> 6)] |= std::uint64_t{1} << (r & 63);
            right_words_[static_cast<std::size_t>(r) * words_ + (l >> 6)] |= std::uint64_t{1} << (l & 63);
        }
        // edges_ is sorted, so adj_left_ lists are sorted already; right lists need it
        for (auto& lst : adj_right_) std::sort(lst.begin(), lst.end());
    }

    int n_ = 0;
    int words_ = 0;
    std::vector<std::pair<int, int>> edges_;  // sorted (left, right)
    std::vector<std::vector<int>> adj_left_;
    std::vector<std::vector<int>> adj_right_;
    std::vector<std::uint64_t> left_words_;   // n_ rows of words_ words each
    std::vector<std::uint64_t> right_words_;
};

// Union of the neighborhoods of a set of same-side vertices, as sorted indices
// on the opposite side. N(empty) = empty.
inline std::vector<int> neighbors(const BipartiteGraph& g, Side side, std::span<const int> set) {
    IndexMask acc(g.part_size());
    for (int idx : set) acc.or_with(g.neighbor_mask(side, idx));
    return acc.to_indices();
}

inline std::vector<VertexId> neighbors(const BipartiteGraph& g, std::span<const VertexId> set) {
    if (set.empty()) return {};
    const Side side = set.front().side;
    std::vector<int> indices;
    indices.reserve(set.size());
    for (const VertexId& v : set) {
        if (v.side != side) throw PreconditionError("neighbors: input set mixes both sides");
        indices.push_back(v.index);
    }
    std::vector<VertexId> out;
    for (int idx : neighbors(g, side, indices)) out.push_back({other_side(side), idx});
    return out;
}

// Subgraph induced by equal-size vertex subsets of the two sides. Vertices are
// reindexed to [0, |left|) in ascending original-index order.
inline BipartiteGraph induced_subgraph(const BipartiteGraph& g, std::vector<int> left,
                                       std::vector<int> right) {
    if (left.size() != right.size())
        throw PreconditionError("induced_subgraph: unbalanced subsets (" +
                                std::to_string(left.size()) + " left, " +
                                std::to_string(right.size()) + " right)");
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    auto check = [&](const std::vector<int>& v, const char* side) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 0 || v[i] >= g.part_size())
                throw PreconditionError(std::string("induced_subgraph: ") + side +
                                        " index out of range");
            if (i > 0 && v[i] == v[i - 1])
                throw PreconditionError(std::string("induced_subgraph: duplicate ") + side +
                                        " index");
        }
    };
    check(left, "left");
    check(right, "right");

    std::vector<int> right_pos(g.part_size(), -1);
    for (std::size_t j = 0; j < right.size(); ++j) right_pos[right[j]] = static_cast<int>(j);

    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (int r : g.neighbors_of(Side::Left, left[i])) {
            if (right_pos[r] >= 0) edges.emplace_back(static_cast<int>(i), right_pos[r]);
        }
    }
    return BipartiteGraph::from_edges(static_cast<int>(left.size()), std::move(edges));
}

// A set of pairwise vertex-disjoint edges, stored sorted by (left, right).
struct Matching {
    std::vector<std::pair<int, int>> edges;

    Matching() = default;
    explicit Matching(std::vector<std::pair<int, int>> e) : edges(std::move(e)) {
        std::sort(edges.begin(), edges.end());
    }

    int size() const { return static_cast<int>(edges.size()); }

    friend bool operator==(const Matching&, const Matching&) = default;
};

// Per-side assignment arrays for a matching (-1 = unmatched). Throws if the
// matching is invalid for g: out-of-range, non-edges, or shared endpoints.
struct MatchingView {
    std::vector<int> left_match;
    std::vector<int> right_match;
};

inline MatchingView resolve_matching(const BipartiteGraph& g, const Matching& m) {
    MatchingView view;
    view.left_match.assign(g.part_size(), -1);
    view.right_match.assign(g.part_size(), -1);
    for (auto [l, r] : m.edges) {
        if (l < 0 || l >= g.part_size() || r < 0 || r >= g.part_size())
            throw PreconditionError("matching edge endpoint out of range");
        if (!g.has_edge(l, r))
            throw PreconditionError("matching contains non-edge (" + std::to_string(l) + ", " +
                                    std::to_string(r) + ")");
        if (view.left_match[l] != -1 || view.right_match[r] != -1)
            throw PreconditionError("matching edges share a vertex at (" + std::to_string(l) +
                                    ", " + std::to_string(r) + ")");
        view.left_match[l] = r;
        view.right_match[r] = l;
    }
    return view;
}

}  // namespace permlab
