#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "permlab/graph.hpp"

namespace permlab {

// splitmix64: tiny fixed-algorithm PRNG so that seeded corpora are
// bit-identical across platforms and standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound) by rejection; bound > 0
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t master, const std::string& tag, int n) {
    std::uint64_t h = master ^ 0x5bd1e9955bd1e995ull;
    for (unsigned char c : tag) h = (h ^ c) * 0x100000001b3ull;
    h ^= static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ull;
    return h;
}

namespace gen {

inline BipartiteGraph complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) edges.emplace_back(i, j);
    return BipartiteGraph::from_edges(n, std::move(edges));
}

inline BipartiteGraph identity(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, i);
    return BipartiteGraph::from_edges(n, std::move(edges));
}

inline BipartiteGraph empty(int n) { return BipartiteGraph::from_edges(n, {}); }

// Even cycle of length 2n laid out as L0-R0-L1-R1-...-L(n-1)-R(n-1)-L0.
inline BipartiteGraph cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        edges.emplace_back(i, i);
        edges.emplace_back((i + 1) % n, i);
    }
    return BipartiteGraph::from_edges(n, std::move(edges));
}

inline BipartiteGraph random_bipartite(int n, double edge_probability, SplitMix64& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rng.chance(edge_probability)) edges.emplace_back(i, j);
    return BipartiteGraph::from_edges(n, std::move(edges));
}

// The identity matching plus `extra` random off-diagonal edges: always
// perfect-matchable, usually a weak expander.
inline BipartiteGraph identity_plus_noise(int n, int extra, SplitMix64& rng) {
    std::vector<std::vector<char>> have(n, std::vector<char>(n, 0));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        have[i][i] = 1;
        edges.emplace_back(i, i);
    }
    int added = 0, attempts = 0;
    const int max_attempts = 64 * (extra + 1);
    while (added < extra && attempts++ < max_attempts && n > 1) {
        const int i = static_cast<int>(rng.below(n));
        const int j = static_cast<int>(rng.below(n));
        if (have[i][j]) continue;
        have[i][j] = 1;
        edges.emplace_back(i, j);
        ++added;
    }
    return BipartiteGraph::from_edges(n, std::move(edges));
}

// Union of d random permutations, resampled until simple (at most 64 tries,
// then edges are deduplicated). Degree <= d on both sides.
inline BipartiteGraph random_regular(int n, int d, SplitMix64& rng) {
    d = std::min(d, n);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::vector<char>> have(n, std::vector<char>(n, 0));
        std::vector<std::pair<int, int>> edges;
        bool simple = true;
        for (int p = 0; p < d && simple; ++p) {
            std::vector<int> perm(n);
            for (int i = 0; i < n; ++i) perm[i] = i;
            rng.shuffle(perm);
            for (int i = 0; i < n; ++i) {
                if (have[i][perm[i]]) {
                    simple = false;
                    break;
                }
                have[i][perm[i]] = 1;
                edges.emplace_back(i, perm[i]);
            }
        }
        if (simple) return BipartiteGraph::from_edges(n, std::move(edges));
    }
    // fallback: overlapping permutations collapse to fewer edges
    std::vector<std::pair<int, int>> edges;
    for (int p = 0; p < d; ++p) {
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(perm);
        for (int i = 0; i < n; ++i) edges.emplace_back(i, perm[i]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return BipartiteGraph::from_edges(n, std::move(edges));
}

// Two disjoint complete blocks of sizes floor(n/2) and ceil(n/2): the smaller
// block side is a maximal expansion violator, forcing decomposition.
inline BipartiteGraph two_block(int n) {
    const int a = n / 2;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < a; ++j) edges.emplace_back(i, j);
    for (int i = a; i < n; ++i)
        for (int j = a; j < n; ++j) edges.emplace_back(i, j);
    return BipartiteGraph::from_edges(n, std::move(edges));
}

// Identity graph with the edge (0,0) removed: left 0 is isolated, so there is
// no perfect matching.
inline BipartiteGraph no_perfect_matching(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(i, i);
    return BipartiteGraph::from_edges(n, std::move(edges));
}

}  // namespace gen

}  // namespace permlab
