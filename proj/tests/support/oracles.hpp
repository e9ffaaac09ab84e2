#pragma once

// Independent brute-force oracles used only by tests. These deliberately take
// the dumbest correct route (permutation enumeration, edge-subset enumeration,
// exhaustive path search) so they share no code path with the library.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "permlab/graph.hpp"

namespace testsupport {

using permlab::BipartiteGraph;
using permlab::Matching;
using permlab::Side;

// Permanent by enumerating all n! permutations. n <= 9 or so.
inline mpz_class permanent_by_permutations(const BipartiteGraph& g) {
    const int n = g.part_size();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    mpz_class count = 0;
    do {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) ok = g.has_edge(i, perm[i]);
        if (ok) count += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

// Matching counts by enumerating all 2^|E| edge subsets. |E| <= ~20.
inline std::vector<mpz_class> matching_counts_by_subsets(const BipartiteGraph& g) {
    const int n = g.part_size();
    const auto& edges = g.edges();
    const int m = static_cast<int>(edges.size());
    std::vector<mpz_class> counts(n + 1, mpz_class(0));
    std::vector<char> left_used(n), right_used(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::fill(left_used.begin(), left_used.end(), 0);
        std::fill(right_used.begin(), right_used.end(), 0);
        bool ok = true;
        int size = 0;
        for (int e = 0; e < m && ok; ++e) {
            if (!((mask >> e) & 1)) continue;
            const auto [l, r] = edges[e];
            if (left_used[l] || right_used[r]) ok = false;
            left_used[l] = right_used[r] = 1;
            ++size;
        }
        if (ok) counts[size] += 1;
    }
    return counts;
}

inline mpq_class partition_function_by_subsets(const BipartiteGraph& g, const mpq_class& lambda) {
    const auto counts = matching_counts_by_subsets(g);
    mpq_class z = 0, power = 1;
    for (const mpz_class& c : counts) {
        z += power * mpq_class(c);
        power *= lambda;
    }
    return z;
}

// Minimum of |N(A)|/|A| - 1 over nonempty one-sided subsets with |A| <= n/2,
// by recursive subset generation (not the library's mask loop).
inline double expansion_by_enumeration(const BipartiteGraph& g) {
    const int n = g.part_size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> subset;
    auto visit = [&](Side side) {
        std::vector<char> in_nbr(n, 0);
        auto rec = [&](auto&& self, int next) -> void {
            if (!subset.empty()) {
                std::fill(in_nbr.begin(), in_nbr.end(), 0);
                int nbr = 0;
                for (int v : subset)
                    for (int u : g.neighbors_of(side, v))
                        if (!in_nbr[u]) {
                            in_nbr[u] = 1;
                            ++nbr;
                        }
                best = std::min(best, (double)(nbr - (int)subset.size()) / (double)subset.size());
            }
            if ((int)subset.size() == n / 2) return;
            for (int v = next; v < n; ++v) {
                subset.push_back(v);
                self(self, v + 1);
                subset.pop_back();
            }
        };
        rec(rec, 0);
    };
    visit(Side::Left);
    visit(Side::Right);
    return best;
}

// Shortest alternating path length from start_set to an unmatched right
// vertex, by exhaustive depth-first search over all simple alternating paths.
inline std::optional<int> shortest_alternating_path_by_dfs(const BipartiteGraph& g,
                                                           const Matching& m,
                                                           const std::vector<int>& start_set) {
    const int n = g.part_size();
    std::vector<int> left_match(n, -1), right_match(n, -1);
    for (auto [l, r] : m.edges) {
        left_match[l] = r;
        right_match[r] = l;
    }
    int best = -1;
    std::vector<char> used_left(n, 0), used_right(n, 0);

    auto from_left = [&](auto&& self, int l, int len) -> void {
        used_left[l] = 1;
        for (int r : g.neighbors_of(Side::Left, l)) {
            if (used_right[r] || left_match[l] == r) continue;
            if (right_match[r] == -1) {
                if (best == -1 || len + 2 < best) best = len + 2;
                continue;
            }
            const int l2 = right_match[r];
            if (used_left[l2]) continue;
            used_right[r] = 1;
            self(self, l2, len + 2);
            used_right[r] = 0;
        }
        used_left[l] = 0;
    };
    for (int l : start_set) from_left(from_left, l, 0);
    if (best == -1) return std::nullopt;
    return best;
}

}  // namespace testsupport
