#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/exact.hpp"
#include "permlab/graph.hpp"

namespace permlab {

struct ExpansionOptions {
    int enum_cap = 14;                 // max n for exhaustive subset enumeration
    long heuristic_subset_budget = 1L << 18;  // subset probes above the cap
};

// Outcome of the expansion test at threshold alpha:
//   Certified           every A with |A| <= n/2 on either side has |N(A)| >= (1+alpha)|A|
//   CertifiedHeuristic  no violator found by the restricted search above the
//                       enumeration cap; not a soundness certificate
//   Violator            a witness A on `side` with |N(A)| <= (1+2*alpha)|A|
struct ExpansionVerdict {
    enum class Kind { Certified, CertifiedHeuristic, Violator };

    Kind kind = Kind::Certified;
    double alpha = 0.0;
    Side side = Side::Left;
    std::vector<int> witness;      // sorted indices, Violator only
    int neighborhood_size = 0;     // |N(witness)|, Violator only

    bool certified() const { return kind != Kind::Violator; }
};

namespace detail {

// ratio |N(A)| / |A| - 1 in the exact same floating arithmetic used by both
// expansion_coefficient and test_expansion, so their verdicts agree bit-for-bit
inline double expansion_ratio(int neighborhood, int size) {
    return static_cast<double>(neighborhood - size) / static_cast<double>(size);
}

// Enumerates subsets of one side, smallest size first and within a size in
// ascending mask order. Calls visit(mask, size, |N|); stop when it returns false.
template <typename Visit>
inline void enumerate_side_subsets(const BipartiteGraph& g, Side side, int max_size, Visit visit) {
    const int n = g.part_size();
    for (int size = 1; size <= max_size; ++size) {
        for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
            if (std::popcount(mask) != size) continue;
            IndexMask acc(n);
            for (std::uint32_t m = mask; m; m &= m - 1)
                acc.or_with(g.neighbor_mask(side, std::countr_zero(m)));
            if (!visit(mask, size, acc.count())) return;
        }
    }
}

inline std::vector<int> mask_to_indices(std::uint32_t mask) {
    std::vector<int> out;
    for (std::uint32_t m = mask; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

}  // namespace detail

// Minimum of |N(A)|/|A| - 1 over nonempty A on either side with |A| <= n/2.
// A graph is an alpha-expander iff this value is >= alpha. Vacuously +inf when
// no subset is eligible (n <= 1).
inline double expansion_coefficient(const BipartiteGraph& g, const ExpansionOptions& opt = {}) {
    const int n = g.part_size();
    if (n > opt.enum_cap || n > 25)
        throw CapacityError("expansion_coefficient: n = " + std::to_string(n) +
                            " above enumeration cap " + std::to_string(std::min(opt.enum_cap, 25)) +
                            "; use test_expansion with a specific alpha instead");
    double best = std::numeric_limits<double>::infinity();
    for (Side side : {Side::Left, Side::Right}) {
        detail::enumerate_side_subsets(g, side, n / 2, [&](std::uint32_t, int size, int nbr) {
            best = std::min(best, detail::expansion_ratio(nbr, size));
            return true;
        });
    }
    return best;
}

// Decides alpha-expansion. Exhaustive (sound both ways) for n <= enum_cap;
// above the cap only small subsets and neighborhood-closure balls are probed,
// and a pass is reported as CertifiedHeuristic. The first violator in
// (side, size, mask) order wins, independent of any internal parallelism.
inline ExpansionVerdict test_expansion(const BipartiteGraph& g, double alpha,
                                       const ExpansionOptions& opt = {}) {
    if (!(alpha > 0.0)) throw PreconditionError("test_expansion: alpha must be > 0");
    const int n = g.part_size();
    ExpansionVerdict verdict;
    verdict.alpha = alpha;

    auto violates = [&](int nbr, int size) {
        return detail::expansion_ratio(nbr, size) < alpha;
    };

    if (n <= opt.enum_cap && n <= 25) {
        for (Side side : {Side::Left, Side::Right}) {
            bool found = false;
            detail::enumerate_side_subsets(g, side, n / 2,
                                           [&](std::uint32_t mask, int size, int nbr) {
                if (violates(nbr, size)) {
                    verdict.kind = ExpansionVerdict::Kind::Violator;
                    verdict.side = side;
                    verdict.witness = detail::mask_to_indices(mask);
                    verdict.neighborhood_size = nbr;
                    found = true;
                    return false;
                }
                return true;
            });
            if (found) return verdict;
        }
        verdict.kind = ExpansionVerdict::Kind::Certified;
        return verdict;
    }

    // Heuristic regime. Subset probes of small sizes within budget, then
    // neighborhood-closure balls N(N(A)) grown from each single vertex.
    const int max_size = std::min(n / 2, static_cast<int>(std::ceil(2.0 * alpha * n)));
    long budget = opt.heuristic_subset_budget;
    for (Side side : {Side::Left, Side::Right}) {
        std::vector<int> comb;
        for (int size = 1; size <= max_size && budget > 0; ++size) {
            comb.assign(size, 0);
            for (int i = 0; i < size; ++i) comb[i] = i;
            while (budget > 0) {
                --budget;
                IndexMask acc(n);
                for (int idx : comb) acc.or_with(g.neighbor_mask(side, idx));
                const int nbr = acc.count();
                if (violates(nbr, size)) {
                    verdict.kind = ExpansionVerdict::Kind::Violator;
                    verdict.side = side;
                    verdict.witness = comb;
                    verdict.neighborhood_size = nbr;
                    return verdict;
                }
                // next lexicographic combination
                int i = size - 1;
                while (i >= 0 && comb[i] == n - size + i) --i;
                if (i < 0) break;
                ++comb[i];
                for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
            }
        }
        for (int start = 0; start < n; ++start) {
            std::vector<int> ball = {start};
            while (static_cast<int>(ball.size()) <= n / 2) {
                const int size = static_cast<int>(ball.size());
                const std::vector<int> nbr = neighbors(g, side, ball);
                if (violates(static_cast<int>(nbr.size()), size)) {
                    verdict.kind = ExpansionVerdict::Kind::Violator;
                    verdict.side = side;
                    verdict.witness = ball;
                    verdict.neighborhood_size = static_cast<int>(nbr.size());
                    return verdict;
                }
                std::vector<int> next = neighbors(g, other_side(side), nbr);
                if (next.size() <= ball.size() || static_cast<int>(next.size()) > n / 2) break;
                ball = std::move(next);
            }
        }
    }
    verdict.kind = ExpansionVerdict::Kind::CertifiedHeuristic;
    return verdict;
}

// Alternating path v_1, ..., v_2r with respect to a matching: v_1 unmatched on
// the left, v_2r unmatched on the right, odd steps over non-matching edges,
// even steps over matching edges. Augmenting along it grows the matching by 1.
struct AlternatingPath {
    std::vector<VertexId> vertices;

    int length() const { return static_cast<int>(vertices.size()); }
};

// Shortest alternating path from any vertex of start_set (unmatched, left) to
// an unmatched right vertex, by layered breadth-first search. nullopt if no
// alternating path leaves start_set.
inline std::optional<AlternatingPath> find_alternating_path(const BipartiteGraph& g,
                                                            const Matching& m,
                                                            std::span<const int> start_set) {
    const int n = g.part_size();
    const MatchingView view = resolve_matching(g, m);
    for (int l : start_set) {
        if (l < 0 || l >= n) throw PreconditionError("find_alternating_path: start vertex out of range");
        if (view.left_match[l] != -1)
            throw PreconditionError("find_alternating_path: start vertex " + std::to_string(l) +
                                    " is matched");
    }

    std::vector<int> parent_of_right(n, -2);  // left predecessor, -2 = unvisited
    std::vector<int> parent_of_left(n, -2);   // right predecessor
    std::deque<int> frontier;                 // left vertices, deduplicated
    for (int l : start_set) {
        if (parent_of_left[l] == -2) {
            parent_of_left[l] = -1;  // root
            frontier.push_back(l);
        }
    }
    int reached_right = -1;
    while (!frontier.empty() && reached_right == -1) {
        std::deque<int> next;
        for (int l : frontier) {
            for (int r : g.neighbors_of(Side::Left, l)) {
                if (view.left_match[l] == r) continue;  // must leave along a non-matching edge
                if (parent_of_right[r] != -2) continue;
                parent_of_right[r] = l;
                if (view.right_match[r] == -1) {
                    reached_right = r;
                    break;
                }
                const int l2 = view.right_match[r];
                if (parent_of_left[l2] == -2) {
                    parent_of_left[l2] = r;
                    next.push_back(l2);
                }
            }
            if (reached_right != -1) break;
        }
        frontier = std::move(next);
    }
    if (reached_right == -1) return std::nullopt;

    std::vector<VertexId> path;
    int r = reached_right;
    while (r != -1) {
        path.push_back({Side::Right, r});
        const int l = parent_of_right[r];
        path.push_back({Side::Left, l});
        r = parent_of_left[l];  // -1 at a root
    }
    std::reverse(path.begin(), path.end());
    return AlternatingPath{std::move(path)};
}

// New matching obtained by flipping the edges along an alternating path.
inline Matching augment_along(const BipartiteGraph& g, const Matching& m,
                              const AlternatingPath& path) {
    const MatchingView view = resolve_matching(g, m);
    const auto& vs = path.vertices;
    if (vs.size() < 2 || vs.size() % 2 != 0)
        throw PreconditionError("augment_along: path must have even length >= 2");
    if (vs.front().side != Side::Left || view.left_match[vs.front().index] != -1)
        throw PreconditionError("augment_along: path must start at an unmatched left vertex");
    if (vs.back().side != Side::Right || view.right_match[vs.back().index] != -1)
        throw PreconditionError("augment_along: path must end at an unmatched right vertex");
    std::vector<std::pair<int, int>> edges = m.edges;
    auto erase_edge = [&](int l, int r) {
        auto it = std::find(edges.begin(), edges.end(), std::pair<int, int>{l, r});
        if (it == edges.end()) throw PreconditionError("augment_along: expected matching edge missing");
        edges.erase(it);
    };
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        const VertexId a = vs[i], b = vs[i + 1];
        if (a.side == b.side) throw PreconditionError("augment_along: path does not alternate sides");
        const int l = a.side == Side::Left ? a.index : b.index;
        const int r = a.side == Side::Left ? b.index : a.index;
        if (!g.has_edge(l, r)) throw PreconditionError("augment_along: path uses a non-edge");
        if (i % 2 == 0) {
            if (view.left_match[l] == r) throw PreconditionError("augment_along: odd step lies in the matching");
            edges.emplace_back(l, r);
        } else {
            if (view.left_match[l] != r) throw PreconditionError("augment_along: even step not in the matching");
            erase_edge(l, r);
        }
    }
    Matching out(std::move(edges));
    resolve_matching(g, out);  // validate
    return out;
}

// Diagnostic yardstick for alternating-path length:
// max(2, c * ln(n/(n-k)) / ln(1+alpha)). The constant c is a calibration knob;
// 2 is the minimum possible path length and keeps k = 0 meaningful.
inline double alternating_length_bound(int n, int k, double alpha, double c) {
    if (k >= n) throw PreconditionError("alternating_length_bound: k must be < n");
    if (!(alpha > 0.0)) throw PreconditionError("alternating_length_bound: alpha must be > 0");
    if (!(c > 0.0)) throw PreconditionError("alternating_length_bound: c must be > 0");
    const double formula =
        c * std::log(static_cast<double>(n) / static_cast<double>(n - k)) / std::log1p(alpha);
    return std::max(2.0, formula);
}

}  // namespace permlab
