#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/graph.hpp"
#include "permlab/numeric.hpp"

namespace permlab {

// Activity lambda > 0 weighting matchings by size in Z(lambda, G).
struct Activity {
    double value;

    explicit Activity(double v) : value(v) {
        if (!(v > 0.0)) throw PreconditionError("activity must be > 0");
    }
};

// Truncation depth and per-call relative error target for the decay recursion.
struct DecayParams {
    int depth = 0;
    double delta = 0.05;
};

// Boundary condition applied where the recursion is truncated: treat vertices
// at the cut either as surely unmatched (estimate 1) or as heavily matched
// (estimate 1/(1 + lambda * deg)). The true probability always lies between
// the two resulting estimates.
enum class Boundary { AllUnmatched, AllMatched };

// Estimate of ln Z with a certified enclosure [log_lo, log_hi].
struct ApproxPartitionValue {
    double log_value = 0.0;
    double log_lo = 0.0;
    double log_hi = 0.0;
    bool converged = false;
    int depth_used = 0;
    double delta = 0.0;

    double width() const { return log_hi - log_lo; }
};

namespace detail {

struct ProbInterval {
    double lo, hi;
};

// Evaluator for the unmatched-vertex recursion
//     p_G(v) = 1 / (1 + lambda * sum_{u in N(v)} p_{G-v}(u))
// over the self-avoiding expansion of the remaining graph. Vertices are
// removed on a scratch aliveness array and restored on return. One traversal
// yields both boundary-condition estimates as an interval: the recursion map
// is antitone in the child values, so child intervals map to
// [f(hi children), f(lo children)].
class DecayEvaluator {
public:
    DecayEvaluator(const BipartiteGraph& g, double lambda)
        : n_(g.part_size()), lambda_(lambda), alive_(2 * g.part_size(), 1) {
        // flat CSR over global keys: left i -> i, right j -> n + j
        starts_.assign(2 * n_ + 1, 0);
        flat_.resize(2 * static_cast<std::size_t>(g.edge_count()));
        for (auto [l, r] : g.edges()) {
            ++starts_[l + 1];
            ++starts_[n_ + r + 1];
        }
        for (std::size_t i = 1; i < starts_.size(); ++i) starts_[i] += starts_[i - 1];
        std::vector<int> fill(starts_.begin(), starts_.end() - 1);
        for (auto [l, r] : g.edges()) {
            flat_[fill[l]++] = n_ + r;
            flat_[fill[n_ + r]++] = l;
        }
    }

    // Vertex ids: left i -> i, right j -> n + j.
    static int vertex_key(int n, VertexId v) {
        return v.side == Side::Left ? v.index : n + v.index;
    }

    void remove(int key) { alive_[key] = 0; }

    ProbInterval prob(int key, int depth) {
        const int* nb = flat_.data() + starts_[key];
        const int* nb_end = flat_.data() + starts_[key + 1];
        if (depth == 0) {
            int deg = 0;
            for (const int* p = nb; p != nb_end; ++p) deg += alive_[*p];
            return {1.0 / (1.0 + lambda_ * deg), 1.0};
        }
        alive_[key] = 0;
        double sum_lo = 0.0, sum_hi = 0.0;
        bool any = false;
        for (const int* p = nb; p != nb_end; ++p) {
            if (!alive_[*p]) continue;
            any = true;
            const ProbInterval child = prob(*p, depth - 1);
            sum_lo += child.lo;
            sum_hi += child.hi;
        }
        alive_[key] = 1;
        if (!any) return {1.0, 1.0};
        return {1.0 / (1.0 + lambda_ * sum_hi), 1.0 / (1.0 + lambda_ * sum_lo)};
    }

private:
    int n_;
    double lambda_;
    std::vector<char> alive_;
    std::vector<int> starts_;
    std::vector<int> flat_;
};

}  // namespace detail

// Probability that v is unmatched under the Gibbs measure, estimated by the
// decay recursion truncated at `depth` with the given boundary condition.
// Exact (equal for both boundaries) once every self-avoiding branch dies out,
// which is guaranteed for depth >= 2n.
inline double unmatched_probability(const BipartiteGraph& g, VertexId v, Activity lambda,
                                    int depth, Boundary boundary) {
    if (depth < 0) throw PreconditionError("unmatched_probability: depth must be >= 0");
    if (v.index < 0 || v.index >= g.part_size())
        throw PreconditionError("unmatched_probability: vertex not in graph");
    detail::DecayEvaluator eval(g, lambda.value);
    const auto iv = eval.prob(detail::DecayEvaluator::vertex_key(g.part_size(), v), depth);
    // The AllUnmatched estimate sits at the top of the interval at even depth
    // and at the bottom at odd depth; AllMatched is the mirror image.
    const bool take_hi = (boundary == Boundary::AllUnmatched) == (depth % 2 == 0);
    return take_hi ? iv.hi : iv.lo;
}

inline std::pair<double, double> unmatched_probability_bracket(const BipartiteGraph& g, VertexId v,
                                                               Activity lambda, int depth) {
    if (depth < 0) throw PreconditionError("unmatched_probability: depth must be >= 0");
    if (v.index < 0 || v.index >= g.part_size())
        throw PreconditionError("unmatched_probability: vertex not in graph");
    detail::DecayEvaluator eval(g, lambda.value);
    const auto iv = eval.prob(detail::DecayEvaluator::vertex_key(g.part_size(), v), depth);
    return {iv.lo, iv.hi};
}

// ln Z(lambda, G) by the telescoping product over the fixed elimination order
// (left 0..n-1, then right 0..n-1): ln Z = sum_i -ln p(v_i | remaining graph).
// Each factor is evaluated at params.depth; the result interval comes from
// running both truncation boundaries. Convergence: interval width within
// ln(1 + delta). A non-converged result is returned flagged, not thrown.
inline ApproxPartitionValue partition_function_cd(const BipartiteGraph& g, Activity lambda,
                                                  DecayParams params) {
    if (params.depth < 0) throw PreconditionError("partition_function_cd: depth must be >= 0");
    if (!(params.delta > 0.0)) throw PreconditionError("partition_function_cd: delta must be > 0");
    const int n = g.part_size();
    detail::DecayEvaluator eval(g, lambda.value);
    double log_lo = 0.0, log_hi = 0.0;
    for (int key = 0; key < 2 * n; ++key) {
        const auto iv = eval.prob(key, params.depth);
        log_lo += -std::log(iv.hi);
        log_hi += -std::log(iv.lo);
        eval.remove(key);
    }
    ApproxPartitionValue out;
    out.log_lo = log_lo;
    out.log_hi = log_hi;
    out.log_value = 0.5 * (log_lo + log_hi);
    out.depth_used = params.depth;
    out.delta = params.delta;
    out.converged = (log_hi - log_lo) <= std::log1p(params.delta);
    return out;
}

// Heuristic starting depth for the adaptive driver. The driver doubles the
// depth until the bracket converges, capped at 2n where the recursion is
// exact, so the start only affects cost. Decay slows as lambda * Delta grows;
// start a little deeper there.
inline int choose_depth(int n, int max_degree, Activity lambda, double delta) {
    if (n <= 0) throw PreconditionError("choose_depth: n must be positive");
    const int cap = 2 * n;
    if (delta >= 1.0) return std::min(cap, 1);
    const double slow = std::log1p(lambda.value * std::max(max_degree, 1)) / 4.0;
    const int start = static_cast<int>(std::ceil(std::log2(4.0 * n / delta) + slow));
    return std::clamp(start, 1, cap);
}

// Adaptive depth-doubling driver. Always terminates converged: at depth 2n
// every branch has bottomed out, the two boundaries coincide, and the
// interval has width zero.
inline ApproxPartitionValue partition_function_cd_auto(const BipartiteGraph& g, Activity lambda,
                                                       double delta) {
    const int n = g.part_size();
    if (n == 0) {
        ApproxPartitionValue out;
        out.converged = true;
        out.delta = delta;
        return out;
    }
    const int cap = 2 * n;
    int depth = choose_depth(n, g.max_degree(), lambda, delta);
    while (true) {
        ApproxPartitionValue r = partition_function_cd(g, lambda, DecayParams{depth, delta});
        if (r.converged || depth >= cap) return r;
        depth = std::min(2 * depth, cap);
    }
}

}  // namespace permlab
