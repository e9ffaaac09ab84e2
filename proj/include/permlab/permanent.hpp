#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "permlab/errors.hpp"
#include "permlab/exact.hpp"
#include "permlab/expansion.hpp"
#include "permlab/graph.hpp"
#include "permlab/monomer_dimer.hpp"
#include "permlab/numeric.hpp"

namespace permlab {

struct ApproxOptions {
    double calib_c = 2.0;       // constant standing in for the hidden O(.) factors
    int base_cap = 8;           // subproblems of this size or less go to the exact oracle
    int exact_cap = 20;         // exact-oracle size cap
    int expansion_enum_cap = 14;
    long heuristic_subset_budget = 1L << 18;
    bool unsound_fast = false;  // accept heuristic expansion certificates
    long node_budget = 100000;  // decomposition-tree node limit
    std::optional<double> lambda_override;
    std::optional<int> depth_override;

    ExpansionOptions expansion_options() const {
        return ExpansionOptions{expansion_enum_cap, heuristic_subset_budget};
    }
    ExactOracleOptions exact_options() const { return ExactOracleOptions{exact_cap}; }
};

// Parameters actually used by a run, echoed for reporting.
struct ApproxMeta {
    double epsilon = 0.0;
    double lambda_used = 0.0;
    double alpha_used = 0.0;
    int max_degree = 0;
    int depth_reached = 0;
    long trace_nodes = 1;
};

// Permanent estimate in log domain. log_estimate = -inf encodes Perm = 0.
// exact = true means no approximation error (base cases and exactly composed
// sums); then guarantee_exponent = 0 and exact_value holds the integer.
struct ApproxResult {
    double log_estimate = kNegInf;
    double guarantee_exponent = 0.0;  // est/Perm certified within e^{+-guarantee_exponent}
    bool exact = false;
    bool converged = true;
    double log_lo = kNegInf;
    double log_hi = kNegInf;
    std::optional<mpz_class> exact_value;
    ApproxMeta meta;
};

// One node of the decomposition trace.
struct TraceNode {
    enum class Kind { ExactBase, Zero, Expander, Violator };

    Kind kind = Kind::ExactBase;
    int n = 0;
    bool transposed = false;          // Violator found on the right side
    std::vector<int> witness;         // A (left side after transposition)
    int neighborhood_size = 0;        // |N(A)|
    long num_subsets = 0;             // C(|N(A)|, |A|) enumerated B-subsets
    double lambda = 0.0;              // Expander nodes
    int depth = 0;                    // Expander nodes
    std::vector<TraceNode> children;  // Violator: pairs (A,B), (A^c,B^c) per B in order

    long total_nodes() const {
        long t = 1;
        for (const TraceNode& c : children) t += c.total_nodes();
        return t;
    }
};

struct DecompositionTrace {
    TraceNode root;

    long node_count() const { return root.total_nodes(); }
};

// Thrown when the decomposition-tree node budget runs out; carries whatever
// part of the trace was already built.
struct DecompositionBudgetError : CapacityError {
    DecompositionTrace partial_trace;

    DecompositionBudgetError(const std::string& what, DecompositionTrace trace)
        : CapacityError(what), partial_trace(std::move(trace)) {}
};

// Smallest activity making the per-vertex partition-to-permanent factor fall
// below 1+epsilon under calibration constant c, honoring the standing floor
// lambda > 10: max(10+, c * ln(Delta) / (ln(1+alpha) * ln(1+epsilon))).
inline constexpr double kActivityFloor = 10.000001;

inline Activity select_activity(double epsilon, double alpha, int max_degree, double c = 2.0) {
    if (!(epsilon > 0.0)) throw PreconditionError("select_activity: epsilon must be > 0");
    if (!(alpha > 0.0)) throw PreconditionError("select_activity: alpha must be > 0");
    if (max_degree < 1) throw PreconditionError("select_activity: max degree must be >= 1");
    const double formula =
        c * std::log(static_cast<double>(max_degree)) / (std::log1p(alpha) * std::log1p(epsilon));
    return Activity(std::max(kActivityFloor, formula));
}

// The two-sided partition-to-permanent bounds: certified lower bound 1 and
// upper bound exponent c * n * ln(Delta) / (lambda * ln(1+alpha)). The upper
// side is a formula with the unknown constant standing in as c.
struct CorollaryBounds {
    double lower = 1.0;
    double upper_log = 0.0;
};

inline CorollaryBounds corollary_bounds(int n, Activity lambda, double alpha, int max_degree,
                                        double c = 2.0) {
    constexpr double kTwoE = 5.43656365691809;  // 2e
    if (!(lambda.value > kTwoE))
        throw PreconditionError("corollary_bounds: requires lambda > 2e");
    if (!(alpha > 0.0)) throw PreconditionError("corollary_bounds: alpha must be > 0");
    if (max_degree < 1) throw PreconditionError("corollary_bounds: max degree must be >= 1");
    CorollaryBounds b;
    if (max_degree > 1)
        b.upper_log = c * n * std::log(static_cast<double>(max_degree)) /
                      (lambda.value * std::log1p(alpha));
    return b;
}

namespace detail {

inline ApproxResult exact_result(mpz_class value) {
    ApproxResult r;
    r.exact = true;
    r.converged = true;
    r.log_estimate = log_mpz(value);
    r.log_lo = r.log_estimate;
    r.log_hi = r.log_estimate;
    r.exact_value = std::move(value);
    return r;
}

inline long long binomial_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace detail

// Expander-case approximation: select the activity, approximate Z(lambda, G)
// by correlation decay with per-call target epsilon, and divide by lambda^n.
// The certified factor is (1+epsilon)^(n+1) on the high side and (1+epsilon)
// on the low side; guarantee_exponent records the worse of the two.
inline ApproxResult approx_permanent_expander(const BipartiteGraph& g, double epsilon,
                                              double alpha, const ApproxOptions& opt = {}) {
    if (!(epsilon > 0.0)) throw PreconditionError("approx_permanent_expander: epsilon must be > 0");
    if (!(alpha > 0.0))
        throw PreconditionError("approx_permanent_expander: alpha must be > 0 (not an expander)");
    const int n = g.part_size();
    if (n == 0) return detail::exact_result(mpz_class(1));
    if (max_matching_size(g) < n) {
        ApproxResult r = detail::exact_result(mpz_class(0));
        r.meta.epsilon = epsilon;
        r.meta.alpha_used = alpha;
        return r;
    }

    const int max_degree = g.max_degree();
    const Activity lambda = opt.lambda_override ? Activity(*opt.lambda_override)
                                                : select_activity(epsilon, alpha, max_degree, opt.calib_c);
    ApproxPartitionValue z;
    if (opt.depth_override) {
        z = partition_function_cd(g, lambda, DecayParams{*opt.depth_override, epsilon});
    } else {
        z = partition_function_cd_auto(g, lambda, epsilon);
    }

    const double shift = n * std::log(lambda.value);
    ApproxResult r;
    r.log_estimate = z.log_value - shift;
    r.log_lo = z.log_lo - shift;
    r.log_hi = z.log_hi - shift;
    r.guarantee_exponent = (n + 1) * std::log1p(epsilon);
    r.exact = false;
    r.converged = z.converged;
    r.meta = ApproxMeta{epsilon, lambda.value, alpha, max_degree, z.depth_used, 1};
    return r;
}

namespace detail {

class GeneralApprox {
public:
    GeneralApprox(double epsilon, const ApproxOptions& opt) : epsilon_(epsilon), opt_(opt) {}

    struct BudgetExhausted {};

    ApproxResult run(const BipartiteGraph& g, TraceNode& node) {
        if (++nodes_created > opt_.node_budget) throw BudgetExhausted{};
        const int n = g.part_size();
        node.n = n;

        if (n <= opt_.base_cap) {
            node.kind = TraceNode::Kind::ExactBase;
            return exact_result(permanent_exact(g, opt_.exact_options()));
        }
        if (max_matching_size(g) < n) {
            node.kind = TraceNode::Kind::Zero;
            return exact_result(mpz_class(0));
        }

        const double alpha = std::pow(static_cast<double>(n), -1.0 / 3.0);
        ExpansionVerdict verdict = test_expansion(g, alpha, opt_.expansion_options());
        if (verdict.kind == ExpansionVerdict::Kind::CertifiedHeuristic && !opt_.unsound_fast)
            throw PreconditionError(
                "approx_permanent_general: n = " + std::to_string(n) +
                " exceeds the exact expansion cap and only a heuristic certificate is "
                "available; pass --unsound-fast to accept it");

        if (verdict.certified()) {
            node.kind = TraceNode::Kind::Expander;
            ApproxResult r = approx_permanent_expander(g, epsilon_, alpha, opt_);
            node.lambda = r.meta.lambda_used;
            node.depth = r.meta.depth_reached;
            return r;
        }
        return split_on_violator(g, verdict, alpha, node);
    }

    long nodes_created = 0;

private:
    ApproxResult split_on_violator(const BipartiteGraph& g_in, const ExpansionVerdict& verdict,
                                   double alpha, TraceNode& node) {
        const int n = g_in.part_size();
        // The product identity splits on a left-side set; a right-side
        // violator is handled on the transposed graph (equal permanent).
        const bool transposed = verdict.side == Side::Right;
        const BipartiteGraph g = transposed ? g_in.transposed() : g_in;

        node.kind = TraceNode::Kind::Violator;
        node.transposed = transposed;
        node.witness = verdict.witness;
        const std::vector<int>& a = verdict.witness;
        const std::vector<int> na = neighbors(g, Side::Left, a);
        node.neighborhood_size = static_cast<int>(na.size());

        if (static_cast<int>(na.size()) < static_cast<int>(a.size())) {
            // Hall violation; unreachable after the perfect-matching check
            node.kind = TraceNode::Kind::Zero;
            return exact_result(mpz_class(0));
        }

        std::vector<int> a_comp, in_a(n, 0);
        for (int v : a) in_a[v] = 1;
        for (int v = 0; v < n; ++v)
            if (!in_a[v]) a_comp.push_back(v);

        const int k = static_cast<int>(a.size());
        const int nn = static_cast<int>(na.size());
        node.num_subsets = binomial_ll(nn, k);

        std::vector<char> in_b(n, 0);
        std::vector<int> b(k), b_comp;
        std::vector<int> comb(k);
        for (int i = 0; i < k; ++i) comb[i] = i;

        struct Term {
            double log_value;
            double log_lo, log_hi;
            double guarantee;
            bool exact;
            bool converged;
            std::optional<mpz_class> exact_value;
        };
        std::vector<Term> terms;

        while (true) {
            for (int i = 0; i < k; ++i) b[i] = na[comb[i]];
            std::fill(in_b.begin(), in_b.end(), 0);
            for (int v : b) in_b[v] = 1;
            b_comp.clear();
            for (int v = 0; v < n; ++v)
                if (!in_b[v]) b_comp.push_back(v);

            node.children.emplace_back();
            TraceNode& child_a = node.children.back();
            const ApproxResult ra = run(induced_subgraph(g, a, b), child_a);
            node.children.emplace_back();
            TraceNode& child_c = node.children.back();
            const ApproxResult rc = run(induced_subgraph(g, a_comp, b_comp), child_c);

            Term t;
            t.log_value = ra.log_estimate + rc.log_estimate;
            t.log_lo = ra.log_lo + rc.log_lo;
            t.log_hi = ra.log_hi + rc.log_hi;
            t.guarantee = ra.guarantee_exponent + rc.guarantee_exponent;
            t.exact = ra.exact && rc.exact;
            t.converged = ra.converged && rc.converged;
            if (t.exact) t.exact_value = *ra.exact_value * *rc.exact_value;
            terms.push_back(std::move(t));

            // next k-combination of [0, nn)
            int i = k - 1;
            while (i >= 0 && comb[i] == nn - k + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }

        bool all_exact = true, all_converged = true;
        for (const Term& t : terms) {
            all_exact = all_exact && t.exact;
            all_converged = all_converged && t.converged;
        }

        ApproxResult out;
        out.converged = all_converged;
        if (all_exact) {
            mpz_class sum = 0;
            for (const Term& t : terms) sum += *t.exact_value;
            ApproxResult r = exact_result(std::move(sum));
            r.converged = all_converged;
            r.meta.epsilon = epsilon_;
            r.meta.alpha_used = alpha;
            return r;
        }
        LogSumAccumulator acc, acc_lo, acc_hi;
        double guarantee = 0.0;
        for (const Term& t : terms) {
            acc.add(t.log_value);
            acc_lo.add(t.log_lo);
            acc_hi.add(t.log_hi);
            if (t.log_value != kNegInf) guarantee = std::max(guarantee, t.guarantee);
        }
        out.log_estimate = acc.value();
        out.log_lo = acc_lo.value();
        out.log_hi = acc_hi.value();
        out.guarantee_exponent = out.log_estimate == kNegInf ? 0.0 : guarantee;
        out.exact = out.log_estimate == kNegInf;  // an all-zero sum is exactly 0
        if (out.exact) out.exact_value = mpz_class(0);
        out.meta.epsilon = epsilon_;
        out.meta.alpha_used = alpha;
        return out;
    }

    double epsilon_;
    const ApproxOptions& opt_;
};

}  // namespace detail

// General-case recursion: exact permanent below the base cap; otherwise test
// expansion at alpha = n^(-1/3) and either run the expander algorithm or split
// across every B subset of N(A) with |B| = |A| by the product identity
//     Perm(G) = sum_B Perm(A, B) * Perm(A^c, B^c),
// recursing on both induced subgraphs. Per-product guarantees compose as
// (1+eps)^|A| * (1+eps)^|A^c|. Terms are accumulated by log-sum-exp in
// lexicographic B order; if every term is exact the sum is carried in exact
// integers instead.
inline std::pair<ApproxResult, DecompositionTrace> approx_permanent_general(
    const BipartiteGraph& g, double epsilon, const ApproxOptions& opt = {}) {
    if (!(epsilon > 0.0)) throw PreconditionError("approx_permanent_general: epsilon must be > 0");
    detail::GeneralApprox driver(epsilon, opt);
    DecompositionTrace trace;
    try {
        ApproxResult result = driver.run(g, trace.root);
        result.meta.epsilon = epsilon;
        result.meta.trace_nodes = driver.nodes_created;
        if (result.meta.max_degree == 0) result.meta.max_degree = g.max_degree();
        return {std::move(result), std::move(trace)};
    } catch (const detail::GeneralApprox::BudgetExhausted&) {
        throw DecompositionBudgetError("approx_permanent_general: decomposition node budget (" +
                                           std::to_string(opt.node_budget) + ") exceeded",
                                       std::move(trace));
    }
}

// Both sides of the product identity, computed with the exact oracle:
// lhs = Perm(G), rhs = sum over B subset of N(A), |B| = |A|, of
// Perm(A, B) * Perm(A^c, B^c).
inline std::pair<mpz_class, mpz_class> product_identity_check(const BipartiteGraph& g,
                                                              const std::vector<int>& a,
                                                              const ExactOracleOptions& opt = {}) {
    const int n = g.part_size();
    detail::check_exact_cap(g, opt, "product_identity_check");
    if (a.empty() || static_cast<int>(a.size()) >= n)
        throw PreconditionError("product_identity_check: A must be a nonempty proper subset of V1");
    std::vector<int> a_sorted = a;
    std::sort(a_sorted.begin(), a_sorted.end());
    for (std::size_t i = 0; i < a_sorted.size(); ++i) {
        if (a_sorted[i] < 0 || a_sorted[i] >= n)
            throw PreconditionError("product_identity_check: A index out of range");
        if (i > 0 && a_sorted[i] == a_sorted[i - 1])
            throw PreconditionError("product_identity_check: duplicate index in A");
    }

    const mpz_class lhs = permanent_exact(g, opt);

    std::vector<int> a_comp, in_a(n, 0);
    for (int v : a_sorted) in_a[v] = 1;
    for (int v = 0; v < n; ++v)
        if (!in_a[v]) a_comp.push_back(v);

    const std::vector<int> na = neighbors(g, Side::Left, a_sorted);
    const int k = static_cast<int>(a_sorted.size());
    const int nn = static_cast<int>(na.size());

    mpz_class rhs = 0;
    if (nn >= k) {
        std::vector<int> comb(k), b(k), b_comp;
        std::vector<char> in_b(n, 0);
        for (int i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            for (int i = 0; i < k; ++i) b[i] = na[comb[i]];
            std::fill(in_b.begin(), in_b.end(), 0);
            for (int v : b) in_b[v] = 1;
            b_comp.clear();
            for (int v = 0; v < n; ++v)
                if (!in_b[v]) b_comp.push_back(v);
            rhs += permanent_exact(induced_subgraph(g, a_sorted, b), opt) *
                   permanent_exact(induced_subgraph(g, a_comp, b_comp), opt);
            int i = k - 1;
            while (i >= 0 && comb[i] == nn - k + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return {lhs, rhs};
}

}  // namespace permlab
