#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "permlab/errors.hpp"
#include "permlab/graph.hpp"
#include "permlab/numeric.hpp"

namespace permlab {

struct ExactOracleOptions {
    int exact_cap = 20;  // max part size for the exponential-time oracles
};

namespace detail {

inline void check_exact_cap(const BipartiteGraph& g, const ExactOracleOptions& opt,
                            const char* op) {
    if (g.part_size() > opt.exact_cap)
        throw CapacityError(std::string(op) + ": n = " + std::to_string(g.part_size()) +
                            " too large for exact oracle (cap " + std::to_string(opt.exact_cap) +
                            ")");
}

inline mpz_class mpz_from_i128(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(u >> 64));
    mpz_class out = (hi << 64) + mpz_class(static_cast<unsigned long>(u & ~0ull));
    return neg ? mpz_class(-out) : out;
}

// Ryser-style inclusion-exclusion over column subsets in Gray-code order,
// specialized to signed 128-bit accumulation. Valid while 2^n * n^n < 2^126,
// i.e. n <= 20.
inline mpz_class permanent_ryser_i128(const BipartiteGraph& g) {
    const int n = g.part_size();
    std::vector<int> rowsum(n, 0);
    __int128 total = 0;
    std::uint32_t prev = 0;
    int parity = 0;  // popcount of current subset mod 2
    for (std::uint32_t k = 1; k < (std::uint32_t{1} << n); ++k) {
        const std::uint32_t gray = k ^ (k >> 1);
        const std::uint32_t diff = gray ^ prev;
        const int col = std::countr_zero(diff);
        const int delta = (gray & diff) ? 1 : -1;
        for (int l : g.neighbors_of(Side::Right, col)) rowsum[l] += delta;
        parity ^= 1;
        prev = gray;
        __int128 prod = 1;
        for (int i = 0; i < n; ++i) {
            prod *= rowsum[i];
            if (prod == 0) break;
        }
        // sign (-1)^(n - |S|): positive iff |S| and n have equal parity
        if (((n & 1) ^ (parity & 1)) == 0) total += prod; else total -= prod;
    }
    return mpz_from_i128(total);
}

inline mpz_class permanent_ryser_mpz(const BipartiteGraph& g) {
    const int n = g.part_size();
    if (n > 62) throw CapacityError("permanent_exact: n > 62 unsupported");
    std::vector<long> rowsum(n, 0);
    mpz_class total = 0, prod;
    std::uint64_t prev = 0;
    int parity = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ prev;
        const int col = std::countr_zero(diff);
        const int delta = (gray & diff) ? 1 : -1;
        for (int l : g.neighbors_of(Side::Right, col)) rowsum[l] += delta;
        parity ^= 1;
        prev = gray;
        prod = 1;
        for (int i = 0; i < n && prod != 0; ++i) prod *= rowsum[i];
        if (((n & 1) ^ (parity & 1)) == 0) total += prod; else total -= prod;
    }
    return total;
}

}  // namespace detail

// Number of perfect matchings (the permanent of the adjacency matrix),
// by inclusion-exclusion over column subsets: 2^n * n work.
inline mpz_class permanent_exact(const BipartiteGraph& g, const ExactOracleOptions& opt = {}) {
    detail::check_exact_cap(g, opt, "permanent_exact");
    const int n = g.part_size();
    if (n == 0) return 1;
    return n <= 20 ? detail::permanent_ryser_i128(g) : detail::permanent_ryser_mpz(g);
}

// Exact matching-size counts M(0..n). M(0) = 1 always; M(n) = permanent.
struct MatchingCountVector {
    std::vector<mpz_class> counts;  // counts[k] = number of size-k matchings

    int part_size() const { return static_cast<int>(counts.size()) - 1; }
    const mpz_class& operator[](int k) const { return counts[k]; }
};

namespace detail {

// Branch on the lexicographically smallest remaining edge e = (u, v):
// count(G) = count(G - e) + count(G - {u, v}) with the second term shifted by
// one matched edge. Runs in time proportional to the total number of matchings.
struct MatchingCounter {
    const std::vector<std::pair<int, int>>& edges;
    std::vector<char> left_dead, right_dead;
    std::vector<mpz_class> counts;

    explicit MatchingCounter(const BipartiteGraph& g)
        : edges(g.edges()),
          left_dead(g.part_size(), 0),
          right_dead(g.part_size(), 0),
          counts(g.part_size() + 1, mpz_class(0)) {}

    void run() { rec(0, 0); }

    void rec(std::size_t from, int matched) {
        std::size_t i = from;
        while (i < edges.size() && (left_dead[edges[i].first] || right_dead[edges[i].second])) ++i;
        if (i == edges.size()) {
            counts[matched] += 1;
            return;
        }
        const auto [u, v] = edges[i];
        rec(i + 1, matched);  // e unused
        left_dead[u] = right_dead[v] = 1;
        rec(i + 1, matched + 1);  // e in the matching
        left_dead[u] = right_dead[v] = 0;
    }
};

}  // namespace detail

inline MatchingCountVector matching_counts(const BipartiteGraph& g,
                                           const ExactOracleOptions& opt = {}) {
    detail::check_exact_cap(g, opt, "matching_counts");
    detail::MatchingCounter counter(g);
    counter.run();
    return MatchingCountVector{std::move(counter.counts)};
}

// Z(lambda, G) = sum_k lambda^k M(k), exact over rationals. Every double
// lambda is an exact rational, so the value is exact for CLI inputs too.
struct ExactPartitionValue {
    mpq_class value;
    double lambda = 0.0;

    double log_value() const { return log_mpq(value); }
};

inline ExactPartitionValue partition_function_exact(const BipartiteGraph& g, double lambda,
                                                    const ExactOracleOptions& opt = {}) {
    if (!(lambda > 0.0)) throw PreconditionError("partition_function_exact: lambda must be > 0");
    detail::check_exact_cap(g, opt, "partition_function_exact");
    const MatchingCountVector m = matching_counts(g, opt);
    mpq_class lam(lambda);  // exact binary rational
    mpq_class value = 0, power = 1;
    for (int k = 0; k <= g.part_size(); ++k) {
        value += power * mpq_class(m[k]);
        power *= lam;
    }
    return ExactPartitionValue{value, lambda};
}

inline ExactPartitionValue partition_function_from_counts(const MatchingCountVector& m,
                                                          double lambda) {
    if (!(lambda > 0.0)) throw PreconditionError("partition function: lambda must be > 0");
    mpq_class lam(lambda);
    mpq_class value = 0, power = 1;
    for (const mpz_class& c : m.counts) {
        value += power * mpq_class(c);
        power *= lam;
    }
    return ExactPartitionValue{value, lambda};
}

// Maximum matching by augmenting-path search. Polynomial; no size cap.
inline Matching maximum_matching(const BipartiteGraph& g) {
    const int n = g.part_size();
    std::vector<int> left_match(n, -1), right_match(n, -1);
    std::vector<char> visited(n, 0);

    auto try_augment = [&](auto&& self, int l) -> bool {
        for (int r : g.neighbors_of(Side::Left, l)) {
            if (visited[r]) continue;
            visited[r] = 1;
            if (right_match[r] == -1 || self(self, right_match[r])) {
                left_match[l] = r;
                right_match[r] = l;
                return true;
            }
        }
        return false;
    };

    for (int l = 0; l < n; ++l) {
        std::fill(visited.begin(), visited.end(), 0);
        try_augment(try_augment, l);
    }
    std::vector<std::pair<int, int>> edges;
    for (int l = 0; l < n; ++l)
        if (left_match[l] != -1) edges.emplace_back(l, left_match[l]);
    return Matching(std::move(edges));
}

inline int max_matching_size(const BipartiteGraph& g) { return maximum_matching(g).size(); }

// One row of the M(k)/M(k+1) diagnostic table. The bound column evaluates
// 2 * (n/(n-k))^(c * ln(Delta) / ln(1+alpha)) with a caller-chosen constant c;
// ratios exceeding it are marked for calibration, never asserted.
struct RatioRow {
    int k = 0;
    bool defined = false;   // false when M(k+1) = 0
    mpq_class ratio;        // M(k)/M(k+1) when defined
    double ratio_double = 0.0;
    double bound = 0.0;
    bool exceeds = false;
};

struct RatioDiagnostics {
    std::vector<RatioRow> rows;
    double alpha = 0.0;
    int max_degree = 0;
    double c = 0.0;
};

inline RatioDiagnostics ratio_diagnostics(const BipartiteGraph& g, double alpha, int max_degree,
                                          double c = 1.0, const ExactOracleOptions& opt = {}) {
    detail::check_exact_cap(g, opt, "ratio_diagnostics");
    const int n = g.part_size();
    const MatchingCountVector m = matching_counts(g, opt);
    if (m[n] == 0) throw PreconditionError("ratio_diagnostics: graph has no perfect matching");

    double exponent;
    if (max_degree <= 1) exponent = 0.0;
    else if (alpha <= 0.0) exponent = std::numeric_limits<double>::infinity();
    else exponent = c * std::log(static_cast<double>(max_degree)) / std::log1p(alpha);

    RatioDiagnostics diag{{}, alpha, max_degree, c};
    for (int k = 0; k < n; ++k) {
        RatioRow row;
        row.k = k;
        row.bound = 2.0 * std::pow(static_cast<double>(n) / static_cast<double>(n - k), exponent);
        if (m[k + 1] != 0) {
            row.defined = true;
            row.ratio = mpq_class(m[k]) / mpq_class(m[k + 1]);
            row.ratio.canonicalize();
            row.ratio_double = row.ratio.get_d();
            row.exceeds = row.ratio_double > row.bound;
        }
        diag.rows.push_back(std::move(row));
    }
    return diag;
}

}  // namespace permlab
