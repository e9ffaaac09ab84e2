#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace permlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Natural log of a positive big integer, via mantissa/exponent extraction.
inline double log_mpz(const mpz_class& z) {
    if (sgn(z) < 0) return std::numeric_limits<double>::quiet_NaN();
    if (sgn(z) == 0) return kNegInf;
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

inline double log_mpq(const mpq_class& q) {
    return log_mpz(q.get_num()) - log_mpz(q.get_den());
}

// log(sum_i exp(args[i])), max-shifted. Empty input and all -inf give -inf.
inline double log_sum_exp(std::span<const double> args) {
    double m = kNegInf;
    for (double x : args) m = std::max(m, x);
    if (std::isinf(m) && m < 0) return kNegInf;
    double sum = 0.0;
    for (double x : args) sum += std::exp(x - m);
    return m + std::log(sum);
}

inline double log_sum_exp(const std::vector<double>& args) {
    return log_sum_exp(std::span<const double>(args));
}

// Streaming log-sum-exp. Accumulation order is the insertion order, so a
// fixed insertion order gives bit-reproducible results.
class LogSumAccumulator {
public:
    void add(double log_term) {
        if (std::isinf(log_term) && log_term < 0) return;
        if (empty_) {
            max_ = log_term;
            sum_ = 1.0;
            empty_ = false;
            return;
        }
        if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }

    double value() const { return empty_ ? kNegInf : max_ + std::log(sum_); }
    bool empty() const { return empty_; }

private:
    bool empty_ = true;
    double max_ = kNegInf;
    double sum_ = 0.0;
};

}  // namespace permlab
