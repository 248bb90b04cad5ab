#pragma once

#include <vector>

#include "bpc/prob_vector.hpp"
#include "bpc/truncated_pmf.hpp"

namespace bpc {

/// Target tail mass used when a truncation point is chosen automatically.
inline constexpr double default_tail_bound = 1e-15;

/// Poisson(lambda) restricted to {0..kmax}; the tail is a tight rigorous
/// upper bound on the remaining series.
TruncatedPMF pmf_poisson(double lambda, long long kmax);

/// Poisson(lambda) truncated where the tail drops below default_tail_bound.
TruncatedPMF pmf_poisson(double lambda);

struct Quantile {
    long long value = 0;
    /// Set when omega lands beyond the represented support (omega > 1 - tail);
    /// value is then the sentinel support_max + 1.
    bool beyond_truncation = false;
};

/// Generalized inverse cdf: smallest support point k with F(k) >= omega.
Quantile quantile(const TruncatedPMF& law, double omega);

/// Exact law of a sum of independent Bernoulli(p_i), full support {0..n}.
TruncatedPMF pmf_poisson_binomial(const ProbVector& p);

/// Same law truncated at kmax <= n; mass above kmax is carried as tail.
TruncatedPMF pmf_poisson_binomial(const ProbVector& p, long long kmax);

struct TotalVariation {
    double value = 0;   ///< TV restricted to the stored supports
    double radius = 0;  ///< the true TV lies in [value, value + radius]
};

/// Half L1 distance over the union of stored supports. Exact when both
/// tails vanish; otherwise the unseen mass is reported as an error radius.
TotalVariation total_variation(const TruncatedPMF& a, const TruncatedPMF& b);

inline constexpr long long default_zeta_kmax = 32;

/// Law of the absolute discrepancy of one coupled Bernoulli(p)/Poisson(p)
/// pair driven by a shared uniform:
///   P(0) = 1 - p(1 - e^-p)
///   P(1) = e^-p - 1 + p + (p^2/2) e^-p
///   P(k) = p^(k+1) e^-p / (k+1)!   for k >= 2.
TruncatedPMF pmf_zeta(double p, long long kmax = default_zeta_kmax);

/// Exact joint law of one coupled pair (nu, pi) obtained by pushing a single
/// uniform through both quantile transforms:
///   (0,0) with prob 1-p,  (1,0) with prob e^-p - (1-p),
///   (1,k) with prob e^-p p^k / k!  for k >= 1; the rest is tail.
class JointIncrementPMF {
public:
    JointIncrementPMF(double p, long long kmax);
    explicit JointIncrementPMF(double p);  // kmax with tail < default_tail_bound

    double p() const { return p_; }
    long long kmax() const { return static_cast<long long>(prob1k_.size()); }
    double prob_00() const { return prob00_; }
    double prob_10() const { return prob10_; }
    /// P(nu = 1, pi = k) for 1 <= k <= kmax.
    double prob_1k(long long k) const { return prob1k_[static_cast<std::size_t>(k - 1)]; }
    double tail() const { return tail_; }

    TruncatedPMF marginal_bernoulli() const;
    TruncatedPMF marginal_poisson() const;
    /// Pushforward of the joint law under |nu - pi|.
    TruncatedPMF abs_diff_law() const;

private:
    double p_;
    double prob00_;
    double prob10_;
    std::vector<double> prob1k_;  // index k-1 holds P(1, k)
    double tail_;
};

JointIncrementPMF pmf_joint_increment(double p, long long kmax);
JointIncrementPMF pmf_joint_increment(double p);

namespace detail {
/// Tight upper bound on sum_{j > kmax} e^-lambda lambda^j / j!, continued
/// from the mass at kmax. Used so carried tails stay at the true scale
/// instead of picking up summation dust.
double poisson_tail_above(double lambda, long long kmax, double mass_at_kmax);

/// Smallest kmax with Poisson(lambda) tail below the requested bound.
long long poisson_kmax_for_tail(double lambda, double tail_bound);
}  // namespace detail

}  // namespace bpc
