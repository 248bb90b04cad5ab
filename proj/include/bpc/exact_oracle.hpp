#pragma once

#include <optional>

#include "bpc/dist_core.hpp"
#include "bpc/prob_vector.hpp"
#include "bpc/truncated_pmf.hpp"

namespace bpc {

/// Default cap for discrepancy-sum supports and tail indices; probabilities
/// underflow far earlier, and callers may override.
inline constexpr long long default_sum_kmax = 64;

/// Exact law of sum_i zeta_i by sequential convolution of the per-index
/// discrepancy laws. Tail propagation is conservative: any mass that touches
/// a tail, or lands above kmax, goes to the tail.
TruncatedPMF pmf_zeta_sum(const ProbVector& p, long long kmax = default_sum_kmax);

struct QTail {
    double value = 0.0;   ///< tail-inclusive upper sum; true Q in [value - radius, value]
    double radius = 0.0;
};

/// Q_n(k) = P(sum_i zeta_i >= k), computed as the tail-inclusive upper sum
/// of pmf_zeta_sum from k.
QTail q_tail(const ProbVector& p, long long k, long long kmax = default_sum_kmax);
/// Same, reusing an already-computed discrepancy-sum pmf.
QTail q_tail(const TruncatedPMF& zeta_sum, long long k);

struct ExceedanceResult {
    double prob_low = 0.0;
    double prob_high = 0.0;
    long long z = 0;
    double truncation_tail = 0.0;  ///< prob_high - prob_low never exceeds this
};

/// Exact probability that the path maximum of |prefix sums of (nu - pi)|
/// exceeds z under the shared-uniform coupling. Forward DP over the bounded
/// deviation interval [-z, z] plus one absorbing exceeded state; truncated
/// Poisson mass is routed to "exceeded" for the upper value and to "stay"
/// for the lower value, which brackets the exact probability rigorously.
ExceedanceResult exact_exceedance(const ProbVector& p, long long z,
                                  std::optional<long long> poisson_kmax = std::nullopt);

struct MgfBound {
    double value = 0.0;
    bool overflow = false;  ///< value saturated to +infinity
};

/// Product bound on E exp(t sum_i zeta_i):
///   prod_i exp(e^t p_i^2 exp(e^t p_i)),  t > 0.
MgfBound mgf_bound(const ProbVector& p, double t);

}  // namespace bpc
