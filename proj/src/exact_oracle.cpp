#include "bpc/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bpc {

TruncatedPMF pmf_zeta_sum(const ProbVector& p, long long kmax) {
    if (kmax < 0) {
        throw std::invalid_argument("pmf_zeta_sum: kmax must be >= 0");
    }
    const std::size_t cap = static_cast<std::size_t>(kmax) + 1;
    std::vector<double> acc{1.0};
    double tail = 0.0;
    std::vector<double> next;
    for (double pi : p) {
        const TruncatedPMF zi = pmf_zeta(pi);
        const auto& zm = zi.mass();
        const std::size_t full = acc.size() + zm.size() - 1;
        const std::size_t keep = std::min(full, cap);
        next.assign(full, 0.0);
        for (std::size_t a = 0; a < acc.size(); ++a) {
            if (acc[a] == 0.0) continue;
            for (std::size_t b = 0; b < zm.size(); ++b) {
                next[a + b] += acc[a] * zm[b];
            }
        }
        // Everything additive: overflow above the cap and the component tail
        // both join the carried tail, so no cancellation dust accumulates.
        double overflow = 0.0;
        for (std::size_t k = full; k-- > keep;) overflow += next[k];
        next.resize(keep);
        tail += zi.tail() + overflow;
        acc.swap(next);
    }
    tail = std::min(tail, 1.0);
    return TruncatedPMF(0, std::move(acc), tail);
}

QTail q_tail(const TruncatedPMF& zeta_sum, long long k) {
    if (k < 1) {
        throw std::invalid_argument("q_tail: k must be >= 1");
    }
    // Sum ascending in magnitude: tail first, then masses from the far end.
    double upper = zeta_sum.tail();
    const auto& mass = zeta_sum.mass();
    const long long first = std::max<long long>(k - zeta_sum.offset(), 0);
    for (std::size_t i = mass.size(); i-- > static_cast<std::size_t>(first);) {
        upper += mass[i];
    }
    QTail q;
    q.value = std::min(upper, 1.0);
    q.radius = std::max(zeta_sum.tail(), 1e-15);
    return q;
}

QTail q_tail(const ProbVector& p, long long k, long long kmax) {
    if (k < 1) {
        throw std::invalid_argument("q_tail: k must be >= 1");
    }
    return q_tail(pmf_zeta_sum(p, std::max(kmax, k)), k);
}

namespace {

// One forward pass of the absorbing-state DP. route_tail_to_exceeded picks
// which side of the bracket is produced.
double exceedance_pass(const std::vector<JointIncrementPMF>& joints, long long z,
                       bool route_tail_to_exceeded) {
    const std::size_t width = static_cast<std::size_t>(2 * z + 1);
    std::vector<double> state(width, 0.0);
    std::vector<double> next(width, 0.0);
    state[static_cast<std::size_t>(z)] = 1.0;  // deviation 0
    double exceeded = 0.0;
    for (const auto& joint : joints) {
        std::fill(next.begin(), next.end(), 0.0);
        const double stay = joint.prob_00() + (joint.kmax() >= 1 ? joint.prob_1k(1) : 0.0);
        for (std::size_t idx = 0; idx < width; ++idx) {
            const double m = state[idx];
            if (m == 0.0) continue;
            const long long d = static_cast<long long>(idx) - z;
            // (0,0) and (1,1): deviation unchanged
            next[idx] += m * stay;
            // (1,0): deviation +1
            if (d + 1 > z) {
                exceeded += m * joint.prob_10();
            } else {
                next[idx + 1] += m * joint.prob_10();
            }
            // (1,k), k >= 2: deviation + (1 - k)
            for (long long k = 2; k <= joint.kmax(); ++k) {
                const long long nd = d + 1 - k;
                if (nd < -z) {
                    exceeded += m * joint.prob_1k(k);
                } else {
                    next[static_cast<std::size_t>(nd + z)] += m * joint.prob_1k(k);
                }
            }
            if (route_tail_to_exceeded) {
                exceeded += m * joint.tail();
            } else {
                next[idx] += m * joint.tail();
            }
        }
        state.swap(next);
    }
    return std::min(exceeded, 1.0);
}

}  // namespace

ExceedanceResult exact_exceedance(const ProbVector& p, long long z,
                                  std::optional<long long> poisson_kmax) {
    if (z < 0) {
        throw std::invalid_argument("exact_exceedance: z must be >= 0");
    }
    std::vector<JointIncrementPMF> joints;
    joints.reserve(p.size());
    double trunc = 0.0;
    for (double pi : p) {
        joints.push_back(poisson_kmax ? JointIncrementPMF(pi, *poisson_kmax)
                                      : JointIncrementPMF(pi));
        trunc += joints.back().tail();
    }
    ExceedanceResult r;
    r.z = z;
    r.prob_high = exceedance_pass(joints, z, true);
    r.prob_low = std::min(exceedance_pass(joints, z, false), r.prob_high);
    // rounding headroom on top of the routed tail mass keeps the field an
    // upper bound on the bracket width
    r.truncation_tail =
        std::max(trunc, r.prob_high - r.prob_low) +
        static_cast<double>(p.size() + 1) * std::numeric_limits<double>::epsilon();
    return r;
}

MgfBound mgf_bound(const ProbVector& p, double t) {
    if (!(t > 0.0)) {
        throw std::invalid_argument("mgf_bound: t must be positive");
    }
    const double et = std::exp(t);
    double exponent = 0.0;
    for (double pi : p) {
        exponent += et * pi * pi * std::exp(et * pi);
    }
    MgfBound b;
    if (!(exponent <= 709.0)) {  // exp would overflow (or exponent is inf/nan)
        b.value = std::numeric_limits<double>::infinity();
        b.overflow = true;
        return b;
    }
    b.value = std::exp(exponent);
    return b;
}

}  // namespace bpc
