#include "bpc/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bpc {

namespace detail {

double poisson_tail_above(double lambda, long long kmax, double mass_at_kmax) {
    // Continue the term recurrence until the geometric closure is negligible
    // relative to what has been accumulated, then close with it. The result
    // is an upper bound on the true remainder and tight to ~1e-16 relative.
    double term = mass_at_kmax;
    double tail = 0.0;
    long long j = kmax;
    const long long j_cap = kmax + 200000;
    for (;;) {
        ++j;
        term *= lambda / static_cast<double>(j);
        tail += term;
        if (term == 0.0) break;
        double ratio = lambda / static_cast<double>(j + 1);
        if (ratio < 1.0) {
            double closure = term * ratio / (1.0 - ratio);
            if (closure <= 1e-16 * tail || j >= j_cap) {
                tail += closure;
                break;
            }
        }
    }
    return tail;
}

long long poisson_kmax_for_tail(double lambda, double tail_bound) {
    // tail(K) <= mass_K * r / (1 - r) with r = lambda / (K + 1), since the
    // term ratio only shrinks past K. Walk out until that certifies the bound.
    double term = std::exp(-lambda);
    double k = 0.0;
    long long kk = 0;
    for (;;) {
        double ratio = lambda / (k + 1.0);
        if (ratio < 0.5 && term * ratio / (1.0 - ratio) < tail_bound) break;
        k += 1.0;
        ++kk;
        term *= lambda / k;
        if (kk > 2000000) break;
    }
    return kk;
}

}  // namespace detail

TruncatedPMF pmf_poisson(double lambda, long long kmax) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("pmf_poisson: lambda must be positive");
    }
    if (kmax < 0) {
        throw std::invalid_argument("pmf_poisson: kmax must be >= 0");
    }
    std::vector<double> mass(static_cast<std::size_t>(kmax) + 1);
    double term = std::exp(-lambda);
    mass[0] = term;
    for (long long k = 1; k <= kmax; ++k) {
        term *= lambda / static_cast<double>(k);
        mass[static_cast<std::size_t>(k)] = term;
    }
    double tail = detail::poisson_tail_above(lambda, kmax, term);
    return TruncatedPMF(0, std::move(mass), tail);
}

TruncatedPMF pmf_poisson(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("pmf_poisson: lambda must be positive");
    }
    return pmf_poisson(lambda, detail::poisson_kmax_for_tail(lambda, default_tail_bound));
}

Quantile quantile(const TruncatedPMF& law, double omega) {
    if (!(omega >= 0.0) || !(omega <= 1.0)) {
        throw std::invalid_argument("quantile: omega outside [0, 1]");
    }
    if (omega > 1.0 - law.tail()) {
        return {law.support_max() + 1, true};
    }
    double cum = 0.0;
    const auto& mass = law.mass();
    for (std::size_t i = 0; i < mass.size(); ++i) {
        cum += mass[i];
        if (cum >= omega) return {law.offset() + static_cast<long long>(i), false};
    }
    // Rounding left cum marginally below omega <= 1 - tail.
    return {law.support_max(), false};
}

TruncatedPMF pmf_poisson_binomial(const ProbVector& p) {
    return pmf_poisson_binomial(p, static_cast<long long>(p.size()));
}

TruncatedPMF pmf_poisson_binomial(const ProbVector& p, long long kmax) {
    const long long n = static_cast<long long>(p.size());
    if (kmax < 0 || kmax > n) {
        throw std::invalid_argument("pmf_poisson_binomial: kmax must lie in [0, n]");
    }
    // One-variable-at-a-time convolution.
    std::vector<double> full(static_cast<std::size_t>(n) + 1, 0.0);
    full[0] = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p[i];
        for (std::size_t k = i + 1; k-- > 0;) {
            full[k + 1] += full[k] * pi;
            full[k] *= 1.0 - pi;
        }
    }
    if (kmax == n) {
        return TruncatedPMF(0, std::move(full), 0.0);
    }
    double tail = 0.0;
    for (std::size_t k = full.size(); k-- > static_cast<std::size_t>(kmax) + 1;) {
        tail += full[k];
    }
    full.resize(static_cast<std::size_t>(kmax) + 1);
    return TruncatedPMF(0, std::move(full), tail);
}

TotalVariation total_variation(const TruncatedPMF& a, const TruncatedPMF& b) {
    const long long lo = std::min(a.offset(), b.offset());
    const long long hi = std::max(a.support_max(), b.support_max());
    double l1 = 0.0;
    for (long long k = lo; k <= hi; ++k) {
        l1 += std::abs(a(k) - b(k));
    }
    return {0.5 * l1, 0.5 * (a.tail() + b.tail())};
}

TruncatedPMF pmf_zeta(double p, long long kmax) {
    if (!(p > 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("pmf_zeta: p outside (0, 1]");
    }
    if (kmax < 0) {
        throw std::invalid_argument("pmf_zeta: kmax must be >= 0");
    }
    const double em = std::exp(-p);
    std::vector<double> mass(static_cast<std::size_t>(kmax) + 1, 0.0);
    // expm1 keeps the small-p cancellations exact.
    mass[0] = 1.0 + p * std::expm1(-p);
    const double mass1 = (std::expm1(-p) + p) + 0.5 * p * p * em;

    // Poisson(p) terms; mass[k] = poisson mass at k+1 for k >= 2.
    const double pois_next = em * p * p / 2.0;  // poisson mass at 2
    if (kmax >= 1) mass[1] = mass1;
    double last_pois = pois_next;
    for (long long k = 2; k <= kmax; ++k) {
        last_pois = last_pois * p / static_cast<double>(k + 1);
        mass[static_cast<std::size_t>(k)] = last_pois;
    }
    double tail;
    if (kmax == 0) {
        tail = mass1 + detail::poisson_tail_above(p, 2, pois_next);
    } else {
        // mass beyond kmax is the Poisson series above kmax + 1
        tail = detail::poisson_tail_above(p, kmax + 1, last_pois);
    }
    return TruncatedPMF(0, std::move(mass), tail);
}

JointIncrementPMF::JointIncrementPMF(double p, long long kmax) : p_(p) {
    if (!(p > 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("pmf_joint_increment: p outside (0, 1]");
    }
    if (kmax < 0) {
        throw std::invalid_argument("pmf_joint_increment: kmax must be >= 0");
    }
    prob00_ = 1.0 - p;
    prob10_ = std::expm1(-p) + p;  // e^-p - (1 - p), cancellation-free
    prob1k_.resize(static_cast<std::size_t>(kmax));
    double term = std::exp(-p);
    for (long long k = 1; k <= kmax; ++k) {
        term *= p / static_cast<double>(k);
        prob1k_[static_cast<std::size_t>(k - 1)] = term;
    }
    tail_ = detail::poisson_tail_above(p, kmax, term);
}

JointIncrementPMF::JointIncrementPMF(double p)
    : JointIncrementPMF(p, detail::poisson_kmax_for_tail(p, default_tail_bound)) {}

TruncatedPMF JointIncrementPMF::marginal_bernoulli() const {
    return TruncatedPMF::bernoulli(p_);
}

TruncatedPMF JointIncrementPMF::marginal_poisson() const {
    std::vector<double> mass(prob1k_.size() + 1);
    mass[0] = prob00_ + prob10_;
    for (std::size_t i = 0; i < prob1k_.size(); ++i) mass[i + 1] = prob1k_[i];
    return TruncatedPMF(0, std::move(mass), tail_);
}

TruncatedPMF JointIncrementPMF::abs_diff_law() const {
    // |nu - pi|: cells (0,0) and (1,1) land at 0, (1,0) and (1,2) at 1,
    // (1,k) at k-1 for k >= 2.
    const long long km = kmax();
    const long long out_max = std::max<long long>(km - 1, 1);
    std::vector<double> mass(static_cast<std::size_t>(out_max) + 1, 0.0);
    mass[0] = prob00_ + (km >= 1 ? prob_1k(1) : 0.0);
    mass[1] = prob10_ + (km >= 2 ? prob_1k(2) : 0.0);
    for (long long k = 3; k <= km; ++k) {
        mass[static_cast<std::size_t>(k - 1)] = prob_1k(k);
    }
    return TruncatedPMF(0, std::move(mass), tail_);
}

JointIncrementPMF pmf_joint_increment(double p, long long kmax) {
    return JointIncrementPMF(p, kmax);
}

JointIncrementPMF pmf_joint_increment(double p) { return JointIncrementPMF(p); }

}  // namespace bpc
