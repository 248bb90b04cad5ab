#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bpc/dist_core.hpp"
#include "bpc/prob_vector.hpp"
#include "bpc/rng.hpp"
#include "bpc/truncated_pmf.hpp"

namespace bpc {

struct CoupledPair {
    int nu = 0;
    long long pi = 0;
    /// pi landed beyond the Poisson truncation point; pi holds the sentinel
    /// kmax + 1 and callers must treat the draw conservatively.
    bool pi_beyond_truncation = false;
};

/// Drives both the Bernoulli(p) and the Poisson(p) quantile transform with
/// one shared uniform. Precomputes the Poisson cdf once so repeated draws
/// are cheap.
class QuantileCoupler {
public:
    explicit QuantileCoupler(double p);
    QuantileCoupler(double p, long long kmax);

    CoupledPair operator()(double omega) const;

    double p() const { return p_; }
    const TruncatedPMF& poisson_law() const { return poisson_; }

private:
    double p_;
    TruncatedPMF poisson_;
    std::vector<double> cdf_;
};

/// One-shot version of QuantileCoupler.
CoupledPair sample_coupled_pair(double p, double omega);

struct CoupledPath {
    std::vector<int> nu;
    std::vector<long long> pi;
    std::uint64_t seed = 0;
};

/// Draws one uniform per index and couples each (nu_i, pi_i) through it.
/// Bitwise reproducible from the seed.
CoupledPath simulate_coupled_path(const ProbVector& p, std::uint64_t seed);

/// max over prefixes k of |sum_{i<=k} (nu_i - pi_i)|.
long long max_deviation(const CoupledPath& path);

struct MCEstimate {
    double point = 0.0;
    double ci_low = 0.0;   ///< Wilson score interval, 95%
    double ci_high = 1.0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
};

/// 95% Wilson score interval for a binomial proportion.
MCEstimate wilson_interval(long long successes, long long n);

/// Interval widened to a multiple of its half-width around its center,
/// clamped to [0,1]. Used by the Monte-Carlo-vs-exact agreement checks.
std::pair<double, double> widened_interval(const MCEstimate& e, double radii);

struct TailSampleCounts {
    long long max_exceedances = 0;       ///< paths with max deviation > z
    long long zeta_sum_exceedances = 0;  ///< paths with sum |nu - pi| > z
    long long n_samples = 0;
};

/// Counts both exceedance events on identical sample streams, so the
/// pathwise domination max <= sum |nu - pi| can be checked sample by sample.
/// Deterministic in (p, z, n_samples, seed) regardless of thread count.
TailSampleCounts mc_tail_counts(const ProbVector& p, long long z,
                                long long n_samples, std::uint64_t seed,
                                int threads = 0);

/// Monte Carlo frequency of {max deviation > z} with a Wilson interval.
MCEstimate estimate_tail(const ProbVector& p, long long z, long long n_samples,
                         std::uint64_t seed, int threads = 0);

/// Mixture realization of the coupling that attains the total variation
/// distance: with the overlap weight, both coordinates are drawn equal from
/// the normalized overlap; otherwise they are drawn from the normalized
/// positive parts of (a-b) and (b-a).
class MaximalCoupler {
public:
    /// Requires both tails < 1e-12 (truncate finer first).
    MaximalCoupler(const TruncatedPMF& a, const TruncatedPMF& b);

    /// Analytic P(x != y): one minus the overlap weight. Computed from the
    /// mixture weights, not sampled.
    double mismatch_probability() const { return mismatch_; }

    std::pair<long long, long long> sample(SplitMix64& rng) const;

private:
    double mismatch_;
    // Each component stored as (offset, cumulative masses normalized to 1).
    struct Component {
        long long offset = 0;
        std::vector<double> cdf;
        bool empty() const { return cdf.empty(); }
    };
    static long long draw(const Component& c, double u);
    Component overlap_;
    Component only_a_;
    Component only_b_;
};

/// One-shot draw from the maximal coupling of a and b.
std::pair<long long, long long> maximal_coupling_sample(const TruncatedPMF& a,
                                                        const TruncatedPMF& b,
                                                        std::uint64_t seed);

}  // namespace bpc
