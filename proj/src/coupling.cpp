#include "bpc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "bpc/parallel.hpp"

namespace bpc {

QuantileCoupler::QuantileCoupler(double p, long long kmax)
    : p_(p), poisson_(pmf_poisson(p, kmax)) {
    if (!(p > 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("QuantileCoupler: p outside (0, 1]");
    }
    cdf_.reserve(poisson_.size());
    double cum = 0.0;
    for (double m : poisson_.mass()) {
        cum += m;
        cdf_.push_back(cum);
    }
}

QuantileCoupler::QuantileCoupler(double p)
    : QuantileCoupler(p, detail::poisson_kmax_for_tail(p, default_tail_bound)) {}

CoupledPair QuantileCoupler::operator()(double omega) const {
    if (!(omega >= 0.0) || !(omega <= 1.0)) {
        throw std::invalid_argument("QuantileCoupler: omega outside [0, 1]");
    }
    CoupledPair out;
    out.nu = omega > 1.0 - p_ ? 1 : 0;
    if (omega > 1.0 - poisson_.tail()) {
        out.pi = poisson_.support_max() + 1;
        out.pi_beyond_truncation = true;
        return out;
    }
    for (std::size_t k = 0; k < cdf_.size(); ++k) {
        if (cdf_[k] >= omega) {
            out.pi = static_cast<long long>(k);
            return out;
        }
    }
    out.pi = poisson_.support_max();
    return out;
}

CoupledPair sample_coupled_pair(double p, double omega) {
    return QuantileCoupler(p)(omega);
}

CoupledPath simulate_coupled_path(const ProbVector& p, std::uint64_t seed) {
    CoupledPath path;
    path.seed = seed;
    path.nu.resize(p.size());
    path.pi.resize(p.size());
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const CoupledPair pair = QuantileCoupler(p[i])(rng.uniform01());
        path.nu[i] = pair.nu;
        path.pi[i] = pair.pi;
    }
    return path;
}

long long max_deviation(const CoupledPath& path) {
    if (path.nu.size() != path.pi.size()) {
        throw std::invalid_argument("max_deviation: coordinate lengths differ");
    }
    long long dev = 0;
    long long worst = 0;
    for (std::size_t i = 0; i < path.nu.size(); ++i) {
        dev += path.nu[i] - path.pi[i];
        worst = std::max(worst, std::llabs(dev));
    }
    return worst;
}

MCEstimate wilson_interval(long long successes, long long n) {
    if (n < 1 || successes < 0 || successes > n) {
        throw std::invalid_argument("wilson_interval: bad counts");
    }
    constexpr double zq = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double denom = 1.0 + zq * zq / nn;
    const double center = (phat + zq * zq / (2.0 * nn)) / denom;
    const double half =
        zq * std::sqrt(phat * (1.0 - phat) / nn + zq * zq / (4.0 * nn * nn)) / denom;
    MCEstimate e;
    e.point = phat;
    e.ci_low = std::min(phat, std::max(0.0, center - half));
    e.ci_high = std::max(phat, std::min(1.0, center + half));
    e.n_samples = n;
    return e;
}

std::pair<double, double> widened_interval(const MCEstimate& e, double radii) {
    const double center = 0.5 * (e.ci_low + e.ci_high);
    const double half = 0.5 * (e.ci_high - e.ci_low) * radii;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {
constexpr long long mc_block_size = 1 << 16;
}

TailSampleCounts mc_tail_counts(const ProbVector& p, long long z,
                                long long n_samples, std::uint64_t seed,
                                int threads) {
    if (n_samples < 1) {
        throw std::invalid_argument("mc_tail_counts: need at least one sample");
    }
    if (z < 0) {
        throw std::invalid_argument("mc_tail_counts: z must be >= 0");
    }
    std::vector<QuantileCoupler> couplers;
    couplers.reserve(p.size());
    for (double pi : p) couplers.emplace_back(pi);

    const long long n_blocks = (n_samples + mc_block_size - 1) / mc_block_size;
    std::vector<TailSampleCounts> per_block(static_cast<std::size_t>(n_blocks));

    // Block b owns samples [b*B, min((b+1)*B, N)); its stream depends only on
    // (seed, b), so counts are identical for every thread count.
    parallel_for(n_blocks, threads, [&](long long b) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        const long long begin = b * mc_block_size;
        const long long end = std::min(n_samples, begin + mc_block_size);
        TailSampleCounts counts;
        for (long long s = begin; s < end; ++s) {
            long long dev = 0;
            long long worst = 0;
            long long abs_sum = 0;
            bool beyond = false;
            for (const auto& coupler : couplers) {
                const CoupledPair pair = coupler(rng.uniform01());
                beyond |= pair.pi_beyond_truncation;
                dev += pair.nu - pair.pi;
                worst = std::max(worst, std::llabs(dev));
                abs_sum += std::llabs(pair.nu - pair.pi);
            }
            // A beyond-truncation draw counts as an exceedance outright;
            // it happens with probability < n * 1e-15.
            if (beyond || worst > z) ++counts.max_exceedances;
            if (beyond || abs_sum > z) ++counts.zeta_sum_exceedances;
        }
        per_block[static_cast<std::size_t>(b)] = counts;
    });

    TailSampleCounts total;
    total.n_samples = n_samples;
    for (const auto& c : per_block) {
        total.max_exceedances += c.max_exceedances;
        total.zeta_sum_exceedances += c.zeta_sum_exceedances;
    }
    return total;
}

MCEstimate estimate_tail(const ProbVector& p, long long z, long long n_samples,
                         std::uint64_t seed, int threads) {
    const TailSampleCounts counts = mc_tail_counts(p, z, n_samples, seed, threads);
    MCEstimate e = wilson_interval(counts.max_exceedances, n_samples);
    e.seed = seed;
    return e;
}

MaximalCoupler::MaximalCoupler(const TruncatedPMF& a, const TruncatedPMF& b) {
    constexpr double tail_limit = 1e-12;
    if (a.tail() >= tail_limit || b.tail() >= tail_limit) {
        throw std::invalid_argument(
            "MaximalCoupler: tails too large; truncate finer first");
    }
    const long long lo = std::min(a.offset(), b.offset());
    const long long hi = std::max(a.support_max(), b.support_max());

    std::vector<double> overlap, only_a, only_b;
    overlap.reserve(static_cast<std::size_t>(hi - lo + 1));
    only_a.reserve(overlap.capacity());
    only_b.reserve(overlap.capacity());
    double w_overlap = 0.0, w_a = 0.0, w_b = 0.0;
    for (long long k = lo; k <= hi; ++k) {
        const double ma = a(k);
        const double mb = b(k);
        const double m = std::min(ma, mb);
        overlap.push_back(m);
        only_a.push_back(ma - m);
        only_b.push_back(mb - m);
        w_overlap += m;
        w_a += ma - m;
        w_b += mb - m;
    }
    mismatch_ = std::max(0.0, 1.0 - w_overlap);

    auto build = [lo](std::vector<double>& mass, double weight) {
        Component c;
        if (weight <= 0.0) return c;
        c.offset = lo;
        c.cdf.reserve(mass.size());
        double cum = 0.0;
        for (double m : mass) {
            cum += m / weight;
            c.cdf.push_back(cum);
        }
        return c;
    };
    overlap_ = build(overlap, w_overlap);
    only_a_ = build(only_a, w_a);
    only_b_ = build(only_b, w_b);
}

long long MaximalCoupler::draw(const Component& c, double u) {
    const auto it = std::lower_bound(c.cdf.begin(), c.cdf.end(), u);
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - c.cdf.begin()), c.cdf.size() - 1);
    return c.offset + static_cast<long long>(idx);
}

std::pair<long long, long long> MaximalCoupler::sample(SplitMix64& rng) const {
    const double u = rng.uniform01();
    if (u >= mismatch_ || only_a_.empty() || only_b_.empty()) {
        const long long x = draw(overlap_, rng.uniform01());
        return {x, x};
    }
    const long long x = draw(only_a_, rng.uniform01());
    const long long y = draw(only_b_, rng.uniform01());
    return {x, y};
}

std::pair<long long, long long> maximal_coupling_sample(const TruncatedPMF& a,
                                                        const TruncatedPMF& b,
                                                        std::uint64_t seed) {
    SplitMix64 rng(seed);
    return MaximalCoupler(a, b).sample(rng);
}

}  // namespace bpc
