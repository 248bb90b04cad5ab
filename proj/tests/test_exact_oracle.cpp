#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "bpc/exact_oracle.hpp"
#include "bpc/rng.hpp"
#include "test_helpers.hpp"

using namespace bpc;

namespace {

// Brute-force law of zeta_1 + zeta_2 + zeta_3 over the truncated supports.
std::vector<double> brute_zeta_sum(const std::vector<double>& p, long long kmax) {
    std::vector<double> acc{1.0};
    for (double pi : p) {
        const TruncatedPMF z = pmf_zeta(pi);
        std::vector<double> next(acc.size() + z.size() - 1, 0.0);
        for (std::size_t a = 0; a < acc.size(); ++a) {
            for (std::size_t b = 0; b < z.size(); ++b) next[a + b] += acc[a] * z.mass()[b];
        }
        acc.swap(next);
    }
    acc.resize(static_cast<std::size_t>(kmax) + 1, 0.0);
    return acc;
}

// Q via the total-probability recursion over the last index:
// Q_i(k) = P(zeta_i >= k) + sum_{m=0}^{k-1} P(zeta_i = m) Q_{i-1}(k - m).
double q_recursion(const std::vector<double>& p, long long k_target) {
    const long long K = k_target;
    std::vector<double> prev(static_cast<std::size_t>(K) + 1, 0.0);
    prev[0] = 1.0;  // Q_0(k) = [k <= 0]
    for (double pi : p) {
        const TruncatedPMF z = pmf_zeta(pi, K);
        std::vector<double> cur(static_cast<std::size_t>(K) + 1, 0.0);
        cur[0] = 1.0;
        for (long long k = 1; k <= K; ++k) {
            double q = bpc::testing::zeta_survival(pi, k);
            for (long long m = 0; m < k; ++m) {
                q += z(m) * prev[static_cast<std::size_t>(k - m)];
            }
            cur[static_cast<std::size_t>(k)] = q;
        }
        prev.swap(cur);
    }
    return prev[static_cast<std::size_t>(K)];
}

}  // namespace

TEST_CASE("pmf_zeta_sum: base case, product case, brute force, order") {
    const ProbVector single({0.35});
    const TruncatedPMF s = pmf_zeta_sum(single);
    const TruncatedPMF z = pmf_zeta(0.35);
    for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(s.mass()[k] == doctest::Approx(z.mass()[k]).epsilon(1e-15));
    }

    const TruncatedPMF pair = pmf_zeta_sum(ProbVector({0.5, 0.5}));
    const double m0 = 1.0 - 0.5 * (1.0 - std::exp(-0.5));
    CHECK(pair.mass()[0] == doctest::Approx(m0 * m0).epsilon(1e-14));

    const std::vector<double> p3{0.1, 0.2, 0.3};
    const TruncatedPMF law = pmf_zeta_sum(ProbVector(p3), 20);
    const auto brute = brute_zeta_sum(p3, 20);
    for (std::size_t k = 0; k <= 20; ++k) {
        CHECK(std::abs(law.mass()[k] - brute[k]) <= 1e-12);
    }

    // convolution order does not matter
    std::vector<double> shuffled{0.3, 0.1, 0.2};
    const TruncatedPMF law2 = pmf_zeta_sum(ProbVector(shuffled), 20);
    for (std::size_t k = 0; k <= 20; ++k) {
        CHECK(std::abs(law.mass()[k] - law2.mass()[k]) <= 1e-12);
    }
}

TEST_CASE("q_tail: far threshold, closed form, recursion cross-check") {
    CHECK_THROWS_AS(q_tail(ProbVector({0.2}), 0), std::invalid_argument);

    const QTail far = q_tail(ProbVector({0.2}), 60);
    CHECK(far.value <= 1e-15);
    CHECK(far.radius <= 1e-15);

    // frozen high-precision value of P(zeta(0.3) >= 2)
    const QTail q2 = q_tail(ProbVector({0.3}), 2);
    CHECK(q2.value == doctest::Approx(0.0035994931830894701).epsilon(1e-12));

    // total-probability recursion over the last index reproduces Q
    const std::vector<double> p10(10, 0.1);
    for (long long k : {1LL, 2LL, 3LL, 5LL}) {
        const QTail q = q_tail(ProbVector(p10), k);
        const double rec = q_recursion(p10, k);
        CHECK(std::abs(q.value - rec) <= 1e-12 + q.radius);
    }
    const std::vector<double> mixed{0.9, 0.05, 0.4, 0.33};
    for (long long k : {1LL, 2LL, 4LL}) {
        CHECK(std::abs(q_tail(ProbVector(mixed), k).value - q_recursion(mixed, k)) <=
              1e-12);
    }
}

TEST_CASE("q_tail monotonicity in k and under appending") {
    const ProbVector p({0.4, 0.2, 0.7, 0.05});
    const TruncatedPMF zsum = pmf_zeta_sum(p);
    double prev = 1.0;
    for (long long k = 1; k <= 12; ++k) {
        const QTail q = q_tail(zsum, k);
        CHECK(q.value <= prev);
        prev = q.value;
    }

    const ProbVector longer({0.4, 0.2, 0.7, 0.05, 0.3});
    for (long long k = 1; k <= 12; ++k) {
        const QTail base = q_tail(p, k);
        const QTail ext = q_tail(longer, k);
        CHECK(ext.value >= base.value - base.radius);
    }
}

TEST_CASE("exact_exceedance: closed forms and bracket invariants") {
    CHECK_THROWS_AS(exact_exceedance(ProbVector({0.5}), -1), std::invalid_argument);

    // absorbing state unreachable
    const ExceedanceResult far = exact_exceedance(ProbVector({0.5, 0.5}), 80);
    CHECK(far.prob_high <= 1e-15);

    // n = 1, z = 0: the maximum is exactly zeta_1
    for (double p : {0.05, 0.3, 0.9, 1.0}) {
        const ExceedanceResult r = exact_exceedance(ProbVector({p}), 0);
        const double expected = -p * std::expm1(-p);
        CHECK(r.prob_low <= expected + 1e-15);
        CHECK(r.prob_high >= expected - 1e-15);
        CHECK(r.prob_high == doctest::Approx(expected).epsilon(1e-12));
        CHECK(r.prob_high - r.prob_low <= r.truncation_tail);
    }

    const ProbVector p10(std::vector<double>(10, 0.1));
    for (long long z : {0LL, 1LL, 2LL, 5LL}) {
        const ExceedanceResult r = exact_exceedance(p10, z);
        CHECK(r.prob_low <= r.prob_high);
        CHECK(r.prob_high - r.prob_low <= r.truncation_tail);
        CHECK(r.truncation_tail <= 10 * 1e-15 + 1e-14);
        // the maximum never exceeds the discrepancy sum
        const QTail q = q_tail(p10, z + 1);
        CHECK(r.prob_high <= q.value + q.radius + r.truncation_tail);
    }
}

TEST_CASE("exact_exceedance matches full enumeration for n <= 3") {
    SplitMix64 rng(11);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 1 + rng.next() % 3;
        std::vector<double> p(n);
        for (auto& v : p) v = rng.uniform01();
        for (long long z = 0; z <= 4; ++z) {
            const double brute_low = bpc::testing::enumerate_exceedance(p, z, 8, false);
            const double brute_high = bpc::testing::enumerate_exceedance(p, z, 8, true);
            const ExceedanceResult dp = exact_exceedance(ProbVector(p), z, 8);
            CHECK(std::abs(dp.prob_low - brute_low) <= 1e-12);
            CHECK(std::abs(dp.prob_high - brute_high) <= 1e-12);
        }
    }
}

TEST_CASE("mgf_bound: formula, product structure, domination, overflow") {
    CHECK_THROWS_AS(mgf_bound(ProbVector({0.3}), 0.0), std::invalid_argument);

    // one factor at t = 1: exp(e * p^2 * exp(e * p))
    const double p = 0.3;
    const MgfBound b = mgf_bound(ProbVector({p}), 1.0);
    const double e1 = std::exp(1.0);
    CHECK(b.value ==
          doctest::Approx(std::exp(e1 * p * p * std::exp(e1 * p))).epsilon(1e-12));
    CHECK_FALSE(b.overflow);

    // product structure
    const MgfBound two = mgf_bound(ProbVector({0.2, 0.2}), 0.5);
    const MgfBound one_f = mgf_bound(ProbVector({0.2}), 0.5);
    CHECK(two.value == doctest::Approx(one_f.value * one_f.value).epsilon(1e-12));

    // t -> 0+: the per-factor exponent tends to p^2 e^p
    const MgfBound small_t = mgf_bound(ProbVector({p}), 1e-12);
    CHECK(std::log(small_t.value) ==
          doctest::Approx(p * p * std::exp(p)).epsilon(1e-9));

    // the bound dominates a direct lower estimate of E exp(t zeta)
    const TruncatedPMF z = pmf_zeta(p);
    for (double t : {0.5, 1.0, 2.0}) {
        double mgf_est = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            mgf_est += z.mass()[k] * std::exp(t * static_cast<double>(k));
        }
        CHECK(mgf_est <= mgf_bound(ProbVector({p}), t).value);
    }

    const MgfBound over = mgf_bound(ProbVector(std::vector<double>(50, 1.0)), 8.0);
    CHECK(over.overflow);
    CHECK(std::isinf(over.value));
}

TEST_CASE("chernoff step: q_tail dominated by mgf_bound / e^(t k)") {
    const ProbVector p({0.3, 0.1, 0.2, 0.15});
    for (double t : {0.25, 1.0, 2.0}) {
        const MgfBound b = mgf_bound(p, t);
        REQUIRE_FALSE(b.overflow);
        for (long long k = 1; k <= 8; ++k) {
            CHECK(q_tail(p, k).value <= b.value * std::exp(-t * static_cast<double>(k)));
        }
    }
}
