#include "bpc/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace bpc {

namespace {

const char* cond_sum_p2_le_1 = "sum(p_i^2) <= 1";
const char* cond_sum_p_le_half = "sum(p_i) <= 1/2";

void require_z(long long z) {
    if (z < 0) throw std::invalid_argument("bound evaluator: z must be >= 0");
}

double factorial(long long m) {
    double f = 1.0;
    for (long long i = 2; i <= m; ++i) f *= static_cast<double>(i);
    return f;
}

// sum_k B_k p_k^(z+2) with B_k = exp(-sum_{i<=k} p_i) prod_{j<k} p_j.
double nc5_series(const ProbVector& p, long long z) {
    double prefix = 0.0;
    double prod = 1.0;
    double s = 0.0;
    for (double pk : p) {
        prefix += pk;
        s += std::exp(-prefix) * prod * std::pow(pk, static_cast<double>(z + 2));
        prod *= pk;
    }
    return s;
}

}  // namespace

BoundValue upper_nc1(const ProbVector& p, long long z) {
    require_z(z);
    const double sum_p2 = p.sum_p2();
    const double p_star = std::max(p.max_p(), sum_p2);
    const double zz = static_cast<double>(z);
    BoundValue b;
    b.name = "nc1";
    b.value = 7e6 * std::pow(p_star, zz + 1.0) *
              std::exp(-0.5 * zz * std::log(std::log(zz + 8.0)));
    b.applicable = sum_p2 <= 1.0;
    b.condition = cond_sum_p2_le_1;
    return b;
}

BoundValue upper_nc2(const ProbVector& p, long long z) {
    require_z(z);
    const double sum_p2 = p.sum_p2();
    const double zz = static_cast<double>(z);
    BoundValue b;
    b.name = "nc2";
    b.value = 1e8 * std::pow(sum_p2, (zz + 2.0) / 2.0) * std::exp(-zz / 8.0);
    b.applicable = sum_p2 <= 1.0;
    b.condition = cond_sum_p2_le_1;
    return b;
}

BoundValue upper_nc3(const ProbVector& p, long long z) {
    require_z(z);
    const double zz = static_cast<double>(z);
    double s = 0.0;
    for (double pi : p) s += std::pow(pi, zz + 2.0);
    BoundValue b;
    b.name = "nc3";
    b.value = 14.0 * s * std::exp(-zz / 3.0);
    b.applicable = p.sum_p() <= 0.5;
    b.condition = cond_sum_p_le_half;
    return b;
}

Nc4Bound upper_nc4(const ProbVector& p) {
    Nc4Bound r;
    r.bound.name = "nc4";
    r.bound.value = p.sum_p2();
    r.bound.applicable = true;
    r.bound.condition = "always";
    double log_prod = 0.0;
    double s = 0.0;
    for (double pi : p) {
        const double x = pi * (-std::expm1(-pi));  // p (1 - e^-p)
        s += x;
        log_prod += std::log1p(-x);
    }
    r.exact_union = -std::expm1(log_prod);
    r.union_sum = s;
    return r;
}

Nc5Bounds lower_nc5(const ProbVector& p, long long z) {
    require_z(z);
    const double s = nc5_series(p, z);
    const double zz = static_cast<double>(z);
    Nc5Bounds r;
    r.stirling.name = "nc5_stirling";
    r.stirling.value = std::exp(-(zz + 3.0) * std::log(zz + 2.0) + zz) /
                       std::sqrt(2.0 * M_PI) * s;
    r.stirling.applicable = true;
    r.stirling.condition = "always";
    r.combinatorial.name = "nc5_combinatorial";
    r.combinatorial.value = s / factorial(z + 2);
    r.combinatorial.applicable = true;
    r.combinatorial.condition = "always";
    return r;
}

Nc6Bound lower_nc6(const ProbVector& p) {
    double half_sum = 0.0;
    double log_prod = 0.0;
    for (double pi : p) {
        half_sum += 0.5 * pi * pi * (1.0 - pi);
        log_prod += std::log1p(pi) - pi;  // log(e^-p (1 + p))
    }
    Nc6Bound r;
    r.bound.name = "nc6";
    r.bound.value = -std::expm1(-half_sum);
    r.bound.applicable = true;
    r.bound.condition = "always";
    r.proof_product = -std::expm1(log_prod);
    return r;
}

BarbourHall barbour_hall(const ProbVector& p) {
    const double sum_p = p.sum_p();
    const double sum_p2 = p.sum_p2();
    const double eps = std::min(1.0, 1.0 / sum_p);
    BarbourHall r;
    r.lower.name = "bh_lower";
    r.lower.value = eps * sum_p2 / 32.0;
    r.lower.applicable = true;
    r.lower.condition = "always (brackets the end-point total variation)";
    r.upper.name = "bh_upper";
    r.upper.value = eps * sum_p2;
    r.upper.applicable = true;
    r.upper.condition = r.lower.condition;
    return r;
}

std::optional<Thm1Bounds> thm1_iid(long long n, double p, long long z,
                                   const std::optional<Thm1Constants>& constants) {
    if (!constants) return std::nullopt;
    if (n < 1 || !(p > 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("thm1_iid: need n >= 1 and p in (0, 1]");
    }
    require_z(z);
    const double np = static_cast<double>(n) * p;
    const double zz = static_cast<double>(z);
    Thm1Bounds r;
    r.large_np.name = "thm1_large";
    r.large_np.value = std::pow(np * p, zz + 1.0) *
                       std::exp(-constants->c1 * zz * std::log(std::log(zz + 2.0)) +
                                constants->c2);
    r.large_np.applicable = np >= 1.0;
    r.large_np.condition = "n*p >= 1";
    r.small_np.name = "thm1_small";
    r.small_np.value = static_cast<double>(n) * std::pow(p, zz + 2.0) *
                       std::exp(-constants->c3 * zz + constants->c4);
    r.small_np.applicable = np <= 1.0;
    r.small_np.condition = "n*p <= 1";
    return r;
}

BoundValue proof_nn1(const ProbVector& p, long long k) {
    if (k < 0) throw std::invalid_argument("proof_nn1: k must be >= 0");
    const double sum_p2 = p.sum_p2();
    const double kk = static_cast<double>(k);
    BoundValue b;
    b.name = "nn1";
    b.value = 5.0 * std::exp(-kk / 8.0) * std::pow(sum_p2, (kk + 1.0) / 2.0);
    b.applicable = sum_p2 <= 1.0 / 3.0 && k >= 2;
    b.condition = "sum(p_i^2) <= 1/3 and k >= 2";
    return b;
}

BoundValue proof_nn4(const ProbVector& p, long long k) {
    if (k < 0) throw std::invalid_argument("proof_nn4: k must be >= 0");
    const double kk = static_cast<double>(k);
    const double scale = std::exp(-1.0 / 3.0);
    double s = 0.0;
    for (double pi : p) s += std::pow(scale * pi, kk + 1.0);
    BoundValue b;
    b.name = "nn4";
    b.value = 19.0 * s;
    b.applicable = p.sum_p() <= 0.5 && k >= 2;
    b.condition = "sum(p_i) <= 1/2 and k >= 2";
    return b;
}

BoundReport assemble_report(const ProbVector& p, long long z,
                            const ReportOptions& options) {
    require_z(z);
    BoundReport r;
    r.n = p.size();
    r.sum_p = p.sum_p();
    r.sum_p2 = p.sum_p2();
    r.z = z;

    const Nc5Bounds nc5 = lower_nc5(p, z);
    Nc6Bound nc6 = lower_nc6(p);
    nc6.bound.applicable = z == 0;  // lower-bounds the zero-threshold deviation only
    nc6.bound.condition = "z == 0";
    r.lowers = {nc5.stirling, nc5.combinatorial, nc6.bound};
    r.nc6_proof_product = nc6.proof_product;

    const Nc4Bound nc4 = upper_nc4(p);
    r.nc4_exact_union = nc4.exact_union;
    r.uppers = {upper_nc1(p, z), upper_nc2(p, z), upper_nc3(p, z), nc4.bound,
                proof_nn1(p, z + 1), proof_nn4(p, z + 1)};

    r.exact = exact_exceedance(p, z, options.poisson_kmax);
    r.q_above_z = q_tail(p, z + 1, options.q_kmax);

    const BarbourHall bh = barbour_hall(p);
    r.bh_lower = bh.lower;
    r.bh_upper = bh.upper;

    if (options.thm1 && p.size() >= 1) {
        bool all_equal = true;
        for (double pi : p) all_equal &= pi == p[0];
        if (all_equal) {
            r.thm1 = thm1_iid(static_cast<long long>(p.size()), p[0], z, options.thm1);
        }
    }

    bool ok = true;
    const double exact_slack = r.exact.prob_high + r.exact.truncation_tail;
    for (const auto& lower : r.lowers) {
        if (lower.applicable && lower.value > exact_slack) ok = false;
    }
    if (r.exact.prob_low > r.q_above_z.value + r.q_above_z.radius) ok = false;
    for (const auto& upper : r.uppers) {
        if (!upper.applicable) continue;
        if (upper.name == "nc4") {
            // nc4 bounds the exceedance itself, so it is checked against the
            // bracket (with its radius), not against Q
            if (r.exact.prob_high > upper.value + r.exact.truncation_tail) ok = false;
        } else if (r.q_above_z.value > upper.value) {
            ok = false;
        }
    }
    r.sandwich_ok = ok;
    return r;
}

}  // namespace bpc
