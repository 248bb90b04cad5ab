#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bpc/exact_oracle.hpp"
#include "bpc/prob_vector.hpp"

namespace bpc {

/// One evaluated closed-form bound. The value is always computed; when the
/// side condition fails the bound is flagged inapplicable rather than
/// omitted.
struct BoundValue {
    std::string name;
    double value = 0.0;
    bool applicable = false;
    std::string condition;
};

/// Upper bound on the path-deviation probability built from the extremal
/// scale p* = max(max_i p_i, sum p_i^2); applicable when sum p_i^2 <= 1:
///   7e6 (p*)^(z+1) exp(-z/2 * log log(z+8)).
BoundValue upper_nc1(const ProbVector& p, long long z);

/// Second-moment upper bound, applicable when sum p_i^2 <= 1:
///   1e8 (sum p_i^2)^((z+2)/2) exp(-z/8).
BoundValue upper_nc2(const ProbVector& p, long long z);

/// Small-intensity upper bound, applicable when sum p_i <= 1/2:
///   14 sum_i p_i^(z+2) exp(-z/3).
BoundValue upper_nc3(const ProbVector& p, long long z);

struct Nc4Bound {
    BoundValue bound;      ///< sum p_i^2, valid for the z = 0 deviation
    double exact_union;    ///< sharper 1 - prod_i (1 - p_i (1 - e^-p_i))
    double union_sum;      ///< intermediate sum_i p_i (1 - e^-p_i)
};

/// Upper bound sum p_i^2 for the zero-threshold deviation probability,
/// together with the exact union probability it relaxes.
Nc4Bound upper_nc4(const ProbVector& p);

struct Nc5Bounds {
    BoundValue stirling;        ///< closed form with the factorial replaced via Stirling
    BoundValue combinatorial;   ///< exact pre-Stirling form S / (z+2)!
};

/// Lower bounds from the disjoint events {pi_1 = .. = pi_(k-1) = 1,
/// pi_k = z+2}: both use S = sum_k B_k p_k^(z+2) with
/// B_k = exp(-sum_{i<=k} p_i) prod_{j<k} p_j. Always applicable.
Nc5Bounds lower_nc5(const ProbVector& p, long long z);

struct Nc6Bound {
    BoundValue bound;       ///< 1 - exp(-1/2 sum p_i^2 (1 - p_i)), z = 0 only
    double proof_product;   ///< sharper 1 - prod_i e^-p_i (1 + p_i)
};

/// Lower bound on the zero-threshold deviation probability.
Nc6Bound lower_nc6(const ProbVector& p);

struct BarbourHall {
    BoundValue lower;
    BoundValue upper;
};

/// Two-sided estimate of the END-POINT total variation distance between
/// the Bernoulli sum and Poisson(sum p_i), not of the path distance:
///   eps/32 * sum p_i^2 <= TV <= eps * sum p_i^2, eps = min(1, 1/sum p_i).
BarbourHall barbour_hall(const ProbVector& p);

struct Thm1Constants {
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
};

struct Thm1Bounds {
    BoundValue large_np;  ///< (n p^2)^(z+1) exp(-C1 z log log(z+2) + C2), np >= 1
    BoundValue small_np;  ///< n p^(z+2) exp(-C3 z + C4), np <= 1
};

/// Parameterized i.i.d. bounds. The absolute constants are caller-supplied;
/// without them the result is empty (never silently defaulted) and nothing
/// is asserted numerically about these forms.
std::optional<Thm1Bounds> thm1_iid(long long n, double p, long long z,
                                   const std::optional<Thm1Constants>& constants);

/// Bound on Q_n(k) used with sum p_i^2 <= 1/3 and k >= 2:
///   5 exp(-k/8) (sum p_i^2)^((k+1)/2).
BoundValue proof_nn1(const ProbVector& p, long long k);

/// Bound on Q_n(k) used with sum p_i <= 1/2 and k >= 2:
///   19 sum_i (e^(-1/3) p_i)^(k+1).
BoundValue proof_nn4(const ProbVector& p, long long k);

struct ReportOptions {
    std::optional<Thm1Constants> thm1;
    std::optional<long long> poisson_kmax;
    long long q_kmax = default_sum_kmax;
};

/// Per-instance sandwich record: lower bounds, exact bracket, upper bounds.
struct BoundReport {
    std::size_t n = 0;
    double sum_p = 0.0;
    double sum_p2 = 0.0;
    long long z = 0;

    std::vector<BoundValue> lowers;  ///< nc5_stirling, nc5_combinatorial, nc6
    std::vector<BoundValue> uppers;  ///< nc1, nc2, nc3, nc4, nn1, nn4
    ExceedanceResult exact;
    QTail q_above_z;                 ///< Q(z+1) with truncation radius
    BoundValue bh_lower;             ///< end-point TV bracket, informational
    BoundValue bh_upper;
    std::optional<Thm1Bounds> thm1;  ///< present only for constant p with constants

    double nc4_exact_union = 0.0;
    double nc6_proof_product = 0.0;

    /// True iff every applicable lower <= exact.prob_high + truncation_tail,
    /// exact.prob_low <= q_above_z.value + q_above_z.radius,
    /// q_above_z.value <= every applicable Q-level upper (nc1/nc2/nc3/nn1/nn4),
    /// and exact.prob_high <= nc4 + truncation_tail.
    bool sandwich_ok = false;
};

BoundReport assemble_report(const ProbVector& p, long long z,
                            const ReportOptions& options = {});

}  // namespace bpc
