#pragma once

#include <iosfwd>

#include "bpc/runner/config.hpp"

namespace bpc::runner {

/// Exit-code contract shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_io_error = 2;
inline constexpr int exit_invariant_violation = 3;

/// Evaluates every bound and the exact oracle per (instance, z) pair and
/// writes one report row each. Returns exit_ok iff every sandwich_ok held.
int cmd_bounds(const ExperimentConfig& cfg, std::ostream& log);

/// Monte Carlo tail estimate next to the exact bracket per (instance, z),
/// with an agreement verdict (bracket intersects the Wilson interval widened
/// to three radii). Returns exit_ok iff every row agreed.
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log);

struct VerifyOptions {
    /// Self-test hook: zeroes the nc2 constant so the nc2_dominates_q
    /// invariant must trip.
    bool corrupt_nc2 = false;
};

/// Runs the oracle / bound invariant suite over the configured instances and
/// writes one row per invariant. Returns exit_ok iff zero violations.
int cmd_verify(const ExperimentConfig& cfg, const VerifyOptions& opts,
               std::ostream& log);

}  // namespace bpc::runner
