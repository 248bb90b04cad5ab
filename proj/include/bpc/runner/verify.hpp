#pragma once

#include <vector>

#include "bpc/runner/config.hpp"
#include "bpc/runner/report_io.hpp"

namespace bpc::runner {

struct VerifyOutcome {
    std::vector<InvariantStat> stats;
    VerifySummary summary;
    bool ok = false;
};

/// The invariant sweep behind cmd_verify, exposed so tests and the
/// acceptance suite can run it in-process.
VerifyOutcome run_verify(const ExperimentConfig& cfg, bool corrupt_nc2);

}  // namespace bpc::runner
