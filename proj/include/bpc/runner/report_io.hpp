#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bpc/bounds.hpp"
#include "bpc/coupling.hpp"
#include "bpc/runner/config.hpp"

namespace bpc::runner {

/// One output row of cmd_bounds / cmd_simulate. The column set is shared:
/// bounds rows leave the Monte Carlo cells empty, simulate rows leave the
/// bound cells empty.
struct ReportRow {
    long long instance_id = 0;
    std::size_t n = 0;
    double sum_p = 0.0;
    double sum_p2 = 0.0;
    long long z = 0;
    std::optional<BoundReport> bounds;
    std::optional<ExceedanceResult> exact;  ///< simulate-side bracket
    std::optional<MCEstimate> mc;
    std::optional<bool> agreement;
};

/// Shortest round-trip decimal representation; reports are byte-stable.
std::string format_double(double v);

std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows,
                         const std::string& command, std::uint64_t seed);

struct InvariantStat {
    std::string name;
    long long instances = 0;
    long long checks = 0;
    long long violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
};

struct VerifySummary {
    long long violations = 0;
    long long nn1_tighter = 0;  ///< instances where the nn1 form beat nc2
    long long nc2_tighter = 0;
};

std::string verify_to_csv(const std::vector<InvariantStat>& stats);
std::string verify_to_json(const std::vector<InvariantStat>& stats,
                           const VerifySummary& summary, std::uint64_t seed);

/// Writes content to path; throws IoError when the path is unwritable.
void write_file(const std::string& path, const std::string& content);

}  // namespace bpc::runner
