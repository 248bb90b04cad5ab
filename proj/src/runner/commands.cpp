#include "bpc/runner/commands.hpp"

#include <algorithm>
#include <ostream>
#include <vector>

#include "bpc/coupling.hpp"
#include "bpc/exact_oracle.hpp"
#include "bpc/parallel.hpp"
#include "bpc/rng.hpp"
#include "bpc/runner/report_io.hpp"
#include "bpc/runner/verify.hpp"

namespace bpc::runner {

namespace {

std::string resolve_output_path(const ExperimentConfig& cfg, const char* command) {
    if (!cfg.output_path.empty()) return cfg.output_path;
    return std::string(command) + "_report." + to_string(cfg.output_format);
}

std::uint64_t row_seed(std::uint64_t seed, long long instance, long long z) {
    return derive_seed(seed, (static_cast<std::uint64_t>(instance) << 20) ^
                                 static_cast<std::uint64_t>(z));
}

std::vector<std::vector<double>> realize_instances(const ExperimentConfig& cfg) {
    const long long m = instance_count(cfg);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        out[static_cast<std::size_t>(i)] = generate_instance(cfg, i);
    }
    return out;
}

}  // namespace

int cmd_bounds(const ExperimentConfig& cfg, std::ostream& log) {
    try {
        const auto instances = realize_instances(cfg);
        const long long nz = static_cast<long long>(cfg.z_values.size());
        const long long total = static_cast<long long>(instances.size()) * nz;
        std::vector<ReportRow> rows(static_cast<std::size_t>(total));
        ReportOptions opts;
        opts.thm1 = cfg.thm1;

        parallel_for(total, cfg.threads, [&](long long idx) {
            const long long i = idx / nz;
            const long long z = cfg.z_values[static_cast<std::size_t>(idx % nz)];
            const ProbVector p(instances[static_cast<std::size_t>(i)]);
            ReportRow row;
            row.instance_id = i;
            row.n = p.size();
            row.sum_p = p.sum_p();
            row.sum_p2 = p.sum_p2();
            row.z = z;
            row.bounds = assemble_report(p, z, opts);
            rows[static_cast<std::size_t>(idx)] = std::move(row);
        });

        long long failures = 0;
        for (const auto& row : rows) {
            if (!row.bounds->sandwich_ok) ++failures;
        }
        const std::string path = resolve_output_path(cfg, "bounds");
        write_file(path, cfg.output_format == OutputFormat::csv
                             ? rows_to_csv(rows)
                             : rows_to_json(rows, "bounds", cfg.seed));
        log << "bounds: " << rows.size() << " rows -> " << path
            << "; sandwich failures: " << failures << "\n";
        return failures == 0 ? exit_ok : exit_invariant_violation;
    } catch (const IoError& e) {
        log << "error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log) {
    try {
        const auto instances = realize_instances(cfg);
        std::vector<ReportRow> rows;
        rows.reserve(instances.size() * cfg.z_values.size());
        long long disagreements = 0;
        // Rows run serially; the Monte Carlo loop inside each row is the
        // parallel part and its counts do not depend on the thread count.
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const ProbVector p(instances[i]);
            for (long long z : cfg.z_values) {
                ReportRow row;
                row.instance_id = static_cast<long long>(i);
                row.n = p.size();
                row.sum_p = p.sum_p();
                row.sum_p2 = p.sum_p2();
                row.z = z;
                row.exact = exact_exceedance(p, z);
                MCEstimate mc =
                    estimate_tail(p, z, cfg.mc_samples,
                                  row_seed(cfg.seed, row.instance_id, z), cfg.threads);
                const auto [wlo, whi] = widened_interval(mc, 3.0);
                const bool agree =
                    !(whi < row.exact->prob_low || wlo > row.exact->prob_high);
                row.mc = mc;
                row.agreement = agree;
                if (!agree) ++disagreements;
                rows.push_back(std::move(row));
            }
        }
        const std::string path = resolve_output_path(cfg, "simulate");
        write_file(path, cfg.output_format == OutputFormat::csv
                             ? rows_to_csv(rows)
                             : rows_to_json(rows, "simulate", cfg.seed));
        log << "simulate: " << rows.size() << " rows -> " << path
            << "; disagreements: " << disagreements << "\n";
        return disagreements == 0 ? exit_ok : exit_invariant_violation;
    } catch (const IoError& e) {
        log << "error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

int cmd_verify(const ExperimentConfig& cfg, const VerifyOptions& opts,
               std::ostream& log) {
    try {
        const VerifyOutcome out = run_verify(cfg, opts.corrupt_nc2);
        const std::string path = resolve_output_path(cfg, "verify");
        write_file(path, cfg.output_format == OutputFormat::csv
                             ? verify_to_csv(out.stats)
                             : verify_to_json(out.stats, out.summary, cfg.seed));
        for (const auto& s : out.stats) {
            if (s.violations > 0) {
                log << "verify: invariant FAILED: " << s.name << " (" << s.violations
                    << " of " << s.checks << " checks, worst margin "
                    << format_double(s.worst_margin) << ")\n";
            }
        }
        log << "verify: " << out.summary.violations << " violations -> " << path
            << "; tightness nn1/nc2: " << out.summary.nn1_tighter << "/"
            << out.summary.nc2_tighter << "\n";
        return out.ok ? exit_ok : exit_invariant_violation;
    } catch (const IoError& e) {
        log << "error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

}  // namespace bpc::runner
