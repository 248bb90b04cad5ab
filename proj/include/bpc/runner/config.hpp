#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpc/bounds.hpp"

namespace bpc::runner {

/// Invalid or unparsable configuration; the message carries field / line
/// diagnostics. Maps to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Failed report output (unwritable path, short write). Maps to exit code 2.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class OutputFormat { csv, json };

const char* to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& name);

struct GeneratorSpec {
    enum class Kind {
        uniform,          ///< p_i ~ U(a, b), drawn on the open interval
        constant,         ///< p_i = c
        geometric_decay,  ///< p_i = r^i, i = 1..n
        mixed,            ///< built-in stratified sweep sampler (verify default)
    };
    Kind kind = Kind::mixed;
    std::size_t n = 50;  ///< vector length; for mixed, an upper bound per instance
    double a = 0.0;
    double b = 1.0;
    double c = 0.1;
    double r = 0.5;
};

struct ExperimentConfig {
    std::optional<std::vector<double>> p;  ///< explicit probabilities
    std::optional<GeneratorSpec> generator;
    long long instances = 1;
    std::vector<long long> z_values = {0};
    long long mc_samples = 100000;
    std::uint64_t seed = 1;
    int threads = 0;  ///< 0 = auto (BPC_THREADS env, then hardware)
    OutputFormat output_format = OutputFormat::csv;
    std::string output_path;  ///< empty = "<command>_report.<ext>"
    std::optional<Thm1Constants> thm1;
};

/// The built-in verify sweep: 200 stratified random instances with n <= 50
/// and z = 0..10.
ExperimentConfig default_verify_config();

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Number of p-instances the config describes (1 for explicit p).
long long instance_count(const ExperimentConfig& cfg);

/// Realizes instance `index` (explicit p, or generated deterministically
/// from (seed, index)). Generated entries are validated to lie in (0, 1].
std::vector<double> generate_instance(const ExperimentConfig& cfg, long long index);

/// The stratified sampler behind GeneratorSpec::Kind::mixed: cycles through
/// regimes (general scale, small sum of squares, near-unit sum of squares,
/// small sum, exact sum-of-squares boundary, tiny entries) so every bound's
/// side condition gets exercised.
std::vector<double> sample_mixed_instance(std::uint64_t seed, long long index,
                                          std::size_t n_max);

}  // namespace bpc::runner
