#include "bpc/runner/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bpc/rng.hpp"

namespace bpc::runner {

using nlohmann::json;

const char* to_string(OutputFormat f) {
    return f == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("config field 'output_format': expected \"csv\" or \"json\", got \"" +
                      name + "\"");
}

ExperimentConfig default_verify_config() {
    ExperimentConfig cfg;
    cfg.generator = GeneratorSpec{};  // mixed, n <= 50
    cfg.instances = 200;
    cfg.z_values.clear();
    for (long long z = 0; z <= 10; ++z) cfg.z_values.push_back(z);
    cfg.seed = 20260811;
    return cfg;
}

namespace {

[[noreturn]] void fail_field(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

GeneratorSpec parse_generator(const json& g) {
    if (!g.is_object()) fail_field("generator", "must be an object");
    GeneratorSpec spec;
    const std::string dist = g.value("distribution", std::string("mixed"));
    if (dist == "uniform") {
        spec.kind = GeneratorSpec::Kind::uniform;
    } else if (dist == "constant") {
        spec.kind = GeneratorSpec::Kind::constant;
    } else if (dist == "geometric-decay") {
        spec.kind = GeneratorSpec::Kind::geometric_decay;
    } else if (dist == "mixed") {
        spec.kind = GeneratorSpec::Kind::mixed;
    } else {
        fail_field("generator.distribution",
                   "expected uniform | constant | geometric-decay | mixed");
    }
    if (!g.contains("n") || !g["n"].is_number_integer() || g["n"].get<long long>() < 1) {
        fail_field("generator.n", "must be an integer >= 1");
    }
    spec.n = g["n"].get<std::size_t>();
    switch (spec.kind) {
        case GeneratorSpec::Kind::uniform:
            spec.a = g.value("a", 0.0);
            spec.b = g.value("b", 1.0);
            if (!(spec.a >= 0.0) || !(spec.a < spec.b) || !(spec.b <= 1.0)) {
                fail_field("generator", "uniform needs 0 <= a < b <= 1");
            }
            break;
        case GeneratorSpec::Kind::constant:
            if (!g.contains("c")) fail_field("generator.c", "required for constant");
            spec.c = g["c"].get<double>();
            if (!(spec.c > 0.0) || !(spec.c <= 1.0)) {
                fail_field("generator.c", "must lie in (0, 1]");
            }
            break;
        case GeneratorSpec::Kind::geometric_decay:
            if (!g.contains("r")) fail_field("generator.r", "required for geometric-decay");
            spec.r = g["r"].get<double>();
            if (!(spec.r > 0.0) || !(spec.r < 1.0)) {
                fail_field("generator.r", "must lie in (0, 1)");
            }
            if (std::pow(spec.r, static_cast<double>(spec.n)) <= 0.0) {
                fail_field("generator", "geometric-decay underflows to 0 at this n");
            }
            break;
        case GeneratorSpec::Kind::mixed:
            break;
    }
    return spec;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line number for the diagnostic
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " +
                          e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

    ExperimentConfig cfg;
    if (j.contains("p")) {
        if (!j["p"].is_array() || j["p"].empty()) {
            fail_field("p", "must be a non-empty array of probabilities");
        }
        std::vector<double> p;
        for (const auto& v : j["p"]) {
            if (!v.is_number()) fail_field("p", "entries must be numbers");
            p.push_back(v.get<double>());
            if (!(p.back() > 0.0) || !(p.back() <= 1.0)) {
                fail_field("p", "entry " + std::to_string(p.size() - 1) +
                                    " outside (0, 1]");
            }
        }
        cfg.p = std::move(p);
    }
    if (j.contains("generator")) cfg.generator = parse_generator(j["generator"]);
    if (!cfg.p && !cfg.generator) {
        throw ConfigError("config: need either 'p' or 'generator'");
    }
    if (cfg.p && cfg.generator) {
        throw ConfigError("config: 'p' and 'generator' are mutually exclusive");
    }

    if (j.contains("instances")) {
        cfg.instances = j["instances"].get<long long>();
        if (cfg.instances < 1) fail_field("instances", "must be >= 1");
        if (cfg.p && cfg.instances != 1) {
            fail_field("instances", "explicit 'p' describes exactly one instance");
        }
    }

    if (j.contains("z_values")) {
        if (!j["z_values"].is_array() || j["z_values"].empty()) {
            fail_field("z_values", "must be a non-empty array");
        }
        cfg.z_values.clear();
        for (const auto& v : j["z_values"]) {
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                fail_field("z_values", "entries must be integers >= 0");
            }
            cfg.z_values.push_back(v.get<long long>());
        }
    }

    if (j.contains("mc_samples")) {
        cfg.mc_samples = j["mc_samples"].get<long long>();
        if (cfg.mc_samples < 1) fail_field("mc_samples", "must be >= 1");
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) {
        cfg.threads = j["threads"].get<int>();
        if (cfg.threads < 0) fail_field("threads", "must be >= 0 (0 = auto)");
    }
    if (j.contains("output_format")) {
        cfg.output_format = parse_output_format(j["output_format"].get<std::string>());
    }
    if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
    if (j.contains("thm1_constants")) {
        const auto& t = j["thm1_constants"];
        for (const char* key : {"c1", "c2", "c3", "c4"}) {
            if (!t.contains(key) || !t[key].is_number()) {
                fail_field(std::string("thm1_constants.") + key, "required number");
            }
        }
        cfg.thm1 = Thm1Constants{t["c1"].get<double>(), t["c2"].get<double>(),
                                 t["c3"].get<double>(), t["c4"].get<double>()};
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

long long instance_count(const ExperimentConfig& cfg) {
    return cfg.p ? 1 : cfg.instances;
}

std::vector<double> sample_mixed_instance(std::uint64_t seed, long long index,
                                          std::size_t n_max) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
    const int regime = static_cast<int>(index % 6);

    if (regime == 4) {
        // Exact sum-of-squares boundary: 4^j entries of 2^-j give sum p^2 = 1.
        const int j = static_cast<int>((index / 6) % 3);
        std::size_t m = 1;
        for (int i = 0; i < j; ++i) m *= 4;
        if (m > n_max) m = 1;
        return std::vector<double>(m, std::ldexp(1.0, -j));
    }

    const std::size_t n = 1 + static_cast<std::size_t>(rng.next() % n_max);
    std::vector<double> p(n);
    for (auto& v : p) v = rng.uniform01();

    auto scale_to = [&p](double target, bool squares) {
        double s = 0.0;
        for (double v : p) s += squares ? v * v : v;
        const double factor = squares ? std::sqrt(target / s) : target / s;
        for (auto& v : p) v = std::min(1.0, v * factor);
    };

    switch (regime) {
        case 0:  // general scale; side conditions frequently fail on purpose
            break;
        case 1: {  // sum p^2 in (0.02, 1/3): nn1 / nc1 / nc2 regime
            const double t = 0.02 * std::exp(rng.uniform01() * std::log(0.33 / 0.02));
            scale_to(t, true);
            break;
        }
        case 2: {  // sum p^2 in (0.34, 1): nc1 / nc2 regime above 1/3
            scale_to(0.34 + 0.65 * rng.uniform01(), true);
            break;
        }
        case 3: {  // sum p in (0.05, 0.5): nc3 / nn4 regime
            scale_to(0.05 + 0.44 * rng.uniform01(), false);
            break;
        }
        default: {  // 5: tiny entries
            for (auto& v : p) v = 1e-9 * std::exp(rng.uniform01() * std::log(1e5));
            break;
        }
    }
    return p;
}

std::vector<double> generate_instance(const ExperimentConfig& cfg, long long index) {
    if (cfg.p) return *cfg.p;
    const GeneratorSpec& gen = *cfg.generator;
    std::vector<double> p;
    switch (gen.kind) {
        case GeneratorSpec::Kind::uniform: {
            SplitMix64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
            p.resize(gen.n);
            for (auto& v : p) v = gen.a + (gen.b - gen.a) * rng.uniform01();
            break;
        }
        case GeneratorSpec::Kind::constant:
            p.assign(gen.n, gen.c);
            break;
        case GeneratorSpec::Kind::geometric_decay: {
            p.resize(gen.n);
            double v = 1.0;
            for (std::size_t i = 0; i < gen.n; ++i) {
                v *= gen.r;
                p[i] = v;
            }
            break;
        }
        case GeneratorSpec::Kind::mixed:
            p = sample_mixed_instance(cfg.seed, index, gen.n);
            break;
    }
    for (double v : p) {
        if (!(v > 0.0) || !(v <= 1.0)) {
            throw ConfigError("generator produced a probability outside (0, 1]");
        }
    }
    return p;
}

}  // namespace bpc::runner
