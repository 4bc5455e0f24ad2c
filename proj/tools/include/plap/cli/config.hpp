#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plap/errors.hpp"

namespace plap::cli {

// Config file problems. `key()` is the dotted key path ("problem.p") when
// one applies; `line()` is 1-based, 0 when the value came from a default.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string key, int line)
        : Error("ConfigError", format(what, key, line)), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& what, const std::string& key, int line);

    std::string key_;
    int line_;
};

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"forward",    "dn",      "linearize", "fixedpoint",
                                                "recover",    "checks",  "rescale"};
    return names;
}

// One `key = value` line inside a [scenario.<name>] section; keys are
// dotted paths into the base sections.
struct Override {
    std::string key;
    std::string value;
    int line = 0;

    // Source lines do not take part in equality.
    bool operator==(const Override& o) const { return key == o.key && value == o.value; }
};

struct ScenarioSpec {
    std::string name;
    std::vector<Override> overrides;

    bool operator==(const ScenarioSpec&) const = default;
};

struct ExperimentConfig {
    // [run]
    std::string subcommand = "forward";
    std::uint64_t seed = 1;

    // [domain]
    std::vector<double> extents{1.0, 1.0};
    std::vector<int> resolution{17, 17};
    std::vector<double> origin{0.0, 0.0};

    // [problem]
    double p = 3.0;
    std::string gamma = "1";
    // "linear" (zeta.x), "pseudo-1d" (exact solution for gamma = gamma(x1)),
    // or an expression in x1..xn.
    std::string boundary = "linear";
    std::vector<double> zeta{1.0, 0.0};

    // [solver]
    double tol = 1e-8;
    double eps_reg = 1e-8;
    int max_newton = 60;

    // [linearize]
    std::string direction = "sin(3.141592653589793*x2)+x1^2";
    std::vector<double> eps{1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3, 1e-3};

    // [fixedpoint]
    double fp_tol = 1e-10;
    int fp_max_iter = 200;

    // [recover]
    std::string profile = "exp(0.2*x1)";
    double c = 1.0;
    std::vector<double> recover_zeta{0.6, 0.48, 0.64};
    std::vector<double> recover_z{0.0, 0.0, 0.0};
    int order = 6;
    std::vector<double> depths{0.1, 0.3};
    std::string mode = "A";
    double condition_bound = 1e8;

    // [checks]
    int samples = 1000;
    double energy_gap_tol = 2e-2;

    // [rescale]
    double rescale_tol = 1e-8;

    std::vector<ScenarioSpec> scenarios;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parse the bracketed-section key-value format. Duplicate and unknown keys
// are errors; every scenario is resolved and validated before returning.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

// Checks that do not need a solve: dimensions, p outside {2} and (1, inf),
// unit zeta, expressions that parse and use no more than n variables.
// Expression errors are rethrown as ParseError with the key path prefixed.
void validate(const ExperimentConfig& cfg);

// Base config with the overrides of one scenario applied, validated.
ExperimentConfig resolve(const ExperimentConfig& base, const ScenarioSpec& scenario);

// Canonical text: every key in every section, doubles with 17 significant
// digits, then the scenario sections. parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& cfg);

// Keys by dotted path, in canonical order.
std::vector<std::string> known_keys();

std::string format_double(double v);

}  // namespace plap::cli
