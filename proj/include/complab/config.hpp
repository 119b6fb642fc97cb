#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "complab/potential.hpp"

namespace complab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One recognized key, written "section.key", with its default as text.
struct Knob {
    std::string key;
    std::string default_value;
    std::string description;
};
const std::vector<Knob>& knob_catalog();

inline const std::vector<std::string> kExperimentKinds = {
    "spectrum",    "kernel-box",    "kernel-open",    "expand",           "coulomb-delta", "wkb-check",
    "scaling-study", "lowk-study", "riemann-study", "normseries-study", "specfun-probe"};

// Sectioned ini text. Every knob has a default; unknown keys are rejected.
class ExperimentConfig {
public:
    ExperimentConfig();  // all defaults
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text, const std::string& origin = "<string>");

    // Overrides one knob, validating the key and the value.
    void set(const std::string& key, const std::string& value);

    std::string text(const std::string& key) const;
    double number(const std::string& key) const;
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;  // comma separated, may be empty

    // Every knob with its effective value, grouped by section; parses back to the same config.
    std::string effective_ini() const;

private:
    void validate() const;
    std::map<std::string, std::string> values_;
};

PotentialSpec build_potential(const ExperimentConfig& cfg);

}  // namespace complab
