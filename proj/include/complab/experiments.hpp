#pragma once

#include <string>
#include <utility>
#include <vector>

#include "complab/config.hpp"

namespace complab {

struct Check {
    std::string name;
    std::string criterion;  // acceptance criterion id, e.g. "C7"
    double measured = 0;
    double threshold = 0;
    std::string relation;   // "<", "<=", ">=", "true"
    bool passed = false;
};

struct RunReport {
    std::string experiment;
    std::string label;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> stage_seconds;
    std::vector<std::string> artifacts;  // CSV files written, relative to the output directory

    bool passed() const;
    std::string to_text() const;
};

// Runs the configured experiment and writes CSVs, effective_config.ini and
// report.csv into output.output_dir. Stage timings go to timings.txt only,
// so every CSV is a pure function of the config.
RunReport run_experiment(const ExperimentConfig& cfg);

// Fixed CSV formatting shared by every artifact.
std::string csv_number(double x);

struct Benchmark {
    std::string name;
    std::string topic;        // the part of the theory it exercises
    std::string description;
    std::string config;       // ini text
};
const std::vector<Benchmark>& benchmark_catalog();
const Benchmark& find_benchmark(const std::string& name);

}  // namespace complab
