#pragma once

#include "fieldent/multimode.hpp"
#include "fieldent/precision.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldent {

// Invalid configuration (exit code 2 in the CLI).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be read or written (exit code 4).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Experiment { Pairwise, HarvestSweep, Multimode, CommutatorCheck };
enum class OutputFormat { Csv, Json };

const char* experiment_name(Experiment e);

struct PairwiseParams {
    std::vector<double> deltas{1.0, 2.0};
    std::vector<double> seps{2.0, 2.5, 3.0, 4.0};
};

struct HarvestParams {
    double delta = 2.0;
    double T_over_R = 40.0;
    double d_over_R = 42.0;
    double omega_start = 0.05;
    double omega_stop = 1.0;
    double omega_step = 0.005;
    double coupling = 1.0;
};

struct MultimodeParams {
    double delta = 2.0;
    double T_over_R = 40.0;
    double d_over_R = 42.0;
    std::vector<int> N_list{1, 10, 21, 30, 35, 38, 40, 41, 42, 43, 45, 50, 55, 60};
    double plateau_fraction = 0.10;
    ProcessingOrder order = ProcessingOrder::Time;
};

struct CommutatorParams {
    double delta = 2.0;
    int points = 40;
    double T_over_R = 40.0;
    std::vector<int> N_list{5, 21, 30};
};

// All lengths in units of the smearing radius R.
struct ExperimentConfig {
    Experiment experiment = Experiment::Multimode;
    PairwiseParams pairwise;
    HarvestParams harvest;
    MultimodeParams multimode;
    CommutatorParams commutator;
    PrecisionContext precision = PrecisionContext::high();
    unsigned jobs = 0; // 0: available concurrency
    std::string cache_path;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;

    // Sets working precision; the tolerance follows unless given explicitly.
    void set_precision_bits(unsigned bits);
    void validate() const;
    // Canonical key = value listing of every effective setting that
    // influences numerical results, and its FNV-1a hash.
    std::string canonical() const;
    std::string hash() const;
    MultimodeConfig multimode_config() const;
};

// Default target tolerance for a working precision: 1e-10 at 53 bits,
// 1e-20 at 128 bits, otherwise 10^-ceil(bits·log10(2)/2).
double default_tolerance(unsigned bits);

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct RunOutput {
    Table table;
    std::vector<std::string> summary; // human-readable lines for the log
    double wall_s = 0.0;
};

RunOutput run_experiment(const ExperimentConfig& cfg);

struct Manifest {
    std::string experiment;
    std::string config_hash;
    unsigned precision_bits = 0;
    double target_tolerance = 0.0;
    std::string version;
    double wall_s = 0.0;
};

Manifest make_manifest(const ExperimentConfig& cfg, double wall_s);
void write_csv(std::ostream& out, const Table& table, const Manifest& manifest);
void write_json(std::ostream& out, const Table& table, const Manifest& manifest);

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Two-path cross-checks: closed-form vs numeric commutators, slice
// independence, harvesting 1D reduction vs nested quadrature, and the two
// symplectic-spectrum algorithms.
std::vector<CheckResult> verify_checks(const ExperimentConfig& cfg);

} // namespace fieldent
