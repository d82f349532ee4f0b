#pragma once

#include "fieldent/cache.hpp"
#include "fieldent/gaussian.hpp"
#include "fieldent/precision.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace fieldent {

enum class ProcessingOrder { Time, Reverse };

struct MultimodeConfig {
    double delta = 2.0;
    double radius = 1.0;
    double T = 40.0;
    double separation = 42.0; // T + 2R
    std::vector<int> N_list{1, 10, 21, 30, 35, 38, 40, 41, 42, 43, 45, 50, 55, 60};
    PrecisionContext precision = PrecisionContext::high();
    ProcessingOrder order = ProcessingOrder::Time;
    double plateau_fraction = 0.10;
    unsigned jobs = 1;
    std::shared_ptr<KernelCache> cache;

    // Throws DomainError on an invalid configuration.
    void validate() const;
};

struct MultimodeRecord {
    int N = 0;
    double E_N = 0.0;
    mp_real E_N_mp = 0; // same at working precision
    mp_real min_ppt = 0;
    int n_ppt_below_1 = 0;
    unsigned precision_bits = 0;
    double wall_s = 0.0;
    mp_real zero_tolerance = 0;
    bool certified_zero = false;
    mp_real min_physical = 0;  // min symplectic eigenvalue of σ
    mp_real ccr_deviation = 0; // of the Gram-Schmidt output
    mp_real path_deviation = 0;
};

struct MultimodeResult {
    std::vector<MultimodeRecord> records; // ascending N
};

// One N: closed-form tables, symplectic Gram-Schmidt, covariance of the two
// detectors' mode sets at the configured separation, PPT spectrum and E_N.
MultimodeRecord run_single(const MultimodeConfig& cfg, int N, std::vector<int> processing_order = {});

MultimodeResult run_multimode(const MultimodeConfig& cfg);

struct ThresholdReport {
    std::optional<int> N_star; // smallest scanned N with E_N > 0
    bool monotone = true;      // non-decreasing within 1e-10
    double max_decrease = 0.0;
    double last_relative_increment = 0.0;
    bool plateau = false;
};

ThresholdReport analyze_threshold(const MultimodeResult& result, double plateau_fraction);

struct ThresholdScan {
    MultimodeResult result;
    ThresholdReport report;
};

ThresholdScan threshold_scan(const MultimodeConfig& cfg);

} // namespace fieldent
