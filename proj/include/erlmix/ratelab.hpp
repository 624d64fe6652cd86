#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "erlmix/densities.hpp"
#include "erlmix/metrics.hpp"
#include "erlmix/truncation.hpp"

// Experiment driver: sweep the scale index n or the component budget K,
// collect measured errors next to their theoretical bounds, and fit log-log
// slopes against the predicted exponents.
namespace erlmix {

struct RateStudyConfig {
    std::string density = "holder_bump";
    int d = 1;
    ZooParams params;

    enum class Mode { scale_sweep, component_sweep };
    Mode mode = Mode::scale_sweep;
    std::vector<int> n_values = {4, 8, 16, 32, 64, 128, 256};
    std::vector<std::int64_t> K_values;

    enum class ScheduleMode { compact, weighted_sup, weighted_lp };
    ScheduleMode schedule = ScheduleMode::compact;

    NormSpec norm;
    double alpha = 1.0;
    double M = 1.0;      // compact schedule cube
    double B = 0.0;      // schedule constant; 0 = default per mode
    int n0 = 2;
    double p = 2.0;      // weighted_lp schedule
    std::uint64_t seed = 1;
    double slope_window = 0.15;     // scale sweeps
    double component_window = 0.25; // component sweeps
    // when false, component sweeps only assert the one-sided bound
    // error <= C K^exponent with fitted C
    bool require_slope_match = false;
    double operator_tail_tol = 1e-12;
};

struct RateRow {
    double sweep_value;  // n or K
    double error;
    double bound;  // 0 when no certified bound applies
    std::int64_t components;
    std::string note;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool valid = false;
};

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);

struct RateStudy {
    std::vector<RateRow> rows;
    FitResult fit;
    double predicted_exponent = 0.0;
    double window = 0.0;
    double max_ratio_C = 0.0;  // max error / K^exponent over rows
    bool slope_in_window = false;
    bool bound_respected = true;  // error <= bound on every certified row

    std::string csv(const std::string& sweep_var) const;
    nlohmann::json summary(const RateStudyConfig& cfg) const;
};

RateStudy run_scale_sweep(const RateStudyConfig& cfg);
RateStudy run_component_sweep(const RateStudyConfig& cfg);

}  // namespace erlmix
