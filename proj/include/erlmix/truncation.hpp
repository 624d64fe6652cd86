#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "erlmix/operator.hpp"

// Finite mixtures from countable ones: keep the index cube F_N, relocate the
// tail mass to a single component, and certify the truncation gap. Component
// schedules map a component budget K to the (n, N) pair realizing the
// component-count rates.
namespace erlmix {

struct TruncationPlan {
    enum class Mode { compact, weighted_sup, weighted_lp, generic_lp };
    enum class Relocation { corner, origin };  // ell_N = (N+1,...) vs (1,...)

    Mode mode = Mode::compact;
    std::int64_t N = 1;  // per-axis index cap
    Relocation relocation = Relocation::corner;
    double M = 1.0;    // compact mode cube
    double nu = 0.0;   // weighted_sup mode
    double p = 2.0;    // weighted_lp / generic_lp modes
    double eta = 0.0;  // weighted_lp mode
};

struct TruncationResult {
    ErlangMixture mixture;
    double bound;        // certified gap in the plan's norm
    double tail_mass;    // relocated mass r_{n,N}
    std::string formula; // bound formula name, for reports
};

// Certified bound value for the plan at rate index n (log-space for the
// compact factorial form).
double truncation_bound(const TruncationPlan& plan, int n, int d);

// Pre: table covers F_N (per-axis coverage >= N). Emits at most N^d + 1
// components whose weights still sum to 1 with the relocated tail.
TruncationResult truncate(const CellMassTable& table, const TruncationPlan& plan);

struct ScheduleError : std::runtime_error {
    std::int64_t required_K0;
    ScheduleError(const std::string& msg, std::int64_t k0)
        : std::runtime_error(msg), required_K0(k0) {}
};

struct Schedule {
    int nK = 1;
    std::int64_t N = 1;
    std::int64_t K0 = 1;
    double predicted_exponent = 0.0;  // error ~ K^exponent
};

// n(K) = floor((K/B_M)^{1/d}), N = ceil(n(K)(M+1)); emitted component count
// is forced <= K.
Schedule schedule_compact(std::int64_t K, int d, double alpha, double M,
                          double B_M, int n0);

// n(K) = floor((K/B)^{1/[d(2d+alpha)]}), N = ceil(n(K)^{2d+alpha}).
Schedule schedule_weighted_sup(std::int64_t K, int d, double alpha, double B,
                               int n0);

// gamma = 2d + alpha p/(p-1); n(K) = floor((K/B)^{1/(d gamma)}),
// N = ceil(n(K)^gamma).
Schedule schedule_weighted_lp(std::int64_t K, int d, double alpha, double p,
                              double B, int n0);

}  // namespace erlmix
