#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "erlmix/densities.hpp"
#include "erlmix/mixture.hpp"

// The tensorized Szász-Mirakjan-Kantorovich operator: mixture construction
// from cell masses, deterministic pointwise evaluation with certified Poisson
// window truncation, the Poisson-uniform Monte Carlo oracle, and the moment
// formulas the error bounds are built from.
namespace erlmix {

struct CellMassTable {
    int d = 1;
    int n = 1;
    std::map<ShapeIndex, double> masses;  // sorted: deterministic iteration
    std::vector<std::int64_t> n_max;      // covered index box per axis
    double residual = 0.0;                // mass outside the covered box
};

struct IndexPolicy {
    enum class Mode { support_box, mass_threshold, fixed_box };
    Mode mode = Mode::support_box;
    double residual_tol = 1e-9;      // mass_threshold stop criterion
    std::int64_t max_index = 65536;  // per-axis enumeration cap
    std::int64_t box_N = 0;          // fixed_box per-axis bound
};

struct EnumerationCapError : std::runtime_error {
    double achieved_residual;
    EnumerationCapError(const std::string& msg, double res)
        : std::runtime_error(msg), achieved_residual(res) {}
};

struct BuildResult {
    ErlangMixture mixture;
    CellMassTable table;
};

// Weights are exactly the cell masses a_{m,n}. support_box mode needs
// f.support_box and emits only indices with m_j <= floor(n M_j) + 1;
// mass_threshold mode enumerates expanding cubes F_N until the residual
// drops below policy.residual_tol; fixed_box enumerates [1, box_N]^d and
// leaves whatever mass falls outside as the residual.
BuildResult build_mixture(const DensitySpec& f, int n,
                          const IndexPolicy& policy = {},
                          const QuadratureSpec& quad = {});

// Direct evaluation of (K_n^{(d)} f)(x): per-axis Poisson weights truncated
// to a central window excluding less than tail_tol/d mass per axis.
double operator_eval(const DensitySpec& f, int n, std::span<const double> x,
                     double tail_tol = 1e-12, const QuadratureSpec& quad = {});

struct McResult {
    double estimate;
    double std_error;
};

// Sample mean of h((N+U)/n) with N_j ~ Poisson(n x_j), U_j ~ Unif[0,1].
// Per-sample RNG substreams keep the result independent of thread count.
McResult mc_oracle(const std::function<double(std::span<const double>)>& h,
                   int d, int n, std::span<const double> x,
                   std::int64_t samples, std::uint64_t seed);
McResult mc_oracle(const DensitySpec& f, int n, std::span<const double> x,
                   std::int64_t samples, std::uint64_t seed);

struct DisplacementMoments {
    double mean_shift;     // 1/(2n) per axis
    double second_moment;  // |x|_1/n + d/(3n^2)
    int d;
    int n;
    double norm1_x;

    // (1+d/3)^{r/2} ((1+|x|_1)/n)^{r/2}, valid for 0 < r <= 2
    double moment_bound(double r) const;
    // Chebyshev: second_moment / eta^2
    double tail_bound(double eta) const;
};

DisplacementMoments displacement_moments(std::span<const double> x, int n, int d);

// Touchard polynomial T_m(lambda) = sum_k S(m,k) lambda^k, exact Stirling
// coefficients for m <= 30.
double poisson_raw_moment(double lambda, int m);
double bell_number(int m);

// A constructive A_{nu,d} with E[w_nu(Y_{n,x})] <= A_{nu,d} w_nu(x):
// m = ceil(nu), splitting constant 2^{m-1}(1+d)^m, Touchard coefficient sum
// bound via the Bell number.
double weighted_moment_constant(double nu, int d);

// Per-axis Poisson pmf window with excluded mass below tol.
struct PoissonWindow {
    std::int64_t k_lo = 0;
    std::int64_t k_hi = 0;
    std::vector<double> pmf;  // pmf[k - k_lo]
};
PoissonWindow poisson_window(double lambda, double tol);

}  // namespace erlmix
