#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Numerically stable Erlang kernels: log-space densities, exact sup norms,
// shape-decay norm bounds, and the integer-shape CDF. All functions are pure
// and safe to call concurrently.
namespace erlmix {

using ShapeIndex = std::vector<std::int64_t>;

struct ErlangParams {
    std::int64_t shape;  // m >= 1
    double rate;         // beta > 0; the operator always uses beta = n

    ErlangParams(std::int64_t m, double beta);
};

// log tau_{m,beta}(x); returns -inf at x = 0 when m >= 2.
double erlang_log_pdf(const ErlangParams& params, double x);
double erlang_pdf(const ErlangParams& params, double x);

// prod_j tau_{m_j,n}(x_j) via summed log densities.
double product_kernel_pdf(std::span<const std::int64_t> m, int n,
                          std::span<const double> x);

// sup_x tau_{m,n}(x): n for m = 1, mode value n e^{-(m-1)}(m-1)^{m-1}/(m-1)!
// for m >= 2, evaluated in log space.
double erlang_sup_norm_exact(std::int64_t m, int n);

// Shape-decay envelope n m^{-1/2}.
double erlang_sup_norm_bound(std::int64_t m, int n);

// n^{1-1/p} m^{-(1-1/p)/2} for p > 1; exactly 1 for p = 1.
double erlang_lp_norm_bound(std::int64_t m, int n, double p);

// Regularized lower incomplete gamma at integer shape, via the finite
// Poisson-sum form (both tails computed on their stable side).
double erlang_cdf(const ErlangParams& params, double x);

// 1 - erlang_cdf, computed without cancellation in the far tail.
double erlang_sf(const ErlangParams& params, double x);

}  // namespace erlmix
