#include "erlmix/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace erlmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Poisson survival sum P(K >= m) for K ~ Poisson(lambda), m >= 1.
// Starts at k = m in log space and recurses upward; terms are eventually
// geometric with ratio lambda/k < 1.
double poisson_upper_tail(std::int64_t m, double lambda) {
    double log_term = static_cast<double>(m) * std::log(lambda) - lambda -
                      std::lgamma(static_cast<double>(m) + 1.0);
    double term = std::exp(log_term);
    double sum = 0.0;
    std::int64_t k = m;
    while (true) {
        sum += term;
        ++k;
        term *= lambda / static_cast<double>(k);
        if (term < sum * 1e-18 && static_cast<double>(k) > lambda) break;
        if (k > m + 100000) break;
    }
    return sum;
}

// Poisson CDF P(K <= m-1), summed downward from k = m-1 in log space. For
// lambda >= m the largest term in range sits at k = m-1, so the downward
// recursion never loses the head of the sum to underflow.
double poisson_lower_tail(std::int64_t m, double lambda) {
    double log_term = static_cast<double>(m - 1) * std::log(lambda) - lambda -
                      std::lgamma(static_cast<double>(m));
    double term = std::exp(log_term);
    double sum = 0.0;
    for (std::int64_t k = m - 1; k >= 0; --k) {
        sum += term;
        if (term < sum * 1e-18) break;
        term *= static_cast<double>(k) / lambda;
    }
    return sum;
}

}  // namespace

ErlangParams::ErlangParams(std::int64_t m, double beta) : shape(m), rate(beta) {
    if (m < 1) throw std::invalid_argument("ErlangParams: shape < 1");
    if (!(beta > 0.0)) throw std::invalid_argument("ErlangParams: rate <= 0");
}

double erlang_log_pdf(const ErlangParams& params, double x) {
    if (x < 0.0) throw std::invalid_argument("erlang_log_pdf: x < 0");
    const auto m = params.shape;
    const double beta = params.rate;
    if (x == 0.0) return m == 1 ? std::log(beta) : kNegInf;
    return std::log(beta) + static_cast<double>(m - 1) * std::log(beta * x) -
           beta * x - std::lgamma(static_cast<double>(m));
}

double erlang_pdf(const ErlangParams& params, double x) {
    const double lp = erlang_log_pdf(params, x);
    return lp == kNegInf ? 0.0 : std::exp(lp);
}

double product_kernel_pdf(std::span<const std::int64_t> m, int n,
                          std::span<const double> x) {
    if (m.size() != x.size())
        throw std::invalid_argument("product_kernel_pdf: dimension mismatch");
    double log_sum = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        const double lp =
            erlang_log_pdf(ErlangParams(m[j], static_cast<double>(n)), x[j]);
        if (lp == kNegInf) return 0.0;
        log_sum += lp;
    }
    return std::exp(log_sum);
}

double erlang_sup_norm_exact(std::int64_t m, int n) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("erlang_sup_norm_exact: bad parameters");
    if (m == 1) return static_cast<double>(n);
    const double k = static_cast<double>(m - 1);
    return static_cast<double>(n) *
           std::exp(-k + k * std::log(k) - std::lgamma(k + 1.0));
}

double erlang_sup_norm_bound(std::int64_t m, int n) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("erlang_sup_norm_bound: bad parameters");
    return static_cast<double>(n) / std::sqrt(static_cast<double>(m));
}

double erlang_lp_norm_bound(std::int64_t m, int n, double p) {
    if (m < 1 || n < 1 || p < 1.0)
        throw std::invalid_argument("erlang_lp_norm_bound: bad parameters");
    if (p == 1.0) return 1.0;
    const double e = 1.0 - 1.0 / p;
    return std::pow(static_cast<double>(n), e) *
           std::pow(static_cast<double>(m), -e / 2.0);
}

double erlang_cdf(const ErlangParams& params, double x) {
    if (x < 0.0) throw std::invalid_argument("erlang_cdf: x < 0");
    if (x == 0.0) return 0.0;
    const double lambda = params.rate * x;
    // F(x) = P(Poisson(lambda) >= m)
    if (lambda < static_cast<double>(params.shape))
        return poisson_upper_tail(params.shape, lambda);
    return 1.0 - poisson_lower_tail(params.shape, lambda);
}

double erlang_sf(const ErlangParams& params, double x) {
    if (x < 0.0) throw std::invalid_argument("erlang_sf: x < 0");
    if (x == 0.0) return 1.0;
    const double lambda = params.rate * x;
    if (lambda < static_cast<double>(params.shape))
        return 1.0 - poisson_upper_tail(params.shape, lambda);
    return poisson_lower_tail(params.shape, lambda);
}

}  // namespace erlmix
