#include "erlmix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "erlmix/operator.hpp"
#include "erlmix/parallel.hpp"
#include "erlmix/quadrature.hpp"

namespace erlmix {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string();
}

double weight_poly(std::span<const double> x, double index) {
    if (index == 0.0) return 1.0;
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return std::pow(1.0 + s, index);
}

double grid_sup(const Evaluator& f, const Evaluator& g, int d,
                std::span<const double> upper, int grid, double weight_index) {
    std::int64_t count = 1;
    for (int j = 0; j < d; ++j) count *= grid;
    return par::grid_max(count, [&](std::int64_t idx) {
        std::vector<double> x(static_cast<std::size_t>(d));
        std::int64_t rem = idx;
        for (int j = 0; j < d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const std::int64_t k = rem % grid;
            rem /= grid;
            x[ju] = upper[ju] * static_cast<double>(k) / (grid - 1);
        }
        return std::abs(f(x) - g(x)) / weight_poly(x, weight_index);
    });
}

}  // namespace

nlohmann::json ErrorReport::to_json() const {
    nlohmann::json j{{"metric", metric}, {"d", d},       {"n", n},
                     {"measured", measured},             {"caveat", caveat}};
    if (N) j["N"] = *N;
    if (K) j["K"] = *K;
    if (M) j["M"] = *M;
    if (r) j["r"] = *r;
    if (alpha) j["alpha"] = *alpha;
    if (nu) j["nu"] = *nu;
    if (eta) j["eta"] = *eta;
    if (p) j["p"] = *p;
    if (bound) {
        j["bound"] = *bound;
        j["bound_formula"] = bound_formula;
    }
    return j;
}

std::string ErrorReport::csv_header() {
    return "metric,d,n,N,K,M,r,alpha,nu,eta,p,measured,bound,caveat";
}

std::string ErrorReport::csv_row() const {
    std::string row = metric;
    row += "," + std::to_string(d);
    row += "," + std::to_string(n);
    row += "," + (N ? std::to_string(*N) : std::string());
    row += "," + (K ? std::to_string(*K) : std::string());
    row += "," + opt_str(M);
    row += "," + opt_str(r);
    row += "," + opt_str(alpha);
    row += "," + opt_str(nu);
    row += "," + opt_str(eta);
    row += "," + opt_str(p);
    row += "," + fmt17(measured);
    row += "," + (bound ? fmt17(*bound) : std::string());
    row += "," + caveat;
    return row;
}

double error_norm(const Evaluator& f, const Evaluator& g, int d,
                  const NormSpec& spec) {
    if (spec.grid < 2) throw std::invalid_argument("error_norm: grid < 2");
    switch (spec.kind) {
        case NormSpec::Kind::sup_box: {
            std::vector<double> upper(static_cast<std::size_t>(d), spec.M);
            return grid_sup(f, g, d, upper, spec.grid, 0.0);
        }
        case NormSpec::Kind::weighted_sup: {
            std::vector<double> upper =
                spec.domain ? *spec.domain
                            : std::vector<double>(static_cast<std::size_t>(d),
                                                  spec.M);
            // expand the box until the weighted maximum settles; kernels and
            // zoo tails decay, so far boxes stop contributing
            double best = 0.0;
            for (int round = 0; round < 4; ++round) {
                const double v =
                    grid_sup(f, g, d, upper, spec.grid, spec.nu);
                if (round > 0 && v <= best * (1.0 + 1e-12)) {
                    best = std::max(best, v);
                    break;
                }
                best = std::max(best, v);
                for (auto& u : upper) u *= 2.0;
            }
            return best;
        }
        case NormSpec::Kind::lp: {
            if (!(spec.p >= 1.0))
                throw std::invalid_argument("error_norm: p < 1");
            std::vector<double> upper =
                spec.domain ? *spec.domain
                            : std::vector<double>(static_cast<std::size_t>(d),
                                                  spec.M);
            std::vector<std::int64_t> panels(static_cast<std::size_t>(d));
            std::int64_t count = 1;
            for (int j = 0; j < d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                panels[ju] = std::max<std::int64_t>(
                    2, static_cast<std::int64_t>(
                           std::ceil(upper[ju] * spec.panels_per_unit)));
                count *= panels[ju];
            }
            const double total = par::block_sum(count, [&](std::int64_t idx) {
                std::vector<double> lo(static_cast<std::size_t>(d));
                std::vector<double> hi(static_cast<std::size_t>(d));
                std::int64_t rem = idx;
                for (int j = 0; j < d; ++j) {
                    const auto ju = static_cast<std::size_t>(j);
                    const std::int64_t k = rem % panels[ju];
                    rem /= panels[ju];
                    lo[ju] = upper[ju] * static_cast<double>(k) /
                             static_cast<double>(panels[ju]);
                    hi[ju] = upper[ju] * static_cast<double>(k + 1) /
                             static_cast<double>(panels[ju]);
                }
                auto integrand = [&](std::span<const double> x) {
                    return std::pow(std::abs(f(x) - g(x)), spec.p) /
                           weight_poly(x, spec.eta);
                };
                return integrate_box(integrand, lo, hi, spec.quad_order);
            });
            return std::pow(total, 1.0 / spec.p);
        }
    }
    throw std::invalid_argument("error_norm: bad kind");
}

double holder_rate_constant(double alpha, int d) {
    if (!(alpha > 0.0) || alpha > 1.0 || d < 1)
        throw std::invalid_argument("holder_rate_constant: bad parameters");
    return std::pow(1.0 + d / 3.0, alpha / 2.0);
}

double bound_compact_modulus(double omega, double sup_f, double M, double r,
                             int n, int d) {
    if (!(r > 0.0)) throw std::invalid_argument("bound_compact_modulus: r <= 0");
    return omega + 2.0 * sup_f / (r * r) *
                       (d * M / n + d / (3.0 * static_cast<double>(n) * n));
}

double bound_compact_holder(double H, double alpha, double M, int n, int d,
                            double sup_f) {
    return H * holder_rate_constant(alpha, d) *
               std::pow((1.0 + d * M) / n, alpha / 2.0) +
           2.0 * sup_f * (d * M / n + d / (3.0 * static_cast<double>(n) * n));
}

double bound_weighted_holder(double seminorm, double alpha, int n, int d) {
    return holder_rate_constant(alpha, d) * seminorm *
           std::pow(static_cast<double>(n), -alpha / 2.0);
}

double bound_weighted_qualitative(double norm_f, double omega_delta,
                                  double delta, double nu, int n, int d) {
    if (!(delta > 0.0))
        throw std::invalid_argument("bound_weighted_qualitative: delta <= 0");
    const double a = weighted_moment_constant(2.0 * nu, d);
    const double c = 1.0 + d / 3.0;
    return omega_delta +
           norm_f * (c / (n * delta * delta) +
                     std::sqrt(a * c) / (std::sqrt(static_cast<double>(n)) * delta));
}

double bound_weighted_lp(double H_norm, double alpha, int n, int d) {
    return holder_rate_constant(alpha, d) * H_norm *
           std::pow(static_cast<double>(n), -alpha / 2.0);
}

double constant_B(double p, double eta, double nu, int d) {
    if (!(p >= 1.0) || nu < 0.0 || d < 1)
        throw std::invalid_argument("constant_B: bad parameters");
    if (!(eta > nu * p + d))
        throw std::invalid_argument("constant_B: requires eta > nu p + d");
    // expand t^{d-1} = ((1+t) - 1)^{d-1}; each term integrates to
    // 1/(eta - nu p - i - 1)
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= d - 1; ++i) {
        const double sign = ((d - 1 - i) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binom / (eta - nu * p - i - 1.0);
        binom *= static_cast<double>(d - 1 - i) / (i + 1.0);
    }
    double log_fact = std::lgamma(static_cast<double>(d));
    return std::pow(sum / std::exp(log_fact), 1.0 / p);
}

double constant_B_quadrature(double p, double eta, double nu, int d) {
    if (!(eta > nu * p + d))
        throw std::invalid_argument("constant_B_quadrature: requires eta > nu p + d");
    // substitute t = e^s - 1: integrand e^{s(nu p - eta + 1)} (e^s - 1)^{d-1}
    const double decay = eta - nu * p - d;
    const double s_max = std::max(50.0, 60.0 / decay);
    const int panels = 400;
    const double total = par::block_sum(panels, [&](std::int64_t k) {
        const double a = s_max * static_cast<double>(k) / panels;
        const double b = s_max * static_cast<double>(k + 1) / panels;
        return integrate_1d(
            [&](double s) {
                return std::exp(s * (nu * p - eta + 1.0)) *
                       std::pow(std::expm1(s), d - 1);
            },
            a, b, 12);
    });
    return std::pow(total / std::exp(std::lgamma(static_cast<double>(d))),
                    1.0 / p);
}

double probability_gap_bound(double l1_error) { return l1_error; }

double lev_gap_bound(double l1_error, double M) { return M * l1_error; }

double lp_event_bound(double lp_error, double p, double measure) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_event_bound: p < 1");
    if (measure < 0.0) throw std::invalid_argument("lp_event_bound: measure < 0");
    if (p == 1.0) return lp_error;
    const double q = p / (p - 1.0);
    return std::pow(measure, 1.0 / q) * lp_error;
}

}  // namespace erlmix
