#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

// Measured error norms (grid suprema and weighted L^p quadrature) and the
// closed-form right-hand sides of the approximation bounds. Grid suprema are
// lower bounds of the true norm and every report says so.
namespace erlmix {

using Evaluator = std::function<double(std::span<const double>)>;

struct NormSpec {
    enum class Kind { lp, sup_box, weighted_sup };
    Kind kind = Kind::sup_box;
    double p = 2.0;
    double eta = 0.0;  // lp weight index
    double M = 1.0;    // sup_box cube
    double nu = 0.0;   // weighted_sup weight index
    // Upper corner of the evaluation box for lp / weighted_sup; the
    // weighted_sup sweep still expands beyond it until the maximum settles.
    std::optional<std::vector<double>> domain;
    int grid = 201;            // points per axis for sup norms
    int panels_per_unit = 8;   // lp composite panels per unit length
    int quad_order = 8;
};

struct ErrorReport {
    std::string metric;
    int d = 0;
    int n = 0;
    std::optional<std::int64_t> N;
    std::optional<std::int64_t> K;
    std::optional<double> M, r, alpha, nu, eta, p;
    double measured = 0.0;
    std::optional<double> bound;
    std::string bound_formula;
    std::string caveat;

    nlohmann::json to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

double error_norm(const Evaluator& f, const Evaluator& g, int d,
                  const NormSpec& spec);

// omega + 2 sup_f / r^2 (dM/n + d/(3n^2))
double bound_compact_modulus(double omega, double sup_f, double M, double r,
                             int n, int d);

// H C_{alpha,d} ((1+dM)/n)^{alpha/2} + 2 sup_f (dM/n + d/(3n^2))
double bound_compact_holder(double H, double alpha, double M, int n, int d,
                            double sup_f);

// C_{alpha,d} [f]_{nu,alpha,*} n^{-alpha/2}
double bound_weighted_holder(double seminorm, double alpha, int n, int d);

// Omega + |f|_{inf,nu} ((1+d/3)/(n delta^2) + sqrt(A_{2nu,d}(1+d/3))/(sqrt(n) delta))
double bound_weighted_qualitative(double norm_f, double omega_delta,
                                  double delta, double nu, int n, int d);

// C_{alpha,d} n^{-alpha/2} |H|_{p,eta}
double bound_weighted_lp(double H_norm, double alpha, int n, int d);

// (1 + d/3)^{alpha/2}
double holder_rate_constant(double alpha, int d);

// B_{p,eta,nu,d}, closed form; requires eta > nu p + d.
double constant_B(double p, double eta, double nu, int d);
// Independent quadrature cross-check of the same integral.
double constant_B_quadrature(double p, double eta, double nu, int d);

double probability_gap_bound(double l1_error);
double lev_gap_bound(double l1_error, double M);
double lp_event_bound(double lp_error, double p, double measure);

}  // namespace erlmix
