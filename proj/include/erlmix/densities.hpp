#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erlmix/mixture.hpp"
#include "erlmix/quadrature.hpp"

namespace erlmix {

// Axis-aligned hyper-rectangle [lo, hi) in the positive orthant.
struct Cell {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct HolderMeta {
    double alpha;  // in (0, 1]
    double H;
    double side;   // cube side on which the condition is certified (inf = global)
};

// A target density with whatever closed forms and regularity metadata it can
// certify. Evaluators must be pure; everything here is shared read-only by
// concurrent workers.
struct DensitySpec {
    std::string name;
    int d = 1;
    std::function<double(std::span<const double>)> evaluate;
    std::optional<std::vector<double>> support_box;  // upper corner per axis
    // Closed-form marginal integral over [lo, hi) for product densities.
    std::function<double(int axis, double lo, double hi)> axis_integral;
    // Closed-form integral over an arbitrary cell (set for non-products too).
    std::function<double(const Cell&)> exact_cell_integral;
    std::optional<double> sup_bound;
    std::optional<HolderMeta> holder;
    std::optional<double> weight_index;
    bool is_product = false;

    bool has_exact_integral() const {
        return static_cast<bool>(exact_cell_integral) ||
               static_cast<bool>(axis_integral);
    }
};

struct ZooParams {
    double M = 1.0;                    // uniform_box upper corner
    std::vector<double> rates;         // product_exponential (default all 1)
    std::vector<std::int64_t> shapes;  // product_gamma_integer (default all 2)
    double beta = 1.0;                 // product_gamma_integer rate
    double alpha = 0.5;                // holder_bump exponent
    std::optional<ErlangMixture> mixture;  // erlang_mixture_reference
};

// name in {uniform_box, product_exponential, product_gamma_integer,
// holder_bump, erlang_mixture_reference}
DensitySpec zoo_density(const std::string& name, int d,
                        const ZooParams& params = {});

std::vector<std::string> zoo_names();

// integral of f over the cell; closed form when available, otherwise
// tensor Gauss-Legendre with a refinement disagreement check.
double cell_mass(const DensitySpec& f, const Cell& cell,
                 const QuadratureSpec& quad = {});

// Rejects densities whose total mass differs from 1 by more than tol.
void validate_density(const DensitySpec& f, double tol = 1e-8);

// Grid-based lower estimate of the local modulus omega_{Q_{M+r}}(f; r).
double local_modulus(const DensitySpec& f, double M, double r,
                     int grid_resolution);

struct SamplerSpec {
    std::int64_t pairs = 100000;
    std::uint64_t seed = 1;
    double box = 10.0;  // sampling box upper corner per axis
};

// Sampled lower estimates of the intrinsic weighted modulus and the
// operator-adapted Hölder seminorm. Lower bounds of the true suprema.
double intrinsic_modulus(const DensitySpec& f, double nu, double delta,
                         const SamplerSpec& sampler = {});
double holder_seminorm_estimate(const DensitySpec& f, double nu, double alpha,
                                const SamplerSpec& sampler = {});

}  // namespace erlmix
