#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "erlmix/kernels.hpp"

namespace erlmix {

inline constexpr int kMixtureSchemaVersion = 1;

// Finite multivariate Erlang mixture with common rate n. `residual` records
// mass that was measured on the target but is not represented by a listed
// component; listed weights plus residual sum to 1.
struct ErlangMixture {
    int d = 1;
    int n = 1;
    std::vector<std::pair<ShapeIndex, double>> components;
    double residual = 0.0;

    void validate() const;
};

// sum_m a_m prod_j tau_{m_j,n}(x_j); the residual contributes nothing.
double mixture_pdf(const ErlangMixture& g, std::span<const double> x);

// CDF of a one-dimensional mixture via Erlang CDF differences.
double mixture_cdf_1d(const ErlangMixture& g, double x);

// Smallest box upper corner beyond which every component carries less than
// `tail_mass` of its probability per axis.
std::vector<double> mixture_tail_box(const ErlangMixture& g, double tail_mass);

nlohmann::json mixture_to_json(const ErlangMixture& g);
ErlangMixture mixture_from_json(const nlohmann::json& j);

}  // namespace erlmix
