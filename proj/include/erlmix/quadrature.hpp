#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace erlmix {

struct QuadratureSpec {
    int order = 8;         // Gauss-Legendre nodes per axis per cell
    int refine_order = 16;  // used for the disagreement estimate
    double cell_tol = 1e-12;
};

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton
// iteration on the Legendre recurrence.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendre& get(int order);
};

inline const GaussLegendre& GaussLegendre::get(int order) {
    static std::map<int, GaussLegendre> cache;
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order < 1) throw std::invalid_argument("GaussLegendre: order < 1");

    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(order));
    gl.weights.resize(static_cast<std::size_t>(order));
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[static_cast<std::size_t>(i)] = -x;
        gl.weights[static_cast<std::size_t>(i)] = w;
        gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    auto [pos, ok] = cache.emplace(order, std::move(gl));
    (void)ok;
    return pos->second;
}

template <class F>
double integrate_1d(F&& f, double a, double b, int order) {
    const auto& gl = GaussLegendre::get(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        s += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return s * half;
}

// Tensor-product rule over an axis-aligned box.
template <class F>
double integrate_box(F&& f, std::span<const double> lo,
                     std::span<const double> hi, int order) {
    const int d = static_cast<int>(lo.size());
    const auto& gl = GaussLegendre::get(order);
    const int q = order;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    double jac = 1.0;
    for (int j = 0; j < d; ++j) jac *= 0.5 * (hi[j] - lo[j]);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (int j = 0; j < d; ++j) {
            const auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]);
            x[static_cast<std::size_t>(j)] =
                0.5 * (lo[j] + hi[j]) + 0.5 * (hi[j] - lo[j]) * gl.nodes[i];
            w *= gl.weights[i];
        }
        total += w * f(std::span<const double>(x));
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[static_cast<std::size_t>(j)] < q) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
        if (j == d) break;
    }
    return total * jac;
}

}  // namespace erlmix
