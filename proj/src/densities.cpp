#include "erlmix/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "erlmix/parallel.hpp"
#include "erlmix/rng.hpp"

namespace erlmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double erlang_sup_general(std::int64_t m, double beta) {
    if (m == 1) return beta;
    const double k = static_cast<double>(m - 1);
    return beta * std::exp(-k + k * std::log(k) - std::lgamma(k + 1.0));
}

// antiderivative of 1 - |2t - 1|^alpha on [0, 1], zero at 0
double bump_antiderivative(double x, double alpha) {
    x = std::clamp(x, 0.0, 1.0);
    const double a1 = alpha + 1.0;
    if (x <= 0.5)
        return x + (std::pow(1.0 - 2.0 * x, a1) - 1.0) / (2.0 * a1);
    const double at_half = 0.5 - 1.0 / (2.0 * a1);
    return at_half + (x - 0.5) - std::pow(2.0 * x - 1.0, a1) / (2.0 * a1);
}

void check_cell(const DensitySpec& f, const Cell& cell) {
    if (static_cast<int>(cell.lo.size()) != f.d ||
        static_cast<int>(cell.hi.size()) != f.d)
        throw std::invalid_argument("cell dimension mismatch");
    for (int j = 0; j < f.d; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (cell.lo[ju] < 0.0 || !(cell.lo[ju] < cell.hi[ju]))
            throw std::invalid_argument("cell outside positive orthant or empty");
    }
}

void sample_point(StreamRng& rng, double box, int d, std::vector<double>& x) {
    x.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        x[static_cast<std::size_t>(j)] = box * rng.uniform();
}

void sample_direction(StreamRng& rng, int d, std::vector<double>& dir) {
    dir.resize(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (int j = 0; j < d; ++j) {
            double u1 = rng.uniform();
            double u2 = rng.uniform();
            while (u1 <= 0.0) u1 = rng.uniform();
            const double z =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            dir[static_cast<std::size_t>(j)] = z;
            norm2 += z * z;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : dir) v *= inv;
}

double norm1(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

}  // namespace

std::vector<std::string> zoo_names() {
    return {"uniform_box", "product_exponential", "product_gamma_integer",
            "holder_bump", "erlang_mixture_reference"};
}

DensitySpec zoo_density(const std::string& name, int d, const ZooParams& params) {
    if (d < 1) throw std::invalid_argument("zoo_density: d < 1");
    DensitySpec spec;
    spec.name = name;
    spec.d = d;

    if (name == "uniform_box") {
        const double M = params.M;
        if (!(M > 0.0)) throw std::invalid_argument("uniform_box: M <= 0");
        const double height = std::pow(M, -static_cast<double>(d));
        spec.evaluate = [d, M, height](std::span<const double> x) {
            for (int j = 0; j < d; ++j)
                if (x[static_cast<std::size_t>(j)] < 0.0 ||
                    x[static_cast<std::size_t>(j)] > M)
                    return 0.0;
            return height;
        };
        spec.support_box = std::vector<double>(static_cast<std::size_t>(d), M);
        spec.axis_integral = [M](int, double lo, double hi) {
            const double len = std::min(hi, M) - std::max(lo, 0.0);
            return std::max(len, 0.0) / M;
        };
        spec.sup_bound = height;
        spec.weight_index = 0.0;
        spec.is_product = true;
    } else if (name == "product_exponential") {
        std::vector<double> rates = params.rates;
        if (rates.empty()) rates.assign(static_cast<std::size_t>(d), 1.0);
        if (static_cast<int>(rates.size()) != d)
            throw std::invalid_argument("product_exponential: rates size != d");
        for (double r : rates)
            if (!(r > 0.0))
                throw std::invalid_argument("product_exponential: rate <= 0");
        double sup = 1.0, rate_norm2 = 0.0;
        for (double r : rates) {
            sup *= r;
            rate_norm2 += r * r;
        }
        spec.evaluate = [d, rates](std::span<const double> x) {
            double e = 0.0;
            for (int j = 0; j < d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (x[ju] < 0.0) return 0.0;
                e += rates[ju] * x[ju];
            }
            double c = 1.0;
            for (double r : rates) c *= r;
            return c * std::exp(-e);
        };
        spec.axis_integral = [rates](int axis, double lo, double hi) {
            const double r = rates[static_cast<std::size_t>(axis)];
            return std::exp(-r * lo) - std::exp(-r * hi);
        };
        spec.sup_bound = sup;
        spec.holder = HolderMeta{1.0, sup * std::sqrt(rate_norm2), kInf};
        spec.weight_index = 0.0;
        spec.is_product = true;
    } else if (name == "product_gamma_integer") {
        std::vector<std::int64_t> shapes = params.shapes;
        if (shapes.empty()) shapes.assign(static_cast<std::size_t>(d), 2);
        if (static_cast<int>(shapes.size()) != d)
            throw std::invalid_argument("product_gamma_integer: shapes size != d");
        const double beta = params.beta;
        if (!(beta > 0.0))
            throw std::invalid_argument("product_gamma_integer: beta <= 0");
        double sup = 1.0;
        for (auto m : shapes) sup *= erlang_sup_general(m, beta);
        spec.evaluate = [d, shapes, beta](std::span<const double> x) {
            double v = 1.0;
            for (int j = 0; j < d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (x[ju] < 0.0) return 0.0;
                v *= erlang_pdf(ErlangParams(shapes[ju], beta), x[ju]);
            }
            return v;
        };
        spec.axis_integral = [shapes, beta](int axis, double lo, double hi) {
            ErlangParams p(shapes[static_cast<std::size_t>(axis)], beta);
            return erlang_cdf(p, hi) - erlang_cdf(p, lo);
        };
        spec.sup_bound = sup;
        spec.weight_index = 0.0;
        spec.is_product = true;
    } else if (name == "holder_bump") {
        const double alpha = params.alpha;
        if (!(alpha > 0.0) || alpha > 1.0)
            throw std::invalid_argument("holder_bump: alpha outside (0,1]");
        const double c = (alpha + 1.0) / alpha;
        spec.evaluate = [d, alpha, c](std::span<const double> x) {
            double v = 1.0;
            for (int j = 0; j < d; ++j) {
                const double t = x[static_cast<std::size_t>(j)];
                if (t < 0.0 || t > 1.0) return 0.0;
                v *= c * (1.0 - std::pow(std::abs(2.0 * t - 1.0), alpha));
            }
            return v;
        };
        spec.support_box = std::vector<double>(static_cast<std::size_t>(d), 1.0);
        spec.axis_integral = [alpha, c](int, double lo, double hi) {
            return c * (bump_antiderivative(hi, alpha) -
                        bump_antiderivative(lo, alpha));
        };
        const double sup = std::pow(c, d);
        // product Hölder constant from the per-axis constant c*2^alpha and
        // sum_j |dx_j|^alpha <= d^{1-alpha/2} |dx|_2^alpha
        const double H = std::pow(c, d) * std::pow(2.0, alpha) *
                         std::pow(static_cast<double>(d), 1.0 - alpha / 2.0);
        spec.sup_bound = sup;
        spec.holder = HolderMeta{alpha, H, kInf};
        spec.weight_index = 0.0;
        spec.is_product = true;
    } else if (name == "erlang_mixture_reference") {
        ErlangMixture g;
        if (params.mixture) {
            g = *params.mixture;
        } else {
            g.d = d;
            g.n = 1;
            g.components = {{ShapeIndex(static_cast<std::size_t>(d), 1), 1.0}};
        }
        g.validate();
        if (g.d != d)
            throw std::invalid_argument(
                "erlang_mixture_reference: mixture dimension mismatch");
        spec.evaluate = [g](std::span<const double> x) { return mixture_pdf(g, x); };
        spec.exact_cell_integral = [g](const Cell& cell) {
            double mass = 0.0;
            for (const auto& [m, w] : g.components) {
                if (w == 0.0) continue;
                double cm = w;
                for (int j = 0; j < g.d; ++j) {
                    const auto ju = static_cast<std::size_t>(j);
                    ErlangParams p(m[ju], static_cast<double>(g.n));
                    cm *= erlang_cdf(p, cell.hi[ju]) - erlang_cdf(p, cell.lo[ju]);
                }
                mass += cm;
            }
            return mass;
        };
        double sup = 0.0;
        for (const auto& [m, w] : g.components) {
            double s = w;
            for (int j = 0; j < g.d; ++j)
                s *= erlang_sup_norm_exact(m[static_cast<std::size_t>(j)], g.n);
            sup += s;
        }
        spec.sup_bound = sup;
        spec.weight_index = 0.0;
    } else {
        throw std::invalid_argument("zoo_density: unknown density '" + name + "'");
    }
    return spec;
}

double cell_mass(const DensitySpec& f, const Cell& cell,
                 const QuadratureSpec& quad) {
    check_cell(f, cell);
    if (f.axis_integral) {
        double mass = 1.0;
        for (int j = 0; j < f.d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            mass *= f.axis_integral(j, cell.lo[ju], cell.hi[ju]);
            if (mass == 0.0) return 0.0;
        }
        return mass;
    }
    if (f.exact_cell_integral) return f.exact_cell_integral(cell);

    const double coarse =
        integrate_box(f.evaluate, cell.lo, cell.hi, quad.order);
    const double fine =
        integrate_box(f.evaluate, cell.lo, cell.hi, quad.refine_order);
    if (std::abs(coarse - fine) > quad.cell_tol)
        throw std::runtime_error("cell_mass: quadrature did not converge (|" +
                                 std::to_string(coarse) + " - " +
                                 std::to_string(fine) + "| > tol)");
    return fine;
}

void validate_density(const DensitySpec& f, double tol) {
    std::vector<double> upper =
        f.support_box ? *f.support_box
                      : std::vector<double>(static_cast<std::size_t>(f.d), 50.0);
    double total = 0.0;
    if (f.has_exact_integral()) {
        Cell cell{std::vector<double>(static_cast<std::size_t>(f.d), 0.0), upper};
        total = cell_mass(f, cell);
    } else {
        // composite panels keep each sub-integral inside quadrature reach
        const int panels = 32;
        std::vector<std::int64_t> shape(static_cast<std::size_t>(f.d), panels);
        std::int64_t count = 1;
        for (int j = 0; j < f.d; ++j) count *= panels;
        total = par::block_sum(count, [&](std::int64_t idx) {
            Cell cell;
            cell.lo.resize(static_cast<std::size_t>(f.d));
            cell.hi.resize(static_cast<std::size_t>(f.d));
            std::int64_t rem = idx;
            for (int j = 0; j < f.d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                const std::int64_t k = rem % panels;
                rem /= panels;
                cell.lo[ju] = upper[ju] * static_cast<double>(k) / panels;
                cell.hi[ju] = upper[ju] * static_cast<double>(k + 1) / panels;
            }
            return integrate_box(f.evaluate, cell.lo, cell.hi, 8);
        });
    }
    if (std::abs(total - 1.0) > tol)
        throw std::runtime_error("density '" + f.name +
                                 "' is not normalized: integral = " +
                                 std::to_string(total));
}

double local_modulus(const DensitySpec& f, double M, double r,
                     int grid_resolution) {
    if (!(r > 0.0)) throw std::invalid_argument("local_modulus: r <= 0");
    if (grid_resolution < 2)
        throw std::invalid_argument("local_modulus: grid_resolution < 2");
    const int d = f.d;
    const double upper = M + r;
    const int g = grid_resolution;
    const double h = upper / (g - 1);
    const int reach = static_cast<int>(std::ceil(r / h));
    std::int64_t count = 1;
    for (int j = 0; j < d; ++j) count *= g;

    auto point_at = [&](std::int64_t idx, std::vector<double>& x,
                        std::vector<int>& ig) {
        x.resize(static_cast<std::size_t>(d));
        ig.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            ig[ju] = static_cast<int>(idx % g);
            idx /= g;
            x[ju] = h * ig[ju];
        }
    };

    return std::max(0.0, par::grid_max(count, [&](std::int64_t idx) {
        std::vector<double> x, y;
        std::vector<int> ix, off;
        point_at(idx, x, ix);
        const double fx = f.evaluate(x);
        double best = 0.0;
        // scan neighbors within reach per axis
        off.assign(static_cast<std::size_t>(d), -reach);
        y.resize(static_cast<std::size_t>(d));
        while (true) {
            bool valid = true;
            double dist2 = 0.0;
            for (int j = 0; j < d && valid; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                const int k = ix[ju] + off[ju];
                if (k < 0 || k >= g) {
                    valid = false;
                    break;
                }
                y[ju] = h * k;
                const double dj = h * off[ju];
                dist2 += dj * dj;
            }
            if (valid && dist2 <= r * r && dist2 > 0.0)
                best = std::max(best, std::abs(f.evaluate(y) - fx));
            int j = 0;
            for (; j < d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (++off[ju] <= reach) break;
                off[ju] = -reach;
            }
            if (j == d) break;
        }
        return best;
    }));
}

double intrinsic_modulus(const DensitySpec& f, double nu, double delta,
                         const SamplerSpec& sampler) {
    if (!(delta > 0.0)) throw std::invalid_argument("intrinsic_modulus: delta <= 0");
    const int d = f.d;
    return std::max(0.0, par::grid_max(sampler.pairs, [&](std::int64_t i) {
        StreamRng rng(sampler.seed, static_cast<std::uint64_t>(i));
        std::vector<double> x, dir, y;
        sample_point(rng, sampler.box, d, x);
        sample_direction(rng, d, dir);
        const double scale = delta * std::sqrt(1.0 + norm1(x));
        const double dist = scale * rng.uniform();
        y.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            y[ju] = std::max(0.0, x[ju] + dist * dir[ju]);
        }
        const double w = std::pow(1.0 + norm1(x), nu);
        return std::abs(f.evaluate(y) - f.evaluate(x)) / w;
    }));
}

double holder_seminorm_estimate(const DensitySpec& f, double nu, double alpha,
                                const SamplerSpec& sampler) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("holder_seminorm_estimate: alpha outside (0,1]");
    const int d = f.d;
    return std::max(0.0, par::grid_max(sampler.pairs, [&](std::int64_t i) {
        StreamRng rng(sampler.seed, static_cast<std::uint64_t>(i));
        std::vector<double> x, dir, y;
        sample_point(rng, sampler.box, d, x);
        sample_direction(rng, d, dir);
        const double scale = std::sqrt(1.0 + norm1(x));
        // log-uniform distances probe both fine and kernel-sized scales
        const double frac = std::exp(std::log(1e-4) * (1.0 - rng.uniform()));
        const double dist = scale * frac;
        y.resize(static_cast<std::size_t>(d));
        double actual2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            y[ju] = std::max(0.0, x[ju] + dist * dir[ju]);
            const double dj = y[ju] - x[ju];
            actual2 += dj * dj;
        }
        const double actual = std::sqrt(actual2);
        if (actual == 0.0) return 0.0;
        const double w = std::pow(1.0 + norm1(x), nu);
        return std::abs(f.evaluate(y) - f.evaluate(x)) /
               (w * std::pow(actual / scale, alpha));
    }));
}

}  // namespace erlmix
