#include "erlmix/operator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "erlmix/parallel.hpp"
#include "erlmix/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace erlmix {

namespace {

double poisson_log_pmf(std::int64_t k, double lambda) {
    return static_cast<double>(k) * std::log(lambda) - lambda -
           std::lgamma(static_cast<double>(k) + 1.0);
}

// Cell [ (m-1)/n, m/n ) per axis for shape index m.
Cell cell_of(const ShapeIndex& m, int n) {
    Cell cell;
    cell.lo.resize(m.size());
    cell.hi.resize(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) {
        cell.lo[j] = static_cast<double>(m[j] - 1) / n;
        cell.hi[j] = static_cast<double>(m[j]) / n;
    }
    return cell;
}

}  // namespace

PoissonWindow poisson_window(double lambda, double tol) {
    PoissonWindow win;
    if (lambda < 0.0) throw std::invalid_argument("poisson_window: lambda < 0");
    if (lambda == 0.0) {
        win.k_lo = win.k_hi = 0;
        win.pmf = {1.0};
        return win;
    }
    const std::int64_t kc = static_cast<std::int64_t>(std::floor(lambda));
    double pc = std::exp(poisson_log_pmf(kc, lambda));
    std::deque<double> pmf{pc};
    std::int64_t lo = kc, hi = kc;
    double total = pc;
    double p_lo = pc, p_hi = pc;
    while (total < 1.0 - tol) {
        const double next_lo = lo > 0 ? p_lo * static_cast<double>(lo) / lambda : 0.0;
        const double next_hi = p_hi * lambda / static_cast<double>(hi + 1);
        // remaining tail no longer representable; the window is as tight as
        // doubles allow
        if (total + next_lo + next_hi == total) break;
        if (next_lo >= next_hi && lo > 0) {
            --lo;
            p_lo = next_lo;
            pmf.push_front(p_lo);
            total += p_lo;
        } else {
            ++hi;
            p_hi = next_hi;
            pmf.push_back(p_hi);
            total += p_hi;
        }
        if (hi - lo > 2000000)
            throw std::runtime_error("poisson_window: window did not converge");
    }
    win.k_lo = lo;
    win.k_hi = hi;
    win.pmf.assign(pmf.begin(), pmf.end());
    return win;
}

double operator_eval(const DensitySpec& f, int n, std::span<const double> x,
                     double tail_tol, const QuadratureSpec& quad) {
    if (static_cast<int>(x.size()) != f.d)
        throw std::invalid_argument("operator_eval: dimension mismatch");
    if (n < 1) throw std::invalid_argument("operator_eval: n < 1");
    if (!(tail_tol > 0.0) || tail_tol > 1e-6)
        throw std::invalid_argument("operator_eval: tail_tol outside (0, 1e-6]");
    const int d = f.d;
    std::vector<PoissonWindow> win(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        win[static_cast<std::size_t>(j)] =
            poisson_window(n * x[static_cast<std::size_t>(j)], tail_tol / d);

    // per-axis cell masses for product targets
    std::vector<std::vector<double>> axis_mass;
    if (f.axis_integral) {
        axis_mass.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const auto& w = win[ju];
            axis_mass[ju].resize(static_cast<std::size_t>(w.k_hi - w.k_lo + 1));
            for (std::int64_t k = w.k_lo; k <= w.k_hi; ++k)
                axis_mass[ju][static_cast<std::size_t>(k - w.k_lo)] =
                    f.axis_integral(j, static_cast<double>(k) / n,
                                    static_cast<double>(k + 1) / n);
        }
    }

    const double nd = std::pow(static_cast<double>(n), d);
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        k[static_cast<std::size_t>(j)] = win[static_cast<std::size_t>(j)].k_lo;
    double total = 0.0;
    while (true) {
        double weight = 1.0;
        for (int j = 0; j < d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            weight *= win[ju].pmf[static_cast<std::size_t>(k[ju] - win[ju].k_lo)];
        }
        double mass;
        if (f.axis_integral) {
            mass = 1.0;
            for (int j = 0; j < d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                mass *= axis_mass[ju][static_cast<std::size_t>(k[ju] - win[ju].k_lo)];
            }
        } else {
            ShapeIndex m(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j)
                m[static_cast<std::size_t>(j)] = k[static_cast<std::size_t>(j)] + 1;
            mass = cell_mass(f, cell_of(m, n), quad);
        }
        total += weight * mass;
        int j = 0;
        for (; j < d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (++k[ju] <= win[ju].k_hi) break;
            k[ju] = win[ju].k_lo;
        }
        if (j == d) break;
    }
    return nd * total;
}

BuildResult build_mixture(const DensitySpec& f, int n, const IndexPolicy& policy,
                          const QuadratureSpec& quad) {
    if (n < 1) throw std::invalid_argument("build_mixture: n < 1");
    const int d = f.d;
    CellMassTable table;
    table.d = d;
    table.n = n;

    auto mass_of = [&](const ShapeIndex& m) {
        return cell_mass(f, cell_of(m, n), quad);
    };

    double captured = 0.0;
    if (policy.mode != IndexPolicy::Mode::mass_threshold) {
        if (policy.mode == IndexPolicy::Mode::support_box) {
            if (!f.support_box)
                throw std::invalid_argument(
                    "build_mixture: support_box policy needs a density with a "
                    "support box");
            table.n_max.resize(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j)
                table.n_max[static_cast<std::size_t>(j)] =
                    static_cast<std::int64_t>(std::floor(
                        n * (*f.support_box)[static_cast<std::size_t>(j)])) +
                    1;
        } else {
            if (policy.box_N < 1)
                throw std::invalid_argument(
                    "build_mixture: fixed_box policy needs box_N >= 1");
            table.n_max.assign(static_cast<std::size_t>(d), policy.box_N);
        }
        ShapeIndex m(static_cast<std::size_t>(d), 1);
        while (true) {
            const double a = mass_of(m);
            table.masses[m] = a;
            captured += a;
            int j = 0;
            for (; j < d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (++m[ju] <= table.n_max[ju]) break;
                m[ju] = 1;
            }
            if (j == d) break;
        }
    } else {
        // expanding cubes F_N: add the shell max_j(m_j) = N each round
        std::int64_t N = 0;
        while (captured < 1.0 - policy.residual_tol) {
            ++N;
            if (N > policy.max_index)
                throw EnumerationCapError(
                    "build_mixture: enumeration cap reached with residual " +
                        std::to_string(1.0 - captured),
                    1.0 - captured);
            // enumerate the shell of the cube [1,N]^d
            ShapeIndex m(static_cast<std::size_t>(d), 1);
            while (true) {
                bool on_shell = false;
                for (int j = 0; j < d; ++j)
                    if (m[static_cast<std::size_t>(j)] == N) on_shell = true;
                if (on_shell) {
                    const double a = mass_of(m);
                    table.masses[m] = a;
                    captured += a;
                }
                int j = 0;
                for (; j < d; ++j) {
                    const auto ju = static_cast<std::size_t>(j);
                    if (++m[ju] <= N) break;
                    m[ju] = 1;
                }
                if (j == d) break;
            }
        }
        table.n_max.assign(static_cast<std::size_t>(d), N);
    }

    double residual = 1.0 - captured;
    if (residual < -1e-10)
        throw std::runtime_error("build_mixture: captured mass exceeds 1");
    residual = std::max(residual, 0.0);
    table.residual = residual;

    ErlangMixture g;
    g.d = d;
    g.n = n;
    g.residual = residual;
    for (const auto& [m, w] : table.masses)
        if (w > 0.0) g.components.emplace_back(m, w);
    g.validate();
    return BuildResult{std::move(g), std::move(table)};
}

McResult mc_oracle(const std::function<double(std::span<const double>)>& h,
                   int d, int n, std::span<const double> x,
                   std::int64_t samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("mc_oracle: samples < 1");
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("mc_oracle: dimension mismatch");
    const std::int64_t nblocks = (samples + par::kBlock - 1) / par::kBlock;
    std::vector<double> bsum(static_cast<std::size_t>(nblocks), 0.0);
    std::vector<double> bsq(static_cast<std::size_t>(nblocks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * par::kBlock;
        const std::int64_t hi = std::min(samples, lo + par::kBlock);
        double s = 0.0, sq = 0.0;
        std::vector<double> y(static_cast<std::size_t>(d));
        for (std::int64_t i = lo; i < hi; ++i) {
            StreamRng rng(seed, static_cast<std::uint64_t>(i));
            for (int j = 0; j < d; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                const auto nj = rng.poisson(n * x[ju]);
                const double u = rng.uniform();
                y[ju] = (static_cast<double>(nj) + u) / n;
            }
            const double v = h(y);
            s += v;
            sq += v * v;
        }
        bsum[static_cast<std::size_t>(b)] = s;
        bsq[static_cast<std::size_t>(b)] = sq;
    }
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        sum += bsum[static_cast<std::size_t>(b)];
        sumsq += bsq[static_cast<std::size_t>(b)];
    }
    const double mean = sum / static_cast<double>(samples);
    double var = sumsq / static_cast<double>(samples) - mean * mean;
    var = std::max(var, 0.0);
    const double se =
        samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
    return McResult{mean, se};
}

McResult mc_oracle(const DensitySpec& f, int n, std::span<const double> x,
                   std::int64_t samples, std::uint64_t seed) {
    return mc_oracle(f.evaluate, f.d, n, x, samples, seed);
}

double DisplacementMoments::moment_bound(double r) const {
    if (!(r > 0.0) || r > 2.0)
        throw std::invalid_argument("moment_bound: r outside (0, 2]");
    return std::pow(1.0 + d / 3.0, r / 2.0) *
           std::pow((1.0 + norm1_x) / n, r / 2.0);
}

double DisplacementMoments::tail_bound(double eta) const {
    if (!(eta > 0.0)) throw std::invalid_argument("tail_bound: eta <= 0");
    return second_moment / (eta * eta);
}

DisplacementMoments displacement_moments(std::span<const double> x, int n, int d) {
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("displacement_moments: dimension mismatch");
    if (n < 1) throw std::invalid_argument("displacement_moments: n < 1");
    double s1 = 0.0;
    for (double v : x) s1 += std::abs(v);
    DisplacementMoments dm;
    dm.d = d;
    dm.n = n;
    dm.norm1_x = s1;
    dm.mean_shift = 1.0 / (2.0 * n);
    dm.second_moment = s1 / n + d / (3.0 * static_cast<double>(n) * n);
    return dm;
}

namespace {

constexpr int kMaxTouchard = 30;

// Stirling numbers of the second kind up to m = 30; values exceed 2^64 but
// fit in 128 bits.
const std::vector<std::vector<unsigned __int128>>& stirling_table() {
    static const auto table = [] {
        std::vector<std::vector<unsigned __int128>> s(kMaxTouchard + 1);
        s[0] = {1};
        for (int m = 1; m <= kMaxTouchard; ++m) {
            s[static_cast<std::size_t>(m)].assign(static_cast<std::size_t>(m) + 1, 0);
            for (int k = 1; k <= m; ++k) {
                const auto& prev = s[static_cast<std::size_t>(m - 1)];
                unsigned __int128 below =
                    k <= m - 1 ? prev[static_cast<std::size_t>(k)] : 0;
                s[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] =
                    static_cast<unsigned __int128>(k) * below +
                    prev[static_cast<std::size_t>(k - 1)];
            }
        }
        return s;
    }();
    return table;
}

double to_double(unsigned __int128 v) {
    return static_cast<double>(static_cast<long double>(v));
}

}  // namespace

double poisson_raw_moment(double lambda, int m) {
    if (m < 0 || m > kMaxTouchard)
        throw std::invalid_argument("poisson_raw_moment: m outside [0, 30]");
    if (lambda < 0.0)
        throw std::invalid_argument("poisson_raw_moment: lambda < 0");
    const auto& row = stirling_table()[static_cast<std::size_t>(m)];
    // Horner in lambda
    double acc = 0.0;
    for (int k = m; k >= 1; --k)
        acc = acc * lambda + to_double(row[static_cast<std::size_t>(k)]);
    acc *= lambda;
    if (m == 0) acc = 1.0;
    return acc;
}

double bell_number(int m) { return poisson_raw_moment(1.0, m); }

double weighted_moment_constant(double nu, int d) {
    if (nu < 0.0) throw std::invalid_argument("weighted_moment_constant: nu < 0");
    if (d < 1) throw std::invalid_argument("weighted_moment_constant: d < 1");
    if (nu == 0.0) return 1.0;
    const int m = static_cast<int>(std::ceil(nu));
    if (m > kMaxTouchard)
        throw std::invalid_argument("weighted_moment_constant: nu > 30");
    const double splitting =
        std::pow(2.0, m - 1) * std::pow(1.0 + static_cast<double>(d), m);
    const double base = splitting * (1.0 + bell_number(m));
    return std::pow(base, nu / static_cast<double>(m));
}

}  // namespace erlmix
