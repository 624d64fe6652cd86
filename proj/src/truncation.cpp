#include "erlmix/truncation.hpp"

#include <algorithm>
#include <cmath>

namespace erlmix {

namespace {

std::string formula_name(TruncationPlan::Mode mode) {
    switch (mode) {
        case TruncationPlan::Mode::compact:
            return "compact_tail_bound";
        case TruncationPlan::Mode::weighted_sup:
            return "weighted_sup_tail_bound";
        case TruncationPlan::Mode::weighted_lp:
            return "weighted_lp_tail_bound";
        case TruncationPlan::Mode::generic_lp:
            return "lp_residual_bound";
    }
    return "unknown";
}

}  // namespace

double truncation_bound(const TruncationPlan& plan, int n, int d) {
    const double nd = static_cast<double>(n);
    switch (plan.mode) {
        case TruncationPlan::Mode::compact: {
            if (!(plan.M > 0.0))
                throw std::invalid_argument("truncation_bound: M <= 0");
            const double nM = nd * plan.M;
            const double N = static_cast<double>(plan.N);
            // 2 n^d e^{-nM} (nM)^N / N!, assembled in log space
            const double log_val = std::log(2.0) + d * std::log(nd) - nM +
                                   N * std::log(nM) - std::lgamma(N + 1.0);
            return std::exp(log_val);
        }
        case TruncationPlan::Mode::weighted_sup:
            return 2.0 * std::pow(nd, d) /
                   std::sqrt(static_cast<double>(plan.N) + 1.0);
        case TruncationPlan::Mode::weighted_lp: {
            if (!(plan.p > 1.0))
                throw std::invalid_argument("truncation_bound: p <= 1");
            const double e = 1.0 - 1.0 / plan.p;
            return 2.0 * std::pow(nd, d * e) *
                   std::pow(static_cast<double>(plan.N) + 1.0, -e / 2.0);
        }
        case TruncationPlan::Mode::generic_lp:
            throw std::invalid_argument(
                "truncation_bound: generic_lp bound needs the tail mass; use "
                "truncate()");
    }
    throw std::invalid_argument("truncation_bound: bad mode");
}

TruncationResult truncate(const CellMassTable& table, const TruncationPlan& plan) {
    const int d = table.d;
    const int n = table.n;
    if (plan.N < 1) throw std::invalid_argument("truncate: N < 1");
    for (auto cov : table.n_max)
        if (cov < plan.N)
            throw std::invalid_argument(
                "truncate: table does not cover F_N (coverage " +
                std::to_string(cov) + " < N = " + std::to_string(plan.N) + ")");
    if (plan.mode == TruncationPlan::Mode::compact &&
        static_cast<double>(plan.N) < n * plan.M)
        throw std::invalid_argument("truncate: compact mode requires N >= nM");

    ShapeIndex target(static_cast<std::size_t>(d),
                      plan.relocation == TruncationPlan::Relocation::corner
                          ? plan.N + 1
                          : 1);

    double tail = table.residual;
    ErlangMixture g;
    g.d = d;
    g.n = n;
    g.residual = 0.0;
    double target_weight = 0.0;
    for (const auto& [m, w] : table.masses) {
        const bool inside =
            std::all_of(m.begin(), m.end(),
                        [&](std::int64_t mj) { return mj <= plan.N; });
        if (!inside) {
            tail += w;
        } else if (m == target) {
            target_weight += w;
        } else if (w > 0.0) {
            g.components.emplace_back(m, w);
        }
    }
    target_weight += tail;
    if (target_weight > 0.0) g.components.emplace_back(target, target_weight);
    std::sort(g.components.begin(), g.components.end());
    g.validate();

    double bound;
    if (plan.mode == TruncationPlan::Mode::generic_lp) {
        if (!(plan.p >= 1.0))
            throw std::invalid_argument("truncate: p < 1");
        bound = 2.0 * std::pow(static_cast<double>(n),
                               d * (1.0 - 1.0 / plan.p)) *
                tail;
    } else {
        bound = truncation_bound(plan, n, d);
    }
    return TruncationResult{std::move(g), bound, tail, formula_name(plan.mode)};
}

namespace {

// shrink n until the emitted component count N^d + 1 fits the budget
void fit_budget(Schedule& s, std::int64_t K, int d, double growth_exponent,
                double M_plus_1) {
    auto count_for = [&](int n) {
        std::int64_t N;
        if (M_plus_1 > 0.0)
            N = static_cast<std::int64_t>(std::ceil(n * M_plus_1));
        else
            N = static_cast<std::int64_t>(
                std::ceil(std::pow(static_cast<double>(n), growth_exponent)));
        N = std::max<std::int64_t>(N, 1);
        double count = std::pow(static_cast<double>(N), d) + 1.0;
        return std::pair<std::int64_t, double>(N, count);
    };
    while (s.nK > 1) {
        auto [N, count] = count_for(s.nK);
        if (count <= static_cast<double>(K)) {
            s.N = N;
            return;
        }
        --s.nK;
    }
    s.N = count_for(s.nK).first;
}

}  // namespace

Schedule schedule_compact(std::int64_t K, int d, double alpha, double M,
                          double B_M, int n0) {
    if (!(M > 0.0) || !(B_M > 0.0) || n0 < 1 || d < 1)
        throw std::invalid_argument("schedule_compact: bad parameters");
    Schedule s;
    s.K0 = static_cast<std::int64_t>(
        std::ceil(B_M * std::pow(2.0 * n0, d)));
    s.predicted_exponent = -alpha / (2.0 * d);
    if (K < s.K0)
        throw ScheduleError("schedule_compact: K below K0 = " +
                                std::to_string(s.K0),
                            s.K0);
    s.nK = static_cast<int>(
        std::floor(std::pow(static_cast<double>(K) / B_M, 1.0 / d)));
    s.nK = std::max(s.nK, 1);
    fit_budget(s, K, d, 0.0, M + 1.0);
    return s;
}

Schedule schedule_weighted_sup(std::int64_t K, int d, double alpha, double B,
                               int n0) {
    if (!(B > 0.0) || n0 < 1 || d < 1 || !(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("schedule_weighted_sup: bad parameters");
    const double growth = 2.0 * d + alpha;
    Schedule s;
    s.K0 = static_cast<std::int64_t>(
        std::ceil(B * std::pow(2.0 * n0, d * growth)));
    s.predicted_exponent = -alpha / (2.0 * d * growth);
    if (K < s.K0)
        throw ScheduleError("schedule_weighted_sup: K below K0 = " +
                                std::to_string(s.K0),
                            s.K0);
    s.nK = static_cast<int>(std::floor(
        std::pow(static_cast<double>(K) / B, 1.0 / (d * growth))));
    s.nK = std::max(s.nK, 1);
    fit_budget(s, K, d, growth, 0.0);
    return s;
}

Schedule schedule_weighted_lp(std::int64_t K, int d, double alpha, double p,
                              double B, int n0) {
    if (!(p > 1.0))
        throw std::invalid_argument("schedule_weighted_lp: p <= 1");
    if (!(B > 0.0) || n0 < 1 || d < 1 || !(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("schedule_weighted_lp: bad parameters");
    const double gamma = 2.0 * d + alpha * p / (p - 1.0);
    Schedule s;
    s.K0 = static_cast<std::int64_t>(
        std::ceil(B * std::pow(2.0 * n0, d * gamma)));
    s.predicted_exponent = -alpha / (2.0 * d * gamma);
    if (K < s.K0)
        throw ScheduleError("schedule_weighted_lp: K below K0 = " +
                                std::to_string(s.K0),
                            s.K0);
    s.nK = static_cast<int>(std::floor(
        std::pow(static_cast<double>(K) / B, 1.0 / (d * gamma))));
    s.nK = std::max(s.nK, 1);
    fit_budget(s, K, d, gamma, 0.0);
    return s;
}

}  // namespace erlmix
