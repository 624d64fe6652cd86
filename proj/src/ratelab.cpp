#include "erlmix/ratelab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "erlmix/operator.hpp"

namespace erlmix {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T>
void require_increasing(const std::vector<T>& values, const char* what) {
    if (values.size() < 4)
        throw std::invalid_argument(std::string("rate study: need at least 4 ") +
                                    what + " values");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw std::invalid_argument(std::string("rate study: ") + what +
                                        " values must be strictly increasing");
}

double effective_alpha(const DensitySpec& f, const RateStudyConfig& cfg) {
    return f.holder ? f.holder->alpha : cfg.alpha;
}

void finish(RateStudy& study, double predicted, double window) {
    study.predicted_exponent = predicted;
    study.window = window;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : study.rows) {
        if (row.error > 0.0) pts.emplace_back(row.sweep_value, row.error);
        if (row.error > 0.0)
            study.max_ratio_C =
                std::max(study.max_ratio_C,
                         row.error / std::pow(row.sweep_value, predicted));
    }
    study.fit = fit_loglog(pts);
    study.slope_in_window =
        study.fit.valid && std::abs(study.fit.slope - predicted) <= window;
}

}  // namespace

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points) {
    FitResult fit;
    std::vector<std::pair<double, double>> logs;
    for (const auto& [x, y] : points)
        if (x > 0.0 && y > 0.0) logs.emplace_back(std::log(x), std::log(y));
    if (logs.size() < 2) return fit;
    const double m = static_cast<double>(logs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : logs) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double den = m * sxx - sx * sx;
    if (den <= 0.0) return fit;
    fit.slope = (m * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / m;
    const double ss_tot = syy - sy * sy / m;
    double ss_res = 0.0;
    for (const auto& [x, y] : logs) {
        const double r = y - (fit.intercept + fit.slope * x);
        ss_res += r * r;
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.valid = true;
    return fit;
}

RateStudy run_scale_sweep(const RateStudyConfig& cfg) {
    require_increasing(cfg.n_values, "n");
    const DensitySpec f = zoo_density(cfg.density, cfg.d, cfg.params);
    const double alpha = effective_alpha(f, cfg);

    // sampled seminorm shared across rows: one sampler, one caveat
    double seminorm = 0.0;
    bool sampled = false;
    if (cfg.norm.kind == NormSpec::Kind::weighted_sup && !f.holder) {
        SamplerSpec sampler;
        sampler.seed = cfg.seed;
        seminorm = holder_seminorm_estimate(f, cfg.norm.nu, alpha, sampler);
        sampled = true;
    }

    RateStudy study;
    for (int n : cfg.n_values) {
        Evaluator approx = [&f, n, &cfg](std::span<const double> x) {
            return operator_eval(f, n, x, cfg.operator_tail_tol);
        };
        RateRow row;
        row.sweep_value = static_cast<double>(n);
        row.components = 0;
        row.error = error_norm(f.evaluate, approx, cfg.d, cfg.norm);
        row.bound = 0.0;
        switch (cfg.norm.kind) {
            case NormSpec::Kind::sup_box:
                if (f.holder && f.sup_bound) {
                    row.bound = bound_compact_holder(f.holder->H, alpha,
                                                     cfg.norm.M, n, cfg.d,
                                                     *f.sup_bound);
                    row.note = "certified";
                }
                break;
            case NormSpec::Kind::weighted_sup:
                if (f.holder) {
                    row.bound =
                        bound_weighted_holder(f.holder->H, alpha, n, cfg.d);
                    row.note = "certified";
                } else if (sampled) {
                    row.bound =
                        bound_weighted_holder(seminorm, alpha, n, cfg.d);
                    row.note = "sampled_seminorm_lower_estimate";
                }
                break;
            case NormSpec::Kind::lp:
                break;
        }
        if (row.note == "certified" && row.error > row.bound)
            study.bound_respected = false;
        study.rows.push_back(std::move(row));
    }
    finish(study, -alpha / 2.0, cfg.slope_window);
    return study;
}

RateStudy run_component_sweep(const RateStudyConfig& cfg) {
    require_increasing(cfg.K_values, "K");
    const DensitySpec f = zoo_density(cfg.density, cfg.d, cfg.params);
    const double alpha = effective_alpha(f, cfg);

    double seminorm = 0.0;
    bool sampled = false;
    if (cfg.schedule != RateStudyConfig::ScheduleMode::compact && !f.holder) {
        SamplerSpec sampler;
        sampler.seed = cfg.seed;
        seminorm = holder_seminorm_estimate(f, cfg.norm.nu, alpha, sampler);
        sampled = true;
    }

    auto make_schedule = [&](std::int64_t K) {
        switch (cfg.schedule) {
            case RateStudyConfig::ScheduleMode::compact: {
                const double B_M =
                    cfg.B > 0.0 ? cfg.B : std::pow(cfg.M + 2.0, cfg.d);
                return schedule_compact(K, cfg.d, alpha, cfg.M, B_M, cfg.n0);
            }
            case RateStudyConfig::ScheduleMode::weighted_sup:
                return schedule_weighted_sup(K, cfg.d, alpha,
                                             cfg.B > 0.0 ? cfg.B : 1.0, cfg.n0);
            case RateStudyConfig::ScheduleMode::weighted_lp:
                return schedule_weighted_lp(K, cfg.d, alpha, cfg.p,
                                            cfg.B > 0.0 ? cfg.B : 1.0, cfg.n0);
        }
        throw std::invalid_argument("rate study: bad schedule mode");
    };

    RateStudy study;
    double predicted = 0.0;
    for (std::int64_t K : cfg.K_values) {
        RateRow row;
        row.sweep_value = static_cast<double>(K);
        Schedule sched;
        try {
            sched = make_schedule(K);
        } catch (const ScheduleError& e) {
            row.error = 0.0;
            row.bound = 0.0;
            row.components = 0;
            row.note = "skipped_K_below_K0_" + std::to_string(e.required_K0);
            study.rows.push_back(std::move(row));
            continue;
        }
        predicted = sched.predicted_exponent;

        IndexPolicy policy;
        policy.mode = IndexPolicy::Mode::fixed_box;
        policy.box_N = sched.N;
        const auto built = build_mixture(f, sched.nK, policy);

        TruncationPlan plan;
        plan.N = sched.N;
        plan.M = cfg.M;
        plan.nu = cfg.norm.nu;
        plan.p = cfg.p;
        plan.eta = cfg.norm.eta;
        switch (cfg.schedule) {
            case RateStudyConfig::ScheduleMode::compact:
                plan.mode = TruncationPlan::Mode::compact;
                break;
            case RateStudyConfig::ScheduleMode::weighted_sup:
                plan.mode = TruncationPlan::Mode::weighted_sup;
                break;
            case RateStudyConfig::ScheduleMode::weighted_lp:
                plan.mode = TruncationPlan::Mode::weighted_lp;
                break;
        }
        const auto trunc = truncate(built.table, plan);

        Evaluator approx = [&trunc](std::span<const double> x) {
            return mixture_pdf(trunc.mixture, x);
        };
        row.error = error_norm(f.evaluate, approx, cfg.d, cfg.norm);
        row.components = static_cast<std::int64_t>(trunc.mixture.components.size());
        row.bound = 0.0;
        if (cfg.schedule == RateStudyConfig::ScheduleMode::compact && f.holder &&
            f.sup_bound) {
            row.bound = bound_compact_holder(f.holder->H, alpha, cfg.M,
                                             sched.nK, cfg.d, *f.sup_bound) +
                        trunc.bound;
            row.note = "certified";
        } else if (f.holder) {
            row.bound = bound_weighted_holder(f.holder->H, alpha, sched.nK,
                                              cfg.d) +
                        trunc.bound;
            row.note = "certified";
        } else if (sampled) {
            row.bound =
                bound_weighted_holder(seminorm, alpha, sched.nK, cfg.d) +
                trunc.bound;
            row.note = "sampled_seminorm_lower_estimate";
        }
        if (row.note == "certified" && row.error > row.bound)
            study.bound_respected = false;
        study.rows.push_back(std::move(row));
    }
    finish(study, predicted, cfg.component_window);
    return study;
}

std::string RateStudy::csv(const std::string& sweep_var) const {
    std::string out = "sweep_var,value,error,bound,components\n";
    for (const auto& row : rows) {
        out += sweep_var;
        out += "," + fmt17(row.sweep_value);
        out += "," + fmt17(row.error);
        out += "," + fmt17(row.bound);
        out += "," + std::to_string(row.components);
        out += "\n";
    }
    return out;
}

nlohmann::json RateStudy::summary(const RateStudyConfig& cfg) const {
    const bool scale = cfg.mode == RateStudyConfig::Mode::scale_sweep;
    bool pass;
    if (scale) {
        pass = slope_in_window && bound_respected;
    } else if (cfg.require_slope_match) {
        pass = slope_in_window && bound_respected;
    } else {
        // one-sided: decay at least as fast as predicted, up to the window
        pass = fit.valid && fit.slope <= predicted_exponent + window &&
               bound_respected;
    }
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r{{"value", row.sweep_value},
                         {"error", row.error},
                         {"bound", row.bound},
                         {"components", row.components}};
        if (!row.note.empty()) r["note"] = row.note;
        rows_json.push_back(std::move(r));
    }
    return nlohmann::json{{"sweep_var", scale ? "n" : "K"},
                          {"density", cfg.density},
                          {"d", cfg.d},
                          {"slope", fit.valid ? fit.slope : 0.0},
                          {"intercept", fit.intercept},
                          {"r2", fit.r2},
                          {"fit_valid", fit.valid},
                          {"predicted_exponent", predicted_exponent},
                          {"window", window},
                          {"slope_in_window", slope_in_window},
                          {"bound_respected", bound_respected},
                          {"max_ratio_C", max_ratio_C},
                          {"pass", pass},
                          {"rows", std::move(rows_json)}};
}

}  // namespace erlmix
