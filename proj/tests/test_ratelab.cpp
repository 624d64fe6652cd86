#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "erlmix/ratelab.hpp"
#include "erlmix/rng.hpp"

using namespace erlmix;

TEST_CASE("loglog fit on an exact power law") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 4.0, 8.0, 16.0})
        pts.emplace_back(x, 3.0 * std::pow(x, -2.0));
    const auto fit = fit_loglog(pts);
    REQUIRE(fit.valid);
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("loglog fit on a constant") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 4.0, 8.0}) pts.emplace_back(x, 7.0);
    const auto fit = fit_loglog(pts);
    REQUIRE(fit.valid);
    CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("noisy power law recovered within 0.1") {
    StreamRng rng(77, 0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 8; ++i) {
        const double x = std::pow(2.0, i);
        const double noise = 0.9 + 0.2 * rng.uniform();
        pts.emplace_back(x, 5.0 * std::pow(x, -1.5) * noise);
    }
    const auto fit = fit_loglog(pts);
    REQUIRE(fit.valid);
    CHECK(std::abs(fit.slope - (-1.5)) <= 0.1);
}

TEST_CASE("degenerate fits are reported invalid") {
    CHECK_FALSE(fit_loglog({}).valid);
    CHECK_FALSE(fit_loglog({{1.0, 0.0}, {2.0, 0.0}, {4.0, 0.0}}).valid);
    CHECK_FALSE(fit_loglog({{2.0, 1.0}}).valid);
}

TEST_CASE("config validation") {
    RateStudyConfig cfg;
    cfg.n_values = {4, 8, 16};  // too few
    CHECK_THROWS(run_scale_sweep(cfg));
    cfg.n_values = {4, 8, 8, 16};  // not strictly increasing
    CHECK_THROWS(run_scale_sweep(cfg));
    RateStudyConfig comp;
    comp.mode = RateStudyConfig::Mode::component_sweep;
    comp.K_values = {48, 24, 96, 192};
    CHECK_THROWS(run_component_sweep(comp));
}

namespace {

RateStudyConfig small_scale_config() {
    RateStudyConfig cfg;
    cfg.density = "holder_bump";
    cfg.d = 1;
    cfg.params.alpha = 1.0;
    cfg.alpha = 1.0;
    cfg.n_values = {4, 8, 16, 32};
    cfg.norm.kind = NormSpec::Kind::sup_box;
    cfg.norm.M = 1.0;
    cfg.norm.grid = 101;
    return cfg;
}

}  // namespace

TEST_CASE("scale sweep: certified bounds hold and errors shrink") {
    const auto cfg = small_scale_config();
    const auto study = run_scale_sweep(cfg);
    REQUIRE(study.rows.size() == 4);
    CHECK(study.predicted_exponent == doctest::Approx(-0.5));
    for (const auto& row : study.rows) {
        CHECK(row.note == "certified");
        CHECK(row.error > 0.0);
        CHECK(row.error <= row.bound);
    }
    CHECK(study.bound_respected);
    REQUIRE(study.fit.valid);
    CHECK(study.fit.slope < 0.0);
    CHECK(study.rows.back().error < study.rows.front().error);
}

TEST_CASE("scale sweep determinism") {
    const auto cfg = small_scale_config();
    const auto a = run_scale_sweep(cfg);
    const auto b = run_scale_sweep(cfg);
    CHECK(a.csv("n") == b.csv("n"));
    CHECK(a.summary(cfg).dump() == b.summary(cfg).dump());
}

TEST_CASE("component sweep: budget respected, low K skipped") {
    RateStudyConfig cfg;
    cfg.density = "holder_bump";
    cfg.d = 1;
    cfg.params.alpha = 1.0;
    cfg.alpha = 1.0;
    cfg.mode = RateStudyConfig::Mode::component_sweep;
    cfg.schedule = RateStudyConfig::ScheduleMode::compact;
    cfg.M = 1.0;
    cfg.B = 3.0;
    cfg.n0 = 2;
    cfg.K_values = {4, 12, 24, 48, 96};
    cfg.norm.kind = NormSpec::Kind::sup_box;
    cfg.norm.M = 1.0;
    cfg.norm.grid = 101;
    const auto study = run_component_sweep(cfg);
    REQUIRE(study.rows.size() == 5);
    CHECK(study.rows[0].note.rfind("skipped_K_below_K0", 0) == 0);
    CHECK(study.rows[0].components == 0);
    for (std::size_t i = 1; i < study.rows.size(); ++i) {
        const auto& row = study.rows[i];
        CHECK(row.components <=
              static_cast<std::int64_t>(row.sweep_value));
        CHECK(row.error > 0.0);
        CHECK(row.error <= row.bound);
    }
    CHECK(study.predicted_exponent == doctest::Approx(-0.5));
    CHECK(study.max_ratio_C > 0.0);
    const auto summary = study.summary(cfg);
    CHECK(summary.at("sweep_var").get<std::string>() == "K");
    CHECK(summary.at("pass").get<bool>());
}

TEST_CASE("csv shape") {
    const auto cfg = small_scale_config();
    const auto study = run_scale_sweep(cfg);
    const auto csv = study.csv("n");
    CHECK(csv.rfind("sweep_var,value,error,bound,components\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("n,4,") != std::string::npos);
}
