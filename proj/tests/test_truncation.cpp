#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "erlmix/rng.hpp"
#include "erlmix/truncation.hpp"

using namespace erlmix;

TEST_CASE("compact bound closed-form value") {
    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::compact;
    plan.N = 4;
    plan.M = 1.0;
    const double v = truncation_bound(plan, 2, 1);
    const double want = (16.0 / 6.0) * std::exp(-2.0);
    CHECK(v == doctest::Approx(want).epsilon(1e-13));
    CHECK(want == doctest::Approx(0.360894).epsilon(1e-5));
}

TEST_CASE("compact bound matches long-double oracle at larger N") {
    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::compact;
    plan.N = 75;
    plan.M = 1.0;
    const double v = truncation_bound(plan, 50, 1);
    const long double l = std::log(2.0L) + std::log(50.0L) - 50.0L +
                          75.0L * std::log(50.0L) - std::lgamma(76.0L);
    CHECK(v == doctest::Approx(static_cast<double>(std::exp(l))).epsilon(1e-12));
}

TEST_CASE("weighted bounds") {
    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::weighted_sup;
    plan.N = 8;
    CHECK(truncation_bound(plan, 3, 2) == doctest::Approx(6.0).epsilon(1e-13));

    plan.mode = TruncationPlan::Mode::weighted_lp;
    plan.p = 2.0;
    plan.N = 8;
    CHECK(truncation_bound(plan, 3, 2) ==
          doctest::Approx(2.0 * 3.0 * std::pow(9.0, -0.25)).epsilon(1e-13));
    plan.p = 1.0;
    CHECK_THROWS(truncation_bound(plan, 3, 2));

    plan.mode = TruncationPlan::Mode::generic_lp;
    CHECK_THROWS(truncation_bound(plan, 3, 2));
}

TEST_CASE("truncation of a fully interior mixture is the identity") {
    const auto u = zoo_density("uniform_box", 1);
    const auto built = build_mixture(u, 4);
    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::compact;
    plan.N = 5;
    plan.M = 1.0;
    const auto res = truncate(built.table, plan);
    CHECK(res.tail_mass == doctest::Approx(0.0));
    REQUIRE(res.mixture.components.size() == built.mixture.components.size());
    for (std::size_t i = 0; i < res.mixture.components.size(); ++i) {
        CHECK(res.mixture.components[i].first ==
              built.mixture.components[i].first);
        CHECK(res.mixture.components[i].second ==
              doctest::Approx(built.mixture.components[i].second));
    }
}

TEST_CASE("relocation and mass accounting") {
    const auto e = zoo_density("product_exponential", 1);
    IndexPolicy ip;
    ip.mode = IndexPolicy::Mode::fixed_box;
    ip.box_N = 20;
    const auto built = build_mixture(e, 2, ip);

    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::weighted_sup;
    plan.N = 8;
    const auto corner = truncate(built.table, plan);
    CHECK(corner.mixture.components.size() <= 9);
    double sum = corner.mixture.residual;
    double corner_w = 0.0;
    for (const auto& [m, w] : corner.mixture.components) {
        sum += w;
        if (m[0] == 9) corner_w = w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(corner_w == doctest::Approx(corner.tail_mass).epsilon(1e-12));

    plan.relocation = TruncationPlan::Relocation::origin;
    const auto origin = truncate(built.table, plan);
    double first_w = 0.0;
    for (const auto& [m, w] : origin.mixture.components)
        if (m[0] == 1) first_w = w;
    // first cell mass plus the relocated tail
    CHECK(first_w == doctest::Approx((1.0 - std::exp(-0.5)) + origin.tail_mass)
                         .epsilon(1e-12));
}

TEST_CASE("preconditions") {
    const auto e = zoo_density("product_exponential", 1);
    IndexPolicy ip;
    ip.mode = IndexPolicy::Mode::fixed_box;
    ip.box_N = 6;
    const auto built = build_mixture(e, 2, ip);

    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::weighted_sup;
    plan.N = 10;  // beyond coverage
    CHECK_THROWS(truncate(built.table, plan));

    plan.N = 5;
    plan.mode = TruncationPlan::Mode::compact;
    plan.M = 3.0;  // nM = 6 > N
    CHECK_THROWS(truncate(built.table, plan));
}

TEST_CASE("generic lp bound uses the measured tail") {
    const auto e = zoo_density("product_exponential", 1);
    IndexPolicy ip;
    ip.mode = IndexPolicy::Mode::fixed_box;
    ip.box_N = 12;
    const auto built = build_mixture(e, 2, ip);
    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::generic_lp;
    plan.N = 6;
    plan.p = 2.0;
    const auto res = truncate(built.table, plan);
    const double tail = std::exp(-3.0);  // P(X > 6/2)
    CHECK(res.tail_mass == doctest::Approx(tail).epsilon(1e-12));
    CHECK(res.bound ==
          doctest::Approx(2.0 * std::sqrt(2.0) * tail).epsilon(1e-12));
}

TEST_CASE("compact schedule arithmetic") {
    const auto s = schedule_compact(48, 1, 1.0, 1.0, 3.0, 2);
    CHECK(s.nK == 16);
    CHECK(s.N == 32);
    CHECK(s.K0 == 12);
    CHECK(s.predicted_exponent == doctest::Approx(-0.5));

    CHECK_THROWS_AS(schedule_compact(11, 1, 1.0, 1.0, 3.0, 2), ScheduleError);
    try {
        schedule_compact(11, 1, 1.0, 1.0, 3.0, 2);
    } catch (const ScheduleError& err) {
        CHECK(err.required_K0 == 12);
    }
}

TEST_CASE("component count stays within budget") {
    StreamRng rng(21, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::int64_t K =
            12 + static_cast<std::int64_t>(5000.0 * rng.uniform());
        const auto s = schedule_compact(K, 1, 1.0, 1.0, 3.0, 2);
        CHECK(static_cast<double>(s.N) + 1.0 <= static_cast<double>(K));
    }
}

TEST_CASE("weighted sup schedule") {
    // d=1, alpha=1: growth 3, exponent -1/6
    const auto s = schedule_weighted_sup(2000, 1, 1.0, 2.0, 2);
    CHECK(s.predicted_exponent == doctest::Approx(-1.0 / 6.0));
    CHECK(s.K0 == static_cast<std::int64_t>(std::ceil(2.0 * 64.0)));
    CHECK(s.nK >= 9);
    CHECK(s.nK <= 10);
    CHECK(s.N == static_cast<std::int64_t>(s.nK) * s.nK * s.nK);
    CHECK(s.N + 1 <= 2000);
}

TEST_CASE("weighted lp schedule") {
    // d=1, alpha=1, p=2: gamma = 4, exponent -1/8
    const auto s = schedule_weighted_lp(100000, 1, 1.0, 2.0, 1.0, 2);
    CHECK(s.predicted_exponent == doctest::Approx(-1.0 / 8.0));
    // p=2, d=2, alpha=1/2: gamma = 5; N at n=3 is 3^5 = 243
    // (K must exceed the emitted count 243^2 + 1 for n=3 to survive)
    const auto t = schedule_weighted_lp(118098, 2, 0.5, 2.0, 1.0, 1);
    CHECK(t.nK == 3);
    CHECK(t.N == 243);
    CHECK(t.predicted_exponent == doctest::Approx(-0.5 / (2.0 * 2.0 * 5.0)));
}

TEST_CASE("measured truncation gap below certified bound") {
    // weighted-sup: drop the tail of the Exp(1) mixture and compare suprema
    const auto e = zoo_density("product_exponential", 1);
    IndexPolicy ip;
    ip.mode = IndexPolicy::Mode::fixed_box;
    ip.box_N = 40;
    const auto built = build_mixture(e, 2, ip);
    TruncationPlan plan;
    plan.mode = TruncationPlan::Mode::weighted_sup;
    plan.N = 8;
    const auto res = truncate(built.table, plan);
    double gap = 0.0;
    for (double x = 0.0; x <= 30.0; x += 0.01) {
        const std::vector<double> pt{x};
        gap = std::max(gap, std::abs(mixture_pdf(built.mixture, pt) -
                                     mixture_pdf(res.mixture, pt)));
    }
    CHECK(gap <= res.bound);
}
