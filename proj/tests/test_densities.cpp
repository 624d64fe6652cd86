#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "erlmix/densities.hpp"

using namespace erlmix;

TEST_CASE("zoo densities normalized") {
    for (const auto& name : zoo_names()) {
        CAPTURE(name);
        CHECK_NOTHROW(validate_density(zoo_density(name, 1)));
    }
    CHECK_NOTHROW(validate_density(zoo_density("uniform_box", 2)));
    CHECK_NOTHROW(validate_density(zoo_density("product_exponential", 2)));
    ZooParams bump;
    bump.alpha = 0.5;
    CHECK_NOTHROW(validate_density(zoo_density("holder_bump", 2, bump)));
}

TEST_CASE("unknown names and bad params rejected") {
    CHECK_THROWS(zoo_density("nope", 1));
    ZooParams p;
    p.M = -1.0;
    CHECK_THROWS(zoo_density("uniform_box", 1, p));
    ZooParams q;
    q.alpha = 1.5;
    CHECK_THROWS(zoo_density("holder_bump", 1, q));
    ZooParams r;
    r.rates = {1.0, 2.0};
    CHECK_THROWS(zoo_density("product_exponential", 3, r));
}

TEST_CASE("cell masses: closed forms") {
    const auto u = zoo_density("uniform_box", 1);
    CHECK(cell_mass(u, {{0.25}, {0.5}}) == doctest::Approx(0.25).epsilon(1e-14));

    const auto e = zoo_density("product_exponential", 1);
    for (int m = 1; m <= 6; ++m) {
        const double want = std::exp(-(m - 1.0)) - std::exp(-static_cast<double>(m));
        CHECK(cell_mass(e, {{m - 1.0}, {static_cast<double>(m)}}) ==
              doctest::Approx(want).epsilon(1e-13));
    }

    // d=2 covering of the uniform support sums to 1
    const auto u2 = zoo_density("uniform_box", 2);
    double total = 0.0;
    const int n = 3;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            total += cell_mass(
                u2, {{static_cast<double>(i) / n, static_cast<double>(j) / n},
                     {(i + 1.0) / n, (j + 1.0) / n}});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact and quadrature cell masses agree") {
    for (const char* name : {"product_exponential", "product_gamma_integer"}) {
        CAPTURE(name);
        auto f = zoo_density(name, 1);
        auto plain = f;
        plain.axis_integral = nullptr;
        plain.exact_cell_integral = nullptr;
        for (double lo : {0.0, 0.3, 0.55})
            CHECK(cell_mass(f, {{lo}, {lo + 0.2}}) ==
                  doctest::Approx(cell_mass(plain, {{lo}, {lo + 0.2}}))
                      .epsilon(1e-10));
    }
    // the Lipschitz bump is smooth enough away from the kink
    ZooParams zp;
    zp.alpha = 1.0;
    auto bump = zoo_density("holder_bump", 1, zp);
    auto plain_bump = bump;
    plain_bump.axis_integral = nullptr;
    CHECK(cell_mass(bump, {{0.1}, {0.3}}) ==
          doctest::Approx(cell_mass(plain_bump, {{0.1}, {0.3}})).epsilon(1e-10));
}

TEST_CASE("quadrature disagreement is flagged") {
    // step discontinuity inside the cell defeats fixed-order quadrature
    // (placed off-center so node symmetry cannot mask it)
    auto u = zoo_density("uniform_box", 1);
    u.axis_integral = nullptr;
    u.exact_cell_integral = nullptr;
    CHECK_THROWS(cell_mass(u, {{0.85}, {1.1}}));
    // the cusp of the sqrt bump likewise exceeds the disagreement tolerance
    ZooParams q;
    q.alpha = 0.5;
    auto cusp = zoo_density("holder_bump", 1, q);
    cusp.axis_integral = nullptr;
    CHECK_THROWS(cell_mass(cusp, {{0.4}, {0.6}}));
}

TEST_CASE("cell validation") {
    const auto u = zoo_density("uniform_box", 1);
    CHECK_THROWS(cell_mass(u, {{-0.1}, {0.2}}));
    CHECK_THROWS(cell_mass(u, {{0.5}, {0.5}}));
    CHECK_THROWS(cell_mass(u, {{0.0, 0.0}, {1.0, 1.0}}));
}

TEST_CASE("unnormalized densities rejected") {
    DensitySpec bad;
    bad.name = "double_exponential_mass";
    bad.d = 1;
    bad.evaluate = [](std::span<const double> x) {
        return 2.0 * std::exp(-x[0]);
    };
    bad.axis_integral = [](int, double lo, double hi) {
        return 2.0 * (std::exp(-lo) - std::exp(-hi));
    };
    CHECK_THROWS(validate_density(bad));
}

TEST_CASE("local modulus respects Holder metadata and is monotone in r") {
    ZooParams p;
    p.alpha = 1.0;
    const auto f = zoo_density("holder_bump", 1, p);
    const double H = f.holder->H;
    const double small = local_modulus(f, 1.0, 0.01, 401);
    CHECK(small <= H * 0.01 * (1.0 + 1e-9));
    CHECK(small > 0.0);
    const double larger = local_modulus(f, 1.0, 0.05, 401);
    CHECK(larger >= small);

    ZooParams q;
    q.alpha = 0.5;
    const auto g = zoo_density("holder_bump", 1, q);
    CHECK(local_modulus(g, 1.0, 0.01, 401) <=
          g.holder->H * std::sqrt(0.01) * (1.0 + 1e-9));
}

TEST_CASE("intrinsic modulus monotone in delta") {
    const auto f = zoo_density("product_exponential", 1);
    SamplerSpec s;
    s.pairs = 20000;
    const double a = intrinsic_modulus(f, 0.0, 0.05, s);
    const double b = intrinsic_modulus(f, 0.0, 0.2, s);
    CHECK(a >= 0.0);
    CHECK(b >= a);
}

TEST_CASE("seminorm estimate grows with the sample") {
    const auto f = zoo_density("product_exponential", 1);
    SamplerSpec small;
    small.pairs = 2000;
    SamplerSpec large;
    large.pairs = 20000;
    const double a = holder_seminorm_estimate(f, 0.0, 1.0, small);
    const double b = holder_seminorm_estimate(f, 0.0, 1.0, large);
    CHECK(b >= a);  // same substreams, larger prefix
    CHECK(a > 0.0);
}
