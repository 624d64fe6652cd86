#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "erlmix/kernels.hpp"
#include "erlmix/quadrature.hpp"

using namespace erlmix;

TEST_CASE("log pdf closed-form values") {
    CHECK(erlang_log_pdf({1, 2.0}, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(erlang_log_pdf({2, 1.0}, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(erlang_log_pdf({3, 2.0}, 1.0) ==
          doctest::Approx(std::log(4.0) - 2.0).epsilon(1e-14));
    CHECK(std::isinf(erlang_log_pdf({2, 1.0}, 0.0)));
}

TEST_CASE("pdf values and direct-form agreement") {
    CHECK(erlang_pdf({1, 2.0}, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(erlang_pdf({2, 1.0}, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // m=5, beta=4, x=1: beta (beta x)^{m-1} e^{-beta x} / (m-1)!
    const double direct = 4.0 * std::pow(4.0, 4) * std::exp(-4.0) / 24.0;
    CHECK(erlang_pdf({5, 4.0}, 1.0) == doctest::Approx(direct).epsilon(1e-13));

    for (std::int64_t m : {std::int64_t{1}, std::int64_t{2}, std::int64_t{7},
                           std::int64_t{15}})
        for (double x : {0.1, 0.7, 2.0, 6.3}) {
            const double d =
                std::pow(x, static_cast<double>(m - 1)) * std::exp(-x) /
                std::tgamma(static_cast<double>(m));
            CHECK(erlang_pdf({m, 1.0}, x) == doctest::Approx(d).epsilon(1e-12));
        }
}

TEST_CASE("pdf domain errors") {
    CHECK_THROWS(ErlangParams(0, 1.0));
    CHECK_THROWS(ErlangParams(1, 0.0));
    CHECK_THROWS(erlang_pdf({1, 1.0}, -0.5));
}

TEST_CASE("product kernel") {
    std::vector<std::int64_t> m{1, 1};
    std::vector<double> x{0.0, 0.0};
    CHECK(product_kernel_pdf(m, 3, x) == doctest::Approx(9.0).epsilon(1e-14));

    std::vector<std::int64_t> m1{4};
    std::vector<double> x1{0.8};
    CHECK(product_kernel_pdf(m1, 2, x1) ==
          doctest::Approx(erlang_pdf({4, 2.0}, 0.8)).epsilon(1e-13));

    std::vector<std::int64_t> m2{2, 3};
    std::vector<double> x2{0.5, 1.0};
    CHECK(product_kernel_pdf(m2, 2, x2) ==
          doctest::Approx(erlang_pdf({2, 2.0}, 0.5) *
                          erlang_pdf({3, 2.0}, 1.0)).epsilon(1e-13));

    std::vector<std::int64_t> bad{1};
    CHECK_THROWS(product_kernel_pdf(bad, 2, x2));
}

TEST_CASE("sup norm exact and envelope") {
    CHECK(erlang_sup_norm_exact(1, 7) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(erlang_sup_norm_exact(2, 1) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(erlang_sup_norm_bound(1, 5) == doctest::Approx(5.0));
    CHECK(erlang_sup_norm_bound(4, 2) == doctest::Approx(1.0));
    CHECK(erlang_sup_norm_bound(100, 10) == doctest::Approx(1.0));

    for (int n : {1, 2, 4, 8})
        for (std::int64_t m = 1; m <= 10000; ++m) {
            REQUIRE(erlang_sup_norm_exact(m, n) <=
                    erlang_sup_norm_bound(m, n) * (1.0 + 1e-12));
        }
}

TEST_CASE("sup norm is attained nowhere above the mode value") {
    for (std::int64_t m : {std::int64_t{1}, std::int64_t{3}, std::int64_t{12}})
        for (int n : {1, 4}) {
            const double sup = erlang_sup_norm_exact(m, n);
            for (double x = 0.0; x <= 10.0; x += 0.01)
                REQUIRE(erlang_pdf({m, static_cast<double>(n)}, x) <=
                        sup * (1.0 + 1e-12));
            CHECK(sup <= static_cast<double>(n) * (1.0 + 1e-12));
        }
}

TEST_CASE("lp norm bounds") {
    CHECK(erlang_lp_norm_bound(1, 4, 2.0) == doctest::Approx(2.0));
    CHECK(erlang_lp_norm_bound(17, 3, 1.0) == doctest::Approx(1.0));
    CHECK(erlang_lp_norm_bound(9, 3, 3.0) ==
          doctest::Approx(std::pow(3.0, 2.0 / 3.0) * std::pow(9.0, -1.0 / 3.0)));
}

TEST_CASE("unit mass by quadrature") {
    for (std::int64_t m : {std::int64_t{1}, std::int64_t{3}, std::int64_t{10},
                           std::int64_t{100}})
        for (int n : {1, 4}) {
            const double upper =
                (static_cast<double>(m) + 40.0 * std::sqrt(static_cast<double>(m))) / n;
            const int panels = 200;
            double total = 0.0;
            for (int k = 0; k < panels; ++k) {
                const double a = upper * k / panels;
                const double b = upper * (k + 1) / panels;
                total += integrate_1d(
                    [&](double x) {
                        return erlang_pdf({m, static_cast<double>(n)}, x);
                    },
                    a, b, 12);
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
}

TEST_CASE("cdf closed forms, monotonicity, complement") {
    CHECK(erlang_cdf({1, 1.0}, 100.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(erlang_cdf({1, 2.0}, 0.5) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(erlang_cdf({2, 1.0}, 1.0) ==
          doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(erlang_cdf({3, 2.0}, 0.0) == doctest::Approx(0.0));

    for (std::int64_t m : {std::int64_t{1}, std::int64_t{4}, std::int64_t{25}}) {
        double prev = -1.0;
        for (double x = 0.0; x <= 40.0; x += 0.25) {
            const double c = erlang_cdf({m, 1.0}, x);
            REQUIRE(c >= prev);
            REQUIRE(c >= 0.0);
            REQUIRE(c <= 1.0);
            REQUIRE(c + erlang_sf({m, 1.0}, x) ==
                    doctest::Approx(1.0).epsilon(1e-12));
            prev = c;
        }
    }
}

TEST_CASE("cdf large-shape stability") {
    // far-tail survival stays meaningful instead of collapsing to 0 or 1
    const ErlangParams big{1000000, 1.0};
    const double at_mean = erlang_cdf(big, 1.0e6);
    CHECK(at_mean > 0.3);
    CHECK(at_mean < 0.7);
    CHECK(erlang_sf(big, 2.0e6) < 1e-10);
    CHECK(erlang_cdf(big, 0.5e6) < 1e-10);
}
