#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wmbo/error.hpp"
#include "wmbo/kernel.hpp"

using namespace wmbo;

namespace {

constexpr double pi = std::numbers::pi;
// 25-digit reference values (mpmath)
constexpr double kGamma14 = 3.62560990822190831193;
constexpr double kGamma34 = 1.22541670246517764513;
constexpr double kR1Plus = 3.45346412836242156189;

double rel(double a, double b) { return std::abs(a / b - 1); }

}  // namespace

TEST_CASE("series coefficients")
{
    CHECK(rel(series_coeff(1, 0), kGamma14 / (4 * pi)) < 1e-14);
    // Gamma(5/4)/pi route
    CHECK(rel(series_coeff(1, 0), 0.25 * kGamma14 / pi) < 1e-14);
    CHECK(rel(series_coeff(2, 0), 1 / (8 * std::sqrt(pi))) < 1e-14);
    for (int N : {1, 2, 3, 5})
        for (int l : {0, 1, 7, 40, 80}) {
            CHECK(series_coeff(N, l) >= 0.0);
            CHECK(rel(series_coeff(N, l + 1) / series_coeff(N, l), series_ratio(N, l)) < 1e-12);
        }
    // double range ends near l = 100
    CHECK(series_coeff(1, 90) > 0.0);
    CHECK(series_coeff(1, 200) == 0.0);
}

TEST_CASE("delta decreases so the valid radius grows")
{
    for (int N : {1, 2, 3})
        for (int n = 0; n < 300; ++n) REQUIRE(series_ratio(N, n + 1) < series_ratio(N, n));
    const auto a = make_kernel_series(1, 10), b = make_kernel_series(1, 40);
    CHECK(b.valid_radius > a.valid_radius);
    CHECK(a.coeffs.size() == 11);
    CHECK_THROWS_AS(make_kernel_series(1, 3), RangeError);
}

TEST_CASE("truncation error bounded by the next coefficient")
{
    for (int N : {1, 2}) {
        const int n = 20;
        const double vr = 1 / std::sqrt(series_ratio(N, n));
        for (double r : {0.5, 1.0, 0.9 * vr}) {
            const double err = std::abs(partial_sum(N, n, r) - radial_profile_quadrature(N, r));
            CHECK(err <= series_coeff(N, n) * std::pow(r, 2 * n) + 1e-13);
        }
    }
}

TEST_CASE("phi matches the quadrature oracle")
{
    CHECK(rel(phi(1, 0), kGamma14 / (4 * pi)) < 1e-14);
    CHECK(rel(radial_profile_quadrature(1, 0), kGamma14 / (4 * pi)) < 1e-10);
    CHECK(rel(radial_profile_quadrature(2, 0), 1 / (8 * std::sqrt(pi))) < 1e-10);
    for (double r : {0.5, 1.0, 2.0, 3.0}) CHECK(std::abs(phi(1, r) - radial_profile_quadrature(1, r)) < 1e-8);
    for (int N : {2, 3})
        for (double r : {0.3, 1.7, 4.0}) CHECK(std::abs(phi(N, r) - radial_profile_quadrature(N, r)) < 1e-9);
    CHECK(phi(1, 5.0) < 0.0);
}

TEST_CASE("large radius switches to quadrature")
{
    const auto near = phi_detail(1, 1.0);
    CHECK(near.method == EvalMethod::series);
    CHECK(near.terms % 2 == 0);
    const auto far = phi_detail(1, 25.0);
    CHECK(far.method == EvalMethod::quadrature);
    CHECK(std::abs(far.value) < 1e-6);
    CHECK_THROWS_AS(phi_detail(6, 40.0), RangeError);
    CHECK_THROWS_AS(phi(1, -1.0), RangeError);
}

TEST_CASE("psi")
{
    CHECK(psi(0.0) == 0.0);
    for (double r : {0.2, 1.0, 3.0, 6.0, 12.0}) CHECK(std::abs(psi(r) - psi_quadrature(r)) < 1e-9);
    CHECK(std::abs(psi(30.0) - 0.5) < 1e-9);
    const double rp = kernel_zeros(1).pairs[0].r_plus;
    CHECK(psi(rp) > 0.5522);
    CHECK(psi(rp) < 0.5523);
}

TEST_CASE("zeros interleave and sit on sign changes")
{
    const auto zt = kernel_zeros(4, 1e-10);
    REQUIRE(zt.pairs.size() == 4);
    CHECK(std::abs(zt.pairs[0].r_plus - kR1Plus) < 1e-9);
    double prev = 0.0;
    for (auto& p : zt.pairs) {
        CHECK(prev < p.r_plus);
        CHECK(p.r_plus < p.r_minus);
        prev = p.r_minus;
        CHECK(std::abs(phi(1, p.r_plus)) < 10 * zt.tol);
        CHECK(std::abs(phi(1, p.r_minus)) < 10 * zt.tol);
        CHECK(phi(1, 0.5 * (p.r_plus + p.r_minus)) < 0.0);
    }
    for (std::size_t k = 0; k + 1 < zt.pairs.size(); ++k) {
        CHECK(psi(zt.pairs[k + 1].r_plus) < psi(zt.pairs[k].r_plus));
        CHECK(psi(zt.pairs[k + 1].r_minus) > psi(zt.pairs[k].r_minus));
    }
    CHECK_THROWS(kernel_zeros(50));
}

TEST_CASE("derivative recurrence carries a factor 2 pi")
{
    const double h = 1e-4;
    for (int N : {1, 2})
        for (double r = 0.1; r <= 3.0; r += 0.1) {
            const double d = (phi(N, r + h) - phi(N, r - h)) / (2 * h);
            CHECK(std::abs(d + 2 * pi * r * phi(N + 2, r)) < 1e-6);
        }
}

TEST_CASE("Laplacian series against finite differences")
{
    const double h = 1e-3;
    for (int N : {1, 2, 3})
        for (double r = 0.2; r <= 2.0; r += 0.15) {
            const double f0 = phi(N, r), fp = phi(N, r + h), fm = phi(N, r - h);
            const double lap = (fp - 2 * f0 + fm) / (h * h) + (N - 1) / r * (fp - fm) / (2 * h);
            CHECK(std::abs(lap - laplacian_phi(N, 1, r)) < 1e-5);
        }
    CHECK(laplacian_phi(2, 0, 0.7) == doctest::Approx(phi(2, 0.7)).epsilon(1e-12));
}

TEST_CASE("sandwich between consecutive partial sums")
{
    for (int N : {1, 2, 3})
        for (int n = 2; n <= 30; n += 4) {
            const double vr = std::min(1 / std::sqrt(series_ratio(N, n)), 4.0);
            for (double r = 0.3; r <= vr; r += 0.3) {
                const double f = phi(N, r);
                CHECK(partial_sum(N, n - 1, r) <= f + 1e-13);
                CHECK(f <= partial_sum(N, n, r) + 1e-13);
            }
        }
}

TEST_CASE("decay envelope")
{
    for (double r = 0.0; r <= 20.0; r += 0.1) CHECK(std::abs(phi(1, r)) * std::exp(0.1 * std::pow(r, 4.0 / 3)) <= 1.0);
}

TEST_CASE("threshold combination")
{
    const double a = default_scale();
    CHECK(std::abs(18 * std::pow(a, 4) / 11 - 1) < 1e-15);
    CHECK(a == doctest::Approx(0.88415843).epsilon(1e-7));
    CHECK(threshold_combination(0.0, a) == 0.0);
    for (int k = 1; k <= 2000; ++k) REQUIRE(threshold_combination(40.0 * k / 2000, a) > 0.0);
    CHECK(std::abs(threshold_combination(200.0, a) - 0.5) < 1e-9);
}

TEST_CASE("L moments")
{
    CHECK(rel(l_moment(0), kGamma14 / 2) < 1e-14);
    CHECK(rel(l_moment(4), l_moment(0) / 4) < 1e-14);
    CHECK(rel(l_moment(8), 5 * l_moment(0) / 16) < 1e-14);
    CHECK(rel(l_moment(2), kGamma34 / 2) < 1e-14);
}

TEST_CASE("gamma constants")
{
    CHECK(rel(std::tgamma(0.25), kGamma14) < 1e-13);
    CHECK(rel(std::tgamma(0.75), kGamma34) < 1e-13);
    CHECK(rel(std::exp(std::lgamma(0.25)), kGamma14) < 1e-13);
}
