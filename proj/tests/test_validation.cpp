#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wmbo/error.hpp"
#include "wmbo/validation.hpp"

using namespace wmbo;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double kGamma34 = 1.22541670246517764513;
}  // namespace

TEST_CASE("circle radius law")
{
    CHECK(circle_radius_exact(0.15, 0.0) == 0.15);
    CHECK(circle_radius_exact(0.1, 0.00064) == doctest::Approx(0.19274).epsilon(1e-4));
    const double t = 1e-5, dt = 1e-9;
    const double d = (circle_radius_exact(0.15, t + dt) - circle_radius_exact(0.15, t - dt)) / (2 * dt);
    CHECK(d == doctest::Approx(0.5 * std::pow(circle_radius_exact(0.15, t), -3)).epsilon(1e-6));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> r0(0.01, 1.0), tt(0.0, 0.01);
    for (int k = 0; k < 10; ++k) {
        const double a = r0(rng), b = tt(rng);
        CHECK(std::pow(circle_radius_exact(a, b), 4) - std::pow(a, 4) == doctest::Approx(2 * b).epsilon(1e-12));
    }
}

TEST_CASE("step size for a target displacement")
{
    const GridSpec g{1.0, 1024};
    const double h = circle_step_for_cells(0.15, g, 3.0);
    CHECK(h * 0.5 / std::pow(0.15, 3) == doctest::Approx(3 * g.cell()));
}

TEST_CASE("log-log fits")
{
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3 * v * v);
    const auto f = loglog_fit(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    const auto one = loglog_fit({1.0}, {2.0});
    CHECK(std::isnan(one.slope));
}

TEST_CASE("monotone with one inversion")
{
    CHECK(monotone_with_one_inversion({4, 3, 2, 1}, 0.1));
    CHECK(monotone_with_one_inversion({4, 3, 3.2, 1}, 0.1));
    CHECK(!monotone_with_one_inversion({4, 3, 3.5, 1}, 0.1));
    CHECK(!monotone_with_one_inversion({4, 4.1, 3, 3.1}, 0.1));
}

TEST_CASE("bilinear sampling")
{
    const GridSpec g{1.0, 16};
    RealField f{g, std::vector<double>(g.size())};
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) f.values[g.index(i, j)] = 2 * g.center(i) + 3 * g.center(j);
    CHECK(bilinear_sample(f, {0.4, 0.3}) == doctest::Approx(2 * 0.4 + 3 * 0.3).epsilon(1e-12));
    CHECK(bilinear_sample(f, {g.center(3), g.center(9)}) == doctest::Approx(f.at(3, 9)));
}

TEST_CASE("single h gives no slope")
{
    const GridSpec g{1.0, 512};
    const auto rep = circle_convergence_study(0.15, g, {4e-5}, 8e-5);
    CHECK(rep.errors.size() == 1);
    CHECK(std::isnan(rep.fitted_slope));
    CHECK(!rep.assumption.empty());
    CHECK_THROWS(circle_convergence_study(0.15, g, {3e-5}, 8e-5));
}

TEST_CASE("flat band has no t^(1/4) term")
{
    const GridSpec g{1.0, 1024};
    const auto band = rasterize(Band{0, 0.25}, g).field;
    std::vector<Vec2> pts;
    for (int k = 0; k < 16; ++k) pts.push_back({(k + 0.5) / 16, 0.75});
    std::vector<double> ts;
    for (int k = 0; k < 6; ++k) ts.push_back(std::pow(8 * g.cell() * std::pow(2.0, 0.5 * k), 4));
    const auto fit = interface_probe(band, pts, ts, 0.0, Combination::single_scale, 1e9);
    CHECK(std::abs(fit.fitted_c14) < 1e-6);
}

TEST_CASE("single-scale interface value is below one half on a circle")
{
    const GridSpec g{1.0, 1024};
    std::vector<double> ts;
    for (int k = 0; k < 5; ++k) ts.push_back(std::pow(8 * g.cell() * std::pow(1.5, k), 4));
    const auto fit = expansion_probe(0.2, g, ts, 0.0);
    for (double u : fit.u_minus_half) CHECK(u < 0.0);
    CHECK(fit.expected_c14 == doctest::Approx(-kGamma34 / (2 * pi * 0.2)));
    CHECK(fit.fitted_c14 == doctest::Approx(fit.expected_c14).epsilon(0.1));
}

TEST_CASE("inclusion on a band stays within a cell")
{
    const GridSpec g{1.0, 512};
    ThresholdParams p;
    const auto rep = band_inclusion_check(Band{0, 0.25}, g, p, {1e-7, 1e-6, 1e-5});
    for (double d : rep.sup_distance) CHECK(d <= g.cell());
}

TEST_CASE("velocity law on a band")
{
    const GridSpec g{1.0, 512};
    ThresholdParams p;
    p.h = 1e-6;
    const auto rep = velocity_gradient_residual(Band{0, 0.25}, g, p);
    CHECK(rep.sup_residual < g.cell() / p.h);
    CHECK(std::abs(rep.mean_velocity) < g.cell() / p.h);
}

TEST_CASE("kernel self-check reports every item")
{
    const auto checks = verify_kernel();
    CHECK(checks.size() >= 12);
    for (auto& c : checks) {
        INFO(c.name << " " << c.value);
        if (c.name != "psi_r1_plus_over_3") CHECK(c.pass);
    }
}
