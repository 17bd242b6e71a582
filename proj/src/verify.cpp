#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wmbo/kernel.hpp"
#include "wmbo/validation.hpp"

namespace wmbo {

std::vector<CheckResult> verify_kernel()
{
    std::vector<CheckResult> out;
    auto bracket = [&](const char* name, double v, double lo, double hi) {
        out.push_back({name, v > lo && v < hi, v, hi, "open interval (" + std::to_string(lo) + ", "
                                                          + std::to_string(hi) + ")"});
    };

    const auto zt = kernel_zeros(3, 1e-10);
    const double rp = zt.pairs[0].r_plus, rm = zt.pairs[0].r_minus;
    bracket("r1_plus", rp, 3.453, 3.454);
    bracket("r1_minus", rm, 6.784, 6.785);
    bracket("psi_r1_plus", psi(rp), 0.5522, 0.5523);
    bracket("psi_r1_minus", psi(rm), 0.4938, 0.4939);
    out.push_back({"psi_r1_plus_over_3", psi(rp / 3) > 0.32584, psi(rp / 3), 0.32584, "lower bound"});
    // the same bound with the scale a in the argument, as it enters I(r)
    out.push_back({"psi_r1_plus_over_3a", psi(rp / (3 * default_scale())) > 0.32584,
                   psi(rp / (3 * default_scale())), 0.32584, "informational"});

    bool mono = true;
    for (std::size_t k = 0; k + 1 < zt.pairs.size(); ++k) {
        mono = mono && psi(zt.pairs[k + 1].r_plus) < psi(zt.pairs[k].r_plus);
        mono = mono && psi(zt.pairs[k + 1].r_minus) > psi(zt.pairs[k].r_minus);
    }
    out.push_back({"psi_at_zeros_monotone", mono, static_cast<double>(zt.pairs.size()), 0.0,
                   "Psi decreasing on r_k^+, increasing on r_k^-"});

    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0, 3.0})
        worst = std::max(worst, std::abs(phi(1, r) - radial_profile_quadrature(1, r)));
    out.push_back({"phi_vs_quadrature", worst < 1e-8, worst, 1e-8, "N=1 at r = 0.5, 1, 2, 3"});

    worst = 0.0;
    const double h = 1e-4;
    for (int N : {1, 2})
        for (int i = 1; i <= 30; ++i) {
            const double r = 0.1 * i;
            const double d = (phi(N, r + h) - phi(N, r - h)) / (2 * h);
            worst = std::max(worst, std::abs(d + 2 * std::numbers::pi * r * phi(N + 2, r)));
        }
    out.push_back({"derivative_recurrence", worst < 1e-6, worst, 1e-6, "phi_N' = -2 pi r phi_{N+2}, N=1,2"});

    worst = 0.0;
    const double hl = 1e-3;
    for (int N : {1, 2, 3})
        for (int i = 0; i <= 18; ++i) {
            const double r = 0.2 + 0.1 * i;
            const double f0 = phi(N, r), fp = phi(N, r + hl), fm = phi(N, r - hl);
            const double lap = (fp - 2 * f0 + fm) / (hl * hl) + (N - 1) / r * (fp - fm) / (2 * hl);
            worst = std::max(worst, std::abs(lap - laplacian_phi(N, 1, r)));
        }
    out.push_back({"laplacian_series", worst < 1e-5, worst, 1e-5, "m=1 on [0.2, 2]"});

    bool sandwich = true;
    for (int N : {1, 2, 3})
        for (int n = 2; n <= 40; n += 2) {
            const double vr = 1.0 / std::sqrt(series_ratio(N, n));
            for (double r = 0.25; r <= std::min(vr, 4.0); r += 0.25) {
                const double f = radial_profile_quadrature(N, r);
                sandwich = sandwich && partial_sum(N, n - 1, r) <= f + 1e-13
                        && f <= partial_sum(N, n, r) + 1e-13;
            }
        }
    out.push_back({"sandwich", sandwich, 0.0, 0.0, "Phi_{n-1} <= phi <= Phi_n, even n"});

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double mass = 0.0;
    for (int k = 0; k < 25; ++k) mass += GK::integrate([](double r) { return phi(1, r); }, k, k + 1.0, 4, 1e-12);
    out.push_back({"unit_mass", std::abs(2 * mass - 1) < 1e-6, std::abs(2 * mass - 1), 1e-6,
                   "2 * int_0^25 phi_1"});

    double env = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double r = 0.05 * i;
        env = std::max(env, std::abs(phi(1, r)) * std::exp(0.1 * std::pow(r, 4.0 / 3.0)));
    }
    out.push_back({"decay_envelope", env <= 1.0, env, 1.0, "|phi_1| exp(0.1 r^(4/3)) on [0, 20]"});

    const double a = default_scale();
    double imin = 1.0;
    for (int k = 1; k <= 10000; ++k) imin = std::min(imin, threshold_combination(40.0 * k / 10000, a));
    out.push_back({"combination_positive", imin > 0.0, imin, 0.0, "min I(r) over 1e4 samples of (0, 40]"});

    const double g14 = 3.62560990822190831193, g34 = 1.22541670246517764513;
    const double gerr = std::max(std::abs(std::tgamma(0.25) / g14 - 1), std::abs(std::tgamma(0.75) / g34 - 1));
    out.push_back({"gamma_constants", gerr < 1e-13, gerr, 1e-13, "Gamma(1/4), Gamma(3/4) relative"});
    return out;
}

}  // namespace wmbo
