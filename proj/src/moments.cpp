#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "fft_util.hpp"
#include "wmbo/error.hpp"
#include "wmbo/kernel.hpp"

namespace wmbo {

namespace {

constexpr double pi = std::numbers::pi;

double power(double x, int k)
{
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= x;
    return p;
}

// Inverse transform of xi_N^(2 ell) |xi|^(2m) exp(-|xi|^4) on the hyperplane z_N = 0,
// integrated against (z')^beta. The sum over the xi_N index is the z_N = 0 row of the
// full inverse DFT; the remaining N-1 axes go through FFTW.
double oracle_once(const MomentPattern& p, const GridSpec& grid)
{
    const int n = grid.n;
    const double L = grid.side_length;
    const double dxi = 2 * pi / L;
    const double dz = L / n;
    const int kcut = std::min(n / 2 - 1, static_cast<int>(std::ceil(5.5 / dxi)));
    const int d = p.dim - 1;  // transformed axes

    std::vector<int> beta(d, 0);
    for (std::size_t i = 0; i < p.beta.size(); ++i) beta[i] = p.beta[i];

    auto symbol = [&](double xi_perp2, double xi_n) {
        const double r2 = xi_perp2 + xi_n * xi_n;
        return power(xi_n * xi_n, p.ell) * power(r2, p.m) * std::exp(-r2 * r2);
    };
    auto marginal = [&](double xi_perp2) {
        double s = 0.0;
        for (int k = -kcut; k <= kcut; ++k) s += symbol(xi_perp2, k * dxi);
        return s * dxi / (2 * pi);
    };
    auto wrap = [n](int k) { return k < 0 ? k + n : k; };
    auto z_of = [n, dz](int j) { return (j < n / 2 ? j : j - n) * dz; };

    if (d == 1) {
        detail::FftwBuffer<std::complex<double>> buf(n);
        for (int j = 0; j < n; ++j) buf[j] = 0.0;
        for (int k = -kcut; k <= kcut; ++k) buf[wrap(k)] = marginal(k * dxi * k * dxi);
        detail::FftwPlan plan;
        {
            std::lock_guard lock(detail::fftw_planner_mutex());
            plan = detail::FftwPlan(fftw_plan_dft_1d(n, detail::as_fftw(buf.data),
                                                     detail::as_fftw(buf.data), FFTW_BACKWARD,
                                                     FFTW_ESTIMATE));
        }
        plan.execute();
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += power(z_of(j), beta[0]) * buf[j].real();
        return acc * dz * dxi / (2 * pi);
    }
    if (d == 2) {
        detail::FftwBuffer<std::complex<double>> buf(static_cast<std::size_t>(n) * n);
        for (std::size_t i = 0; i < buf.count; ++i) buf[i] = 0.0;
        for (int k1 = -kcut; k1 <= kcut; ++k1)
            for (int k2 = -kcut; k2 <= kcut; ++k2) {
                const double x1 = k1 * dxi, x2 = k2 * dxi;
                buf[static_cast<std::size_t>(wrap(k1)) * n + wrap(k2)] = marginal(x1 * x1 + x2 * x2);
            }
        detail::FftwPlan plan;
        {
            std::lock_guard lock(detail::fftw_planner_mutex());
            plan = detail::FftwPlan(fftw_plan_dft_2d(n, n, detail::as_fftw(buf.data),
                                                     detail::as_fftw(buf.data), FFTW_BACKWARD,
                                                     FFTW_ESTIMATE));
        }
        plan.execute();
        double acc = 0.0;
        for (int j1 = 0; j1 < n; ++j1) {
            const double w1 = power(z_of(j1), beta[0]);
            if (w1 == 0.0) continue;
            double row = 0.0;
            for (int j2 = 0; j2 < n; ++j2)
                row += power(z_of(j2), beta[1]) * buf[static_cast<std::size_t>(j1) * n + j2].real();
            acc += w1 * row;
        }
        const double c = dxi / (2 * pi);
        return acc * dz * dz * c * c;
    }
    throw RangeError("moment_oracle supports dim 2 and 3");
}

}  // namespace

GridSpec default_moment_grid() { return GridSpec{128.0, 1024}; }

double moment_oracle(const MomentPattern& p, const GridSpec& grid)
{
    if (p.dim != 2 && p.dim != 3) throw RangeError("moment_oracle supports dim 2 and 3");
    if (static_cast<int>(p.beta.size()) > p.dim - 1)
        throw RangeError("beta has more entries than dim - 1");
    for (int b : p.beta)
        if (b < 0) throw RangeError("negative exponent");
    if (p.ell < 0 || p.m < 0) throw RangeError("ell and m must be >= 0");
    if (!(grid.side_length >= 30.0) || grid.n < 1024 || !is_power_of_two(grid.n))
        throw RangeError("moment grid needs L >= 30 and n >= 1024 (power of two)");

    const double coarse = oracle_once(p, grid);
    const double fine = oracle_once(p, GridSpec{grid.side_length, 2 * grid.n});
    const double scale = std::max(std::abs(fine), 1.0 / (2 * pi) * l_moment(0));
    if (std::abs(fine - coarse) > 1e-5 * scale) {
        std::ostringstream os;
        os << "moment oracle not resolved: n=" << grid.n << " gives " << coarse << ", n="
           << 2 * grid.n << " gives " << fine;
        throw RangeError(os.str());
    }
    return fine;
}

}  // namespace wmbo
