#include "wmbo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "wmbo/error.hpp"

namespace wmbo {

namespace {

constexpr double pi = std::numbers::pi;

// exp(-xi^4) < 1e-300 beyond this point
constexpr double kXiMax = 5.5;

double log_coeff(int dim, int ell)
{
    const double N = dim;
    return std::lgamma(ell / 2.0 + N / 4.0) - (N + 1.0 + 2.0 * ell) * std::log(2.0)
         - (N / 2.0) * std::log(pi) - std::lgamma(ell + 1.0) - std::lgamma(ell + N / 2.0);
}

constexpr int kTableDims = 16;

// log b_{N,l} for small N, and log(b_{1,l} / (2l+1)) in slot 0
const std::vector<double>& log_table(int slot)
{
    static const auto tables = [] {
        std::vector<std::vector<double>> t(kTableDims + 1);
        for (int d = 0; d <= kTableDims; ++d)
            for (int l = 0; l <= kSeriesCap + 2; ++l)
                t[d].push_back(d == 0 ? log_coeff(1, l) - std::log(2.0 * l + 1.0) : log_coeff(d, l));
        return t;
    }();
    return tables[slot];
}

double cached_log_coeff(int dim, int ell)
{
    if (dim <= kTableDims && ell <= kSeriesCap + 2) return log_table(dim)[ell];
    return log_coeff(dim, ell);
}

void check_dim(int dim)
{
    if (dim < 1) throw RangeError("kernel dimension must be >= 1");
}

struct SeriesSum {
    double value = 0.0;
    double abs_sum = 0.0;
    int order = 0;
    bool converged = false;
};

// Alternating sum of c_l r^(2l+shift); stops at the first even order whose term
// is below tol while the remaining terms decrease monotonically.
template <class LogCoeff>
SeriesSum alternating_series(LogCoeff log_c, double r, int shift)
{
    SeriesSum s;
    const double lr = std::log(r);
    double prev_log = 0.0;
    for (int ell = 0; ell <= kSeriesCap + 1; ++ell) {
        const double lc = log_c(ell);
        const double t = std::exp(lc + (2.0 * ell + shift) * lr);
        s.value += (ell % 2 ? -t : t);
        s.abs_sum += t;
        if (ell % 2 == 1 && ell > 1) {
            // ell-1 is even; its successor ratio is lc - prev_log
            const int n = ell - 1;
            const double ratio_log = lc - prev_log + 2.0 * lr;
            if (n > kSeriesCap) break;
            if (std::exp(prev_log + (2.0 * n + shift) * lr) < kSeriesTol && ratio_log < 0.0) {
                s.value += t;  // drop the odd term again: result is Phi_n
                s.abs_sum -= t;
                s.order = n;
                s.converged = true;
                return s;
            }
        }
        prev_log = lc;
    }
    return s;
}

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

template <class F>
double integrate_panels(F f, std::vector<double> cuts, const char* what, double r)
{
    for (double x = 0.5; x < kXiMax; x += 0.5) cuts.push_back(x);
    cuts.push_back(0.0);
    cuts.push_back(kXiMax);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return b - a < 1e-12; }),
               cuts.end());
    double total = 0.0, err = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double e = 0.0;
        total += GK::integrate(f, cuts[k], cuts[k + 1], 3, 1e-12, &e);
        err += e;
    }
    if (!(err <= kQuadratureTol)) {
        std::ostringstream os;
        os << what << " quadrature did not converge at r=" << r << " (residual " << err << ")";
        throw QuadratureError(os.str(), err);
    }
    return total;
}

// Zeros of sin(r xi + phase) inside (0, kXiMax).
std::vector<double> trig_cuts(double r, double phase)
{
    std::vector<double> cuts;
    if (r <= 0.0) return cuts;
    for (int k = 0;; ++k) {
        const double x = (k * pi - phase) / r;
        if (x >= kXiMax) break;
        if (x > 0.0) cuts.push_back(x);
    }
    return cuts;
}

std::vector<double> j0_cuts(double r)
{
    std::vector<double> cuts;
    if (r <= 0.0) return cuts;
    for (int k = 1;; ++k) {
        const double x = boost::math::cyl_bessel_j_zero(0.0, k) / r;
        if (x >= kXiMax) break;
        cuts.push_back(x);
    }
    return cuts;
}

}  // namespace

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double series_coeff(int dim, int ell)
{
    check_dim(dim);
    if (ell < 0) throw RangeError("series index must be >= 0");
    return std::exp(log_coeff(dim, ell));
}

double series_ratio(int dim, int n)
{
    check_dim(dim);
    return std::exp(log_coeff(dim, n + 1) - log_coeff(dim, n));
}

KernelSeries make_kernel_series(int dim, int n_max)
{
    check_dim(dim);
    if (n_max < 0 || n_max % 2) throw RangeError("n_max must be even and >= 0");
    KernelSeries ks;
    ks.dim = dim;
    ks.n_max = n_max;
    ks.coeffs.resize(n_max + 1);
    for (int l = 0; l <= n_max; ++l) ks.coeffs[l] = series_coeff(dim, l);
    ks.valid_radius = 1.0 / std::sqrt(series_ratio(dim, n_max));
    return ks;
}

double partial_sum(int dim, int n, double r)
{
    check_dim(dim);
    if (r == 0.0) return series_coeff(dim, 0);
    double s = 0.0;
    for (int l = 0; l <= n; ++l) {
        const double t = std::exp(cached_log_coeff(dim, l) + 2.0 * l * std::log(r));
        s += (l % 2 ? -t : t);
    }
    return s;
}

double radial_profile_quadrature(int dim, double r)
{
    if (r < 0.0) throw RangeError("radius must be >= 0");
    switch (dim) {
    case 1:
        return integrate_panels(
            [r](double x) { return std::exp(-x * x * x * x) * std::cos(r * x) / pi; },
            trig_cuts(r, -pi / 2), "phi_1", r);
    case 2:
        return integrate_panels(
            [r](double x) {
                return x * std::exp(-x * x * x * x) * std::cyl_bessel_j(0.0, r * x) / (2 * pi);
            },
            j0_cuts(r), "phi_2", r);
    case 3:
        if (r == 0.0)
            return integrate_panels(
                [](double x) { return x * x * std::exp(-x * x * x * x) / (2 * pi * pi); }, {},
                "phi_3", r);
        return integrate_panels(
            [r](double x) {
                return x * std::sin(r * x) * std::exp(-x * x * x * x) / (2 * pi * pi * r);
            },
            trig_cuts(r, 0.0), "phi_3", r);
    default:
        throw RangeError("quadrature representation available for dimensions 1..3 only");
    }
}

double psi_quadrature(double r)
{
    if (r < 0.0) throw RangeError("radius must be >= 0");
    if (r == 0.0) return 0.0;
    return integrate_panels(
        [r](double x) {
            const double s = x == 0.0 ? r : std::sin(r * x) / x;
            return std::exp(-x * x * x * x) * s / pi;
        },
        trig_cuts(r, 0.0), "psi", r);
}

KernelValue phi_detail(int dim, double r)
{
    check_dim(dim);
    if (r < 0.0) throw RangeError("radius must be >= 0");
    if (r == 0.0) return {series_coeff(dim, 0), EvalMethod::series, 0};
    const auto s = alternating_series([dim](int l) { return cached_log_coeff(dim, l); }, r, 0);
    if (s.converged && s.abs_sum <= kCancellationLimit * std::abs(s.value))
        return {s.value, EvalMethod::series, s.order};
    if (dim > 3) {
        std::ostringstream os;
        os << "phi_" << dim << " series unusable at r=" << r << " and no quadrature form";
        throw RangeError(os.str());
    }
    return {radial_profile_quadrature(dim, r), EvalMethod::quadrature, 0};
}

double phi(int dim, double r) { return phi_detail(dim, r).value; }

KernelValue psi_detail(double r)
{
    if (r < 0.0) throw RangeError("radius must be >= 0");
    if (r == 0.0) return {0.0, EvalMethod::series, 0};
    const auto s = alternating_series([](int l) { return log_table(0)[l]; }, r, 1);
    if (s.converged && s.abs_sum <= kCancellationLimit * std::abs(s.value))
        return {s.value, EvalMethod::series, s.order};
    return {psi_quadrature(r), EvalMethod::quadrature, 0};
}

double psi(double r) { return psi_detail(r).value; }

ZeroTable kernel_zeros(int count, double tol)
{
    if (count < 1) throw RangeError("count must be >= 1");
    if (!(tol > 0.0)) throw RangeError("tol must be > 0");
    ZeroTable zt;
    zt.tol = tol;
    double r0 = 0.0, f0 = phi(1, 0.0);
    double pending_plus = -1.0;
    for (int k = 1;; ++k) {
        const double r1 = k * kZeroScanStep;
        if (r1 > kZeroScanMax + 1e-12) break;
        const double f1 = phi(1, r1);
        zt.scanned_to = r1;
        if ((f0 > 0.0) != (f1 > 0.0)) {
            double lo = r0, hi = r1;
            const bool lo_positive = f0 > 0.0;
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                if ((phi(1, mid) > 0.0) == lo_positive)
                    lo = mid;
                else
                    hi = mid;
            }
            const double root = 0.5 * (lo + hi);
            if (lo_positive) {
                pending_plus = root;
            } else if (pending_plus > 0.0) {
                zt.pairs.push_back({pending_plus, root});
                pending_plus = -1.0;
                if (static_cast<int>(zt.pairs.size()) == count) return zt;
            }
        }
        r0 = r1;
        f0 = f1;
    }
    std::ostringstream os;
    os << "found " << zt.pairs.size() << " of " << count << " sign-change pairs of phi_1 on [0, "
       << zt.scanned_to << "] (step " << kZeroScanStep << ")";
    throw RangeError(os.str());
}

double default_scale() { return std::pow(11.0 / 18.0, 0.25); }

double threshold_combination(double r, double a)
{
    if (r < 0.0) throw RangeError("radius must be >= 0");
    if (!(a > 0.0)) throw RangeError("scale must be > 0");
    return psi(r / (3 * a)) - 3 * psi(r / (2 * a)) + 3 * psi(r / a);
}

double l_moment(double sigma)
{
    if (sigma < 0.0) throw RangeError("sigma must be >= 0");
    return 0.5 * std::tgamma((sigma + 1.0) / 4.0);
}

double laplacian_phi(int dim, int m, double r)
{
    check_dim(dim);
    if (m < 0) throw RangeError("m must be >= 0");
    const double N = dim;
    auto log_c = [N, m](int l) {
        return std::lgamma((l + m) / 2.0 + N / 4.0) - (N + 1.0 + 2.0 * l) * std::log(2.0)
             - (N / 2.0) * std::log(pi) - std::lgamma(l + 1.0) - std::lgamma(l + N / 2.0);
    };
    const double sign = m % 2 ? -1.0 : 1.0;
    if (r == 0.0) return sign * std::exp(log_c(0));
    const auto s = alternating_series(log_c, r, 0);
    if (!s.converged || s.abs_sum > kCancellationLimit * std::abs(s.value)) {
        std::ostringstream os;
        os << "Laplacian series unusable at r=" << r;
        throw RangeError(os.str());
    }
    return sign * s.value;
}

double moment_closed_form(const MomentPattern& p)
{
    if (p.dim < 2) throw RangeError("moments need dim >= 2");
    if (static_cast<int>(p.beta.size()) > p.dim - 1)
        throw RangeError("beta has more entries than dim - 1");
    std::vector<int> nz;
    int total = 0;
    for (int b : p.beta) {
        if (b < 0) throw RangeError("negative exponent");
        total += b;
        if (b) nz.push_back(b);
    }
    if (total % 2) return 0.0;
    std::sort(nz.begin(), nz.end(), std::greater<>());
    const double c1 = 1.0 / (2 * pi);
    const double L0 = l_moment(0);
    const auto is = [&](std::vector<int> v, int ell, int m) {
        return nz == v && p.ell == ell && p.m == m;
    };
    if (is({}, 0, 0)) return c1 * L0;
    if (is({2}, 0, 0)) return 4 * c1 * l_moment(2);
    if (is({4}, 0, 0)) return -12 * c1 * L0;
    if (is({2, 2}, 0, 0)) return -4 * c1 * L0;
    if (is({6}, 1, 0)) return -60 * c1 * L0;
    if (is({4, 2}, 1, 0)) return -12 * c1 * L0;
    if (is({2, 2, 2}, 1, 0)) return -4 * c1 * L0;
    if (is({2}, 0, 1)) return -c1 * L0;
    throw RangeError("no closed form; use moment_oracle");
}

}  // namespace wmbo
