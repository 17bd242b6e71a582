#pragma once

#include <vector>

#include "wmbo/grid.hpp"

namespace wmbo {

// Power series of the radial profile phi_N of the quartic heat kernel.
struct KernelSeries {
    int dim = 1;
    std::vector<double> coeffs;  // b_{N,l}, l = 0..n_max
    int n_max = 0;
    double valid_radius = 0.0;   // 1/sqrt(delta_{N,n_max})
};

struct ZeroPair {
    double r_plus;   // phi_1 turns negative
    double r_minus;  // phi_1 turns positive again
};

struct ZeroTable {
    std::vector<ZeroPair> pairs;
    double tol = 1e-10;
    double scanned_to = 0.0;
};

// beta holds the exponents of z' = (z_1, ..., z_{N-1}); missing entries are 0.
struct MomentPattern {
    std::vector<int> beta;
    int ell = 0;
    int m = 0;
    int dim = 2;
};

enum class EvalMethod { series, quadrature };

struct KernelValue {
    double value;
    EvalMethod method;
    int terms;  // series order used, 0 for quadrature
};

inline constexpr int kSeriesCap = 400;
inline constexpr double kSeriesTol = 1e-12;
inline constexpr double kCancellationLimit = 1e6;
inline constexpr double kQuadratureTol = 1e-10;
inline constexpr double kZeroScanStep = 0.05;
inline constexpr double kZeroScanMax = 32.0;

double series_coeff(int dim, int ell);
double series_ratio(int dim, int n);  // delta_{N,n} = b_{N,n+1} / b_{N,n}
KernelSeries make_kernel_series(int dim, int n_max);

// Phi_{N,n}(r): the series truncated after the l = n term.
double partial_sum(int dim, int n, double r);

double phi(int dim, double r);
KernelValue phi_detail(int dim, double r);

// Psi(r) = integral of phi_1 over [0, r].
double psi(double r);
KernelValue psi_detail(double r);

ZeroTable kernel_zeros(int count, double tol = 1e-10);

double default_scale();  // a with 18 a^4 / 11 = 1
double threshold_combination(double r, double a);

// L_sigma = 2 * int_0^inf xi^sigma exp(-xi^4) dxi.
double l_moment(double sigma);

// Radial profile of Laplacian^m g_N.
double laplacian_phi(int dim, int m, double r);

double moment_closed_form(const MomentPattern& p);

// Defaults chosen so that z^6-weighted tails and periodic images are negligible.
GridSpec default_moment_grid();
double moment_oracle(const MomentPattern& p, const GridSpec& grid = default_moment_grid());

// Oscillatory integral representations, independent of the series.
double radial_profile_quadrature(int dim, double r);
double psi_quadrature(double r);

}  // namespace wmbo
