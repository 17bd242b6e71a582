#pragma once

#include <string>
#include <vector>

#include "wmbo/geometry.hpp"
#include "wmbo/spectral.hpp"

namespace wmbo {

double circle_radius_exact(double r0, double t);

// Step size giving `cells` cells of interface motion per step for the
// lambda = 0 circle law at radius r0.
double circle_step_for_cells(double r0, const GridSpec& grid, double cells);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least squares of log(y) against log(x).
LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// True when y (ordered with decreasing h) never increases, except for at most one
// increase of at most `allowance` relative.
bool monotone_with_one_inversion(const std::vector<double>& y, double allowance);

struct ConvergenceReport {
    double r0 = 0.0;
    double t_final = 0.0;
    GridSpec grid;
    std::vector<double> h_values;
    std::vector<double> errors;  // |pixel area - pi R(t_final)^2|, NaN for invalid runs
    std::vector<int> valid;
    double fitted_slope = 0.0;   // NaN with fewer than two valid runs
    double r_squared = 0.0;
    std::string assumption = "error = |pixel area - pi R(t_final)^2| at the final time";
};

ConvergenceReport circle_convergence_study(double r0, const GridSpec& grid,
                                           const std::vector<double>& h_values, double t_final,
                                           int jobs = 0);

enum class Combination { single_scale, three_scale };
const char* to_string(Combination c);

struct ExpansionFit {
    Combination combination = Combination::single_scale;
    std::vector<double> t_values;
    std::vector<double> u_minus_half;  // mean over the probe points
    double fitted_c14 = 0.0;           // coefficient of t^(1/4)
    double fitted_c34 = 0.0;           // coefficient of t^(3/4)
    double residual = 0.0;             // rms misfit / rms reference
    double expected_c14 = 0.0;
    double probe_radius = 0.0;
};

// Periodic bilinear interpolation of a cell-centered field.
double bilinear_sample(const RealField& f, Vec2 p);

// Interface value of the propagated indicator at the given points for each t;
// for the three-scale combination t plays the role of h.
// The misfit is taken relative to the larger of the data and leading_scale * t^(1/4).
ExpansionFit interface_probe(const IndicatorField& ind, const std::vector<Vec2>& points,
                             const std::vector<double>& t_values, double lambda,
                             Combination combination, double regime_limit = 0.1,
                             double leading_scale = 0.0);

// Circle of radius r0 at the domain center, probed on its pixel-area-equivalent radius.
ExpansionFit expansion_probe(double r0, const GridSpec& grid, const std::vector<double>& t_values,
                             double lambda, Combination combination = Combination::single_scale);

struct VelocityReport {
    double h = 0.0;
    double mean_velocity = 0.0;
    double mean_expected = 0.0;  // mean of -gradE
    double sup_residual = 0.0;   // sup |V + gradE|
    double sup_gradient = 0.0;   // sup |gradE|
    std::size_t vertices = 0;
    std::size_t missing = 0;
};

VelocityReport velocity_gradient_residual(const Shape& shape, const GridSpec& grid,
                                          const ThresholdParams& params);

struct VelocitySweep {
    std::vector<VelocityReport> reports;
    double slope = 0.0;  // of sup |V + gradE| against h
};

VelocitySweep velocity_residual_sweep(const Shape& shape, const GridSpec& grid,
                                      const ThresholdParams& params, const std::vector<double>& h_values);

struct InclusionReport {
    Combination combination = Combination::three_scale;
    std::vector<double> t_values;
    std::vector<double> sup_distance;
    double slope = 0.0;
    double r_squared = 0.0;
};

InclusionReport band_inclusion_check(const Shape& shape, const GridSpec& grid,
                                     const ThresholdParams& params, const std::vector<double>& t_values,
                                     Combination combination = Combination::three_scale);

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;   // measured quantity
    double limit = 0.0;   // bound it was compared against
    std::string detail;
};

// Self-check of the kernel constants and identities.
std::vector<CheckResult> verify_kernel();

}  // namespace wmbo
