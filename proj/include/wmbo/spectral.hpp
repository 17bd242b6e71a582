#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wmbo/grid.hpp"
#include "wmbo/kernel.hpp"

namespace wmbo {

// 0/1 samples of a set on cell centers, values[i*n + j] for x index i, y index j.
struct IndicatorField {
    GridSpec grid;
    std::vector<std::uint8_t> values;

    static IndicatorField empty(const GridSpec& g) { return {g, std::vector<std::uint8_t>(g.size(), 0)}; }
    std::size_t count() const;
    double area() const { return count() * grid.cell() * grid.cell(); }
    std::uint8_t at(int i, int j) const { return values[grid.index(i, j)]; }
};

struct RealField {
    GridSpec grid;
    std::vector<double> values;

    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

// Full complex DFT of a real field, normalized so that the xi = 0 entry is the mean.
// Entry (kx, ky) multiplies exp(2 pi i (kx i + ky j) / n) at sample (i, j);
// storage is FFT order, wavevectors k >= n/2 stand for k - n.
struct SpectrumField {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;

    std::complex<double>& at(int kx, int ky);
    const std::complex<double>& at(int kx, int ky) const;
};

struct ThresholdParams {
    double a = default_scale();
    double h = 1e-5;
    double lambda = 0.0;
    double level = 0.5;
};

enum class StepStatus { ok, collapsed, filled };
const char* to_string(StepStatus s);

struct StepResult {
    IndicatorField field;
    StepStatus status = StepStatus::ok;
};

enum class Exec { serial, parallel };

SpectrumField indicator_spectrum(const IndicatorField& ind);
SpectrumField field_spectrum(const RealField& f);
RealField field_from_spectrum(const SpectrumField& s);

// exp(-(16 pi^4 |xi|^4 / L^4 + 4 pi^2 lambda |xi|^2 / L^2) t)
double propagator_multiplier(const GridSpec& grid, int kx, int ky, double t, double lambda);
double threshold_multiplier(const GridSpec& grid, int kx, int ky, const ThresholdParams& p);

RealField threshold_field(const SpectrumField& spec0, const ThresholdParams& params);
RealField propagate(const SpectrumField& spec0, double t, double lambda);

StepResult step(const IndicatorField& ind, const ThresholdParams& params);

// Warnings when max_speed * h leaves the window [1 cell, n/8 cells].
std::vector<std::string> resolution_guard(double max_speed, double h, const GridSpec& grid);

// Reusable real-to-complex pipeline: indicator -> spectrum -> multiplier -> field.
// One instance per worker; the plans and the multiplier table are built once.
class SpectralOperator {
public:
    static SpectralOperator three_scale(const GridSpec& grid, const ThresholdParams& params);
    static SpectralOperator single_scale(const GridSpec& grid, double t, double lambda);

    SpectralOperator(SpectralOperator&&) noexcept;
    SpectralOperator& operator=(SpectralOperator&&) noexcept;
    ~SpectralOperator();

    const GridSpec& grid() const;
    RealField apply(const IndicatorField& ind, Exec exec = Exec::parallel);
    RealField apply(const RealField& f, Exec exec = Exec::parallel);
    // Threshold at `level`, ties inside.
    StepResult step(const IndicatorField& ind, double level = 0.5, Exec exec = Exec::parallel);

    // Stages exposed for benchmarking serial against parallel execution.
    void load(const IndicatorField& ind, Exec exec);
    void forward();
    void multiply(Exec exec);
    void inverse();
    RealField field() const;
    StepResult threshold(double level, Exec exec) const;

private:
    struct Impl;
    explicit SpectralOperator(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

}  // namespace wmbo
