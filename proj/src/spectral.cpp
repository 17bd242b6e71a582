#include "wmbo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft_util.hpp"
#include "wmbo/error.hpp"

namespace wmbo {

namespace detail {

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

}  // namespace detail

namespace {

constexpr double pi = std::numbers::pi;

int signed_k(int k, int n) { return k < n / 2 ? k : k - n; }

void check_same(const GridSpec& a, const GridSpec& b)
{
    if (a.n != b.n || a.side_length != b.side_length) throw Error("grid mismatch");
}

detail::FftwPlan plan_c2c(int n, std::complex<double>* in, std::complex<double>* out, int sign)
{
    std::lock_guard lock(detail::fftw_planner_mutex());
    return detail::FftwPlan(
        fftw_plan_dft_2d(n, n, detail::as_fftw(in), detail::as_fftw(out), sign, FFTW_ESTIMATE));
}

template <class Mult>
RealField apply_multiplier(const SpectrumField& s, Mult mult)
{
    SpectrumField out = s;
    const int n = s.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.coeffs[static_cast<std::size_t>(i) * n + j] *= mult(signed_k(i, n), signed_k(j, n));
    return field_from_spectrum(out);
}

}  // namespace

void validate(const GridSpec& grid)
{
    if (!(grid.side_length > 0.0) || !std::isfinite(grid.side_length))
        throw UsageError("grid side length must be positive");
    if (grid.n < 4 || !is_power_of_two(grid.n)) {
        std::ostringstream os;
        os << "grid size n=" << grid.n << " must be a power of two >= 4";
        throw UsageError(os.str());
    }
}

const char* to_string(StepStatus s)
{
    switch (s) {
    case StepStatus::ok: return "ok";
    case StepStatus::collapsed: return "collapsed";
    case StepStatus::filled: return "filled";
    }
    return "?";
}

std::size_t IndicatorField::count() const
{
    std::size_t c = 0;
    for (auto v : values) c += v;
    return c;
}

std::complex<double>& SpectrumField::at(int kx, int ky)
{
    const int n = grid.n;
    return coeffs[static_cast<std::size_t>((kx % n + n) % n) * n + (ky % n + n) % n];
}

const std::complex<double>& SpectrumField::at(int kx, int ky) const
{
    return const_cast<SpectrumField*>(this)->at(kx, ky);
}

SpectrumField field_spectrum(const RealField& f)
{
    validate(f.grid);
    const int n = f.grid.n;
    SpectrumField s{f.grid, std::vector<std::complex<double>>(f.grid.size())};
    detail::FftwBuffer<std::complex<double>> buf(f.grid.size());
    auto plan = plan_c2c(n, buf.data, buf.data, FFTW_FORWARD);
    for (std::size_t i = 0; i < f.grid.size(); ++i) buf[i] = f.values[i];
    plan.execute();
    const double norm = 1.0 / (static_cast<double>(n) * n);
    for (std::size_t i = 0; i < f.grid.size(); ++i) s.coeffs[i] = buf[i] * norm;
    return s;
}

SpectrumField indicator_spectrum(const IndicatorField& ind)
{
    RealField f{ind.grid, std::vector<double>(ind.values.begin(), ind.values.end())};
    return field_spectrum(f);
}

RealField field_from_spectrum(const SpectrumField& s)
{
    validate(s.grid);
    const int n = s.grid.n;
    detail::FftwBuffer<std::complex<double>> buf(s.grid.size());
    auto plan = plan_c2c(n, buf.data, buf.data, FFTW_BACKWARD);
    for (std::size_t i = 0; i < s.grid.size(); ++i) buf[i] = s.coeffs[i];
    plan.execute();
    RealField f{s.grid, std::vector<double>(s.grid.size())};
    double residue = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        residue = std::max(residue, std::abs(buf[i].imag()));
        f.values[i] = buf[i].real();
    }
    if (residue > 1e-6) {
        std::ostringstream os;
        os << "spectrum is not conjugate symmetric: imaginary residue " << residue;
        throw SymmetryError(os.str());
    }
    return f;
}

double propagator_multiplier(const GridSpec& grid, int kx, int ky, double t, double lambda)
{
    const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
    const double L = grid.side_length;
    const double q2 = 4 * pi * pi * k2 / (L * L);
    return std::exp(-(q2 * q2 + lambda * q2) * t);
}

double threshold_multiplier(const GridSpec& grid, int kx, int ky, const ThresholdParams& p)
{
    const double a4 = p.a * p.a * p.a * p.a;
    return propagator_multiplier(grid, kx, ky, 81 * a4 * p.h, p.lambda)
         - 3 * propagator_multiplier(grid, kx, ky, 16 * a4 * p.h, p.lambda)
         + 3 * propagator_multiplier(grid, kx, ky, a4 * p.h, p.lambda);
}

RealField threshold_field(const SpectrumField& spec0, const ThresholdParams& params)
{
    return apply_multiplier(
        spec0, [&](int kx, int ky) { return threshold_multiplier(spec0.grid, kx, ky, params); });
}

RealField propagate(const SpectrumField& spec0, double t, double lambda)
{
    return apply_multiplier(spec0, [&](int kx, int ky) {
        return propagator_multiplier(spec0.grid, kx, ky, t, lambda);
    });
}

StepResult step(const IndicatorField& ind, const ThresholdParams& params)
{
    if (!(params.h > 0.0)) throw RangeError("time step must be > 0");
    auto op = SpectralOperator::three_scale(ind.grid, params);
    return op.step(ind, params.level);
}

std::vector<std::string> resolution_guard(double max_speed, double h, const GridSpec& grid)
{
    std::vector<std::string> w;
    const double cells = std::abs(max_speed) * h / grid.cell();
    std::ostringstream os;
    if (cells < 1.0) {
        os << "interface displacement " << cells << " cells per step is below one cell; "
           << "thresholding may pin the interface";
        w.push_back(os.str());
    } else if (cells > grid.n / 8.0) {
        os << "interface displacement " << cells << " cells per step exceeds n/8; "
           << "the kernel is under-resolved";
        w.push_back(os.str());
    }
    return w;
}

// ---------------------------------------------------------------------------

struct SpectralOperator::Impl {
    GridSpec grid;
    int nh;  // n/2 + 1 complex columns
    detail::FftwBuffer<double> real;
    detail::FftwBuffer<std::complex<double>> spec;
    std::vector<double> table;  // multiplier / n^2, same layout as spec
    detail::FftwPlan fwd, inv;

    Impl(const GridSpec& g)
        : grid(g),
          nh(g.n / 2 + 1),
          real(g.size()),
          spec(static_cast<std::size_t>(g.n) * (g.n / 2 + 1)),
          table(static_cast<std::size_t>(g.n) * (g.n / 2 + 1))
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fwd = detail::FftwPlan(fftw_plan_dft_r2c_2d(g.n, g.n, real.data,
                                                    detail::as_fftw(spec.data), FFTW_ESTIMATE));
        inv = detail::FftwPlan(fftw_plan_dft_c2r_2d(g.n, g.n, detail::as_fftw(spec.data),
                                                    real.data, FFTW_ESTIMATE));
    }

    template <class Mult>
    void fill(Mult mult)
    {
        const int n = grid.n;
        const double norm = 1.0 / (static_cast<double>(n) * n);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < nh; ++j)
                table[static_cast<std::size_t>(i) * nh + j] = mult(signed_k(i, n), j) * norm;
    }
};

SpectralOperator::SpectralOperator(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
SpectralOperator::SpectralOperator(SpectralOperator&&) noexcept = default;
SpectralOperator& SpectralOperator::operator=(SpectralOperator&&) noexcept = default;
SpectralOperator::~SpectralOperator() = default;

SpectralOperator SpectralOperator::three_scale(const GridSpec& grid, const ThresholdParams& params)
{
    validate(grid);
    if (!(params.a > 0.0)) throw RangeError("scale a must be > 0");
    auto impl = std::make_unique<Impl>(grid);
    impl->fill([&](int kx, int ky) { return threshold_multiplier(grid, kx, ky, params); });
    return SpectralOperator(std::move(impl));
}

SpectralOperator SpectralOperator::single_scale(const GridSpec& grid, double t, double lambda)
{
    validate(grid);
    if (t < 0.0) throw RangeError("propagation time must be >= 0");
    auto impl = std::make_unique<Impl>(grid);
    impl->fill([&](int kx, int ky) { return propagator_multiplier(grid, kx, ky, t, lambda); });
    return SpectralOperator(std::move(impl));
}

const GridSpec& SpectralOperator::grid() const { return impl_->grid; }

void SpectralOperator::load(const IndicatorField& ind, Exec exec)
{
    check_same(ind.grid, impl_->grid);
    const std::size_t size = impl_->grid.size();
    double* dst = impl_->real.data;
    const std::uint8_t* src = ind.values.data();
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < size; ++i) dst[i] = src[i];
    } else {
        for (std::size_t i = 0; i < size; ++i) dst[i] = src[i];
    }
}

void SpectralOperator::forward() { impl_->fwd.execute(); }
void SpectralOperator::inverse() { impl_->inv.execute(); }

void SpectralOperator::multiply(Exec exec)
{
    const std::size_t size = impl_->table.size();
    std::complex<double>* s = impl_->spec.data;
    const double* m = impl_->table.data();
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < size; ++i) s[i] *= m[i];
    } else {
        for (std::size_t i = 0; i < size; ++i) s[i] *= m[i];
    }
}

RealField SpectralOperator::field() const
{
    return {impl_->grid, std::vector<double>(impl_->real.data, impl_->real.data + impl_->grid.size())};
}

StepResult SpectralOperator::threshold(double level, Exec exec) const
{
    StepResult r{IndicatorField::empty(impl_->grid), StepStatus::ok};
    const std::size_t size = impl_->grid.size();
    const double* u = impl_->real.data;
    std::uint8_t* out = r.field.values.data();
    std::size_t ones = 0;
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : ones)
        for (std::size_t i = 0; i < size; ++i) {
            out[i] = u[i] >= level ? 1 : 0;
            ones += out[i];
        }
    } else {
        for (std::size_t i = 0; i < size; ++i) {
            out[i] = u[i] >= level ? 1 : 0;
            ones += out[i];
        }
    }
    if (ones == 0)
        r.status = StepStatus::collapsed;
    else if (ones == size)
        r.status = StepStatus::filled;
    return r;
}

RealField SpectralOperator::apply(const IndicatorField& ind, Exec exec)
{
    load(ind, exec);
    forward();
    multiply(exec);
    inverse();
    return field();
}

RealField SpectralOperator::apply(const RealField& f, Exec exec)
{
    check_same(f.grid, impl_->grid);
    std::copy(f.values.begin(), f.values.end(), impl_->real.data);
    forward();
    multiply(exec);
    inverse();
    return field();
}

StepResult SpectralOperator::step(const IndicatorField& ind, double level, Exec exec)
{
    load(ind, exec);
    forward();
    multiply(exec);
    inverse();
    return threshold(level, exec);
}

}  // namespace wmbo
