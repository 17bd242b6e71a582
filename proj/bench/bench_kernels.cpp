// Serial vs OpenMP timing of the per-step kernels.
// usage: wmbo_bench [n] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "wmbo/flow.hpp"

using namespace wmbo;

namespace {

double best_of(int repeats, const std::function<void()>& f)
{
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool same)
{
    std::printf("%-12s %10.3f %10.3f %8.2fx  %s\n", name, 1e3 * serial, 1e3 * parallel, serial / parallel,
                same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv)
{
    const int n = argc > 1 ? std::atoi(argv[1]) : 2048;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
    const GridSpec g{1.0, n};
    const Shape shape = Circle{{}, 0.15};
    ThresholdParams p;
    p.h = 1e-5;

    std::printf("n = %d, threads = %d, best of %d\n", n, omp_get_max_threads(), repeats);
    std::printf("%-12s %10s %10s %9s\n", "stage", "serial ms", "omp ms", "speedup");
    bool all_same = true;

    Raster rs, rp;
    const double ts = best_of(repeats, [&] { rs = rasterize(shape, g, Exec::serial); });
    const double tp = best_of(repeats, [&] { rp = rasterize(shape, g, Exec::parallel); });
    bool same = rs.field.values == rp.field.values;
    all_same = all_same && same;
    row("rasterize", ts, tp, same);

    auto op = SpectralOperator::three_scale(g, p);
    const auto& ind = rs.field;
    const double ls = best_of(repeats, [&] { op.load(ind, Exec::serial); });
    const double lp = best_of(repeats, [&] { op.load(ind, Exec::parallel); });
    row("load", ls, lp, true);

    op.load(ind, Exec::serial);
    op.forward();
    const double fft = best_of(repeats, [&] { op.forward(); });
    std::printf("%-12s %10.3f\n", "forward fft", 1e3 * fft);

    // multiply is repeated on a fresh spectrum each time
    auto run_multiply = [&](Exec e) {
        op.load(ind, Exec::serial);
        op.forward();
        op.multiply(e);
        op.inverse();
        return op.field();
    };
    const auto fs = run_multiply(Exec::serial);
    const auto fp = run_multiply(Exec::parallel);
    same = fs.values == fp.values;
    all_same = all_same && same;
    const double ms = best_of(repeats, [&] { op.multiply(Exec::serial); });
    const double mp = best_of(repeats, [&] { op.multiply(Exec::parallel); });
    row("multiply", ms, mp, same);

    run_multiply(Exec::serial);
    StepResult hs, hp;
    const double hts = best_of(repeats, [&] { hs = op.threshold(0.5, Exec::serial); });
    const double htp = best_of(repeats, [&] { hp = op.threshold(0.5, Exec::parallel); });
    same = hs.field.values == hp.field.values;
    all_same = all_same && same;
    row("threshold", hts, htp, same);

    StepResult ss, sp;
    const double sts = best_of(repeats, [&] { ss = op.step(ind, 0.5, Exec::serial); });
    const double stp = best_of(repeats, [&] { sp = op.step(ind, 0.5, Exec::parallel); });
    same = ss.field.values == sp.field.values;
    all_same = all_same && same;
    row("full step", sts, stp, same);

    return all_same ? 0 : 1;
}
