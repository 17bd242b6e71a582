// One PASS/FAIL line per acceptance criterion, with the measured values.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "wmbo/error.hpp"
#include "wmbo/flow.hpp"
#include "wmbo/kernel.hpp"
#include "wmbo/validation.hpp"

using namespace wmbo;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
};

std::string num(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

Outcome kernel_constants()
{
    const auto zt = kernel_zeros(1, 1e-10);
    const double rp = zt.pairs[0].r_plus, rm = zt.pairs[0].r_minus;
    const double prp = psi(rp), prm = psi(rm), p3 = psi(rp / 3);
    const bool b1 = rp > 3.453 && rp < 3.454, b2 = rm > 6.784 && rm < 6.785;
    const bool b3 = prp > 0.5522 && prp < 0.5523, b4 = prm > 0.4938 && prm < 0.4939;
    const bool b5 = p3 > 0.32584;
    std::ostringstream os;
    os << "r1+=" << num(rp, 10) << (b1 ? "" : "(out)") << " r1-=" << num(rm, 10) << (b2 ? "" : "(out)")
       << " Psi(r1+)=" << num(prp, 8) << (b3 ? "" : "(out)") << " Psi(r1-)=" << num(prm, 8)
       << (b4 ? "" : "(out)") << " Psi(r1+/3)=" << num(p3, 8) << (b5 ? " > 0.32584" : " NOT > 0.32584");
    return {b1 && b2 && b3 && b4 && b5, os.str()};
}

Outcome moment_identities()
{
    const std::vector<MomentPattern> closed = {
        {{}, 0, 0, 2},     {{2}, 0, 0, 2},     {{4}, 0, 0, 2},    {{6}, 1, 0, 2},
        {{2}, 0, 1, 2},    {{}, 0, 0, 3},      {{2}, 0, 0, 3},    {{0, 2}, 0, 0, 3},
        {{4}, 0, 0, 3},    {{0, 4}, 0, 0, 3},  {{2, 2}, 0, 0, 3}, {{6}, 1, 0, 3},
        {{4, 2}, 1, 0, 3}, {{2, 4}, 1, 0, 3},  {{2}, 0, 1, 3},
    };
    const std::vector<MomentPattern> odd = {
        {{1}, 0, 0, 2}, {{3}, 0, 0, 2}, {{5}, 1, 0, 2}, {{3}, 0, 1, 2},
        {{1, 2}, 0, 0, 3}, {{3, 2}, 1, 0, 3}, {{0, 5}, 0, 0, 3}, {{1, 0}, 0, 1, 3},
    };
    double worst_rel = 0.0, worst_odd = 0.0;
    for (auto& p : closed) worst_rel = std::max(worst_rel, std::abs(moment_oracle(p) / moment_closed_form(p) - 1));
    for (auto& p : odd) worst_odd = std::max(worst_odd, std::abs(moment_oracle(p)));
    std::ostringstream os;
    os << closed.size() << " closed forms, max rel err " << num(worst_rel, 3) << " (< 1e-5); " << odd.size()
       << " odd patterns, max |M| " << num(worst_odd, 3) << " (< 1e-7)";
    return {worst_rel < 1e-5 && worst_odd < 1e-7, os.str()};
}

Outcome positivity()
{
    const double a = std::pow(11.0 / 18.0, 0.25);
    double lo = 1e300, at = 0.0;
    for (int k = 1; k <= 10000; ++k) {
        const double r = 40.0 * k / 10000;
        const double v = threshold_combination(r, a);
        if (v < lo) {
            lo = v;
            at = r;
        }
    }
    return {lo > 0.0, "min I(r) = " + num(lo, 6) + " at r = " + num(at, 4) + " over 1e4 samples of (0, 40]"};
}

Outcome flat_stationarity()
{
    const GridSpec g{1.0, 1024};
    const auto band = rasterize(Band{0, 0.25}, g).field;
    FlowConfig cfg;
    cfg.params.h = 1e-6;
    cfg.steps = 10;
    cfg.diagnostics = {true, false, false, false};
    const auto tr = evolve(band, cfg);
    std::size_t diff = 0;
    for (std::size_t k = 0; k < g.size(); ++k) diff += tr.final_field.values[k] != band.values[k];
    const bool ran = tr.records.size() == 11 && tr.stop_reason.empty();
    return {ran && diff == 0, std::to_string(tr.records.size() - 1) + " steps, " + std::to_string(diff) + " cells changed"};
}

Outcome circle_law()
{
    const GridSpec g{1.0, 2048};
    const double R0 = 0.15;
    FlowConfig cfg;
    cfg.params.h = circle_step_for_cells(R0, g, 3.0);
    cfg.steps = 20;
    cfg.diagnostics = {true, false, true, true};
    const auto tr = evolve(rasterize(Circle{{}, R0}, g).field, cfg);
    double worst = 0.0;
    int worst_k = 0;
    bool resolved = tr.stop_reason.empty() && tr.records.size() == 21;
    for (auto& r : tr.records) {
        if (r.k == 0) continue;
        resolved = resolved && r.status == FlowStatus::ok;
        const double exact = pi * std::sqrt(std::pow(R0, 4) + 2 * r.t);
        const double e = std::abs(r.area / exact - 1);
        if (e > worst) {
            worst = e;
            worst_k = r.k;
        }
    }
    std::ostringstream os;
    os << "h=" << num(cfg.params.h, 4) << " (3 cells/step), max |area/exact - 1| = " << num(worst * 100, 4)
       << "% at step " << worst_k << " (< 2%), steps resolved: " << (resolved ? "yes" : "no");
    return {resolved && worst < 0.02, os.str()};
}

Outcome convergence()
{
    const GridSpec g{1.0, 4096};
    const std::vector<double> hs = {1.6e-5, 8e-6, 4e-6, 2e-6};
    const auto rep = circle_convergence_study(0.15, g, hs, 6.4e-5);
    const bool mono = monotone_with_one_inversion(rep.errors, 0.10);
    bool all_valid = true;
    for (int v : rep.valid) all_valid = all_valid && v;
    std::ostringstream os;
    os << "errors";
    for (double e : rep.errors) os << " " << num(e, 4);
    os << "; slope " << num(rep.fitted_slope, 4) << " (in [0.7, 1.3]), monotone: " << (mono ? "yes" : "no");
    const bool in = rep.fitted_slope >= 0.7 && rep.fitted_slope <= 1.3;
    return {all_valid && in && mono, os.str()};
}

Outcome velocity_law()
{
    const GridSpec g{1.0, 2048};
    const double R0 = 0.15;
    const Shape c = Circle{{}, R0};
    ThresholdParams p;
    p.h = circle_step_for_cells(R0, g, 3.0);
    const auto r0 = velocity_gradient_residual(c, g, p);
    const double t0 = 1 / (2 * R0 * R0 * R0);
    p.lambda = 0.5;
    const auto r1 = velocity_gradient_residual(c, g, p);
    const double t1 = t0 - 0.5 / R0;
    const double e0 = std::abs(r0.mean_velocity / t0 - 1), e1 = std::abs(r1.mean_velocity / t1 - 1);
    std::ostringstream os;
    os << "h=" << num(p.h, 4) << "; lambda=0: mean V " << num(r0.mean_velocity, 5) << " vs " << num(t0, 5) << " ("
       << num(e0 * 100, 3) << "%); lambda=0.5: mean V " << num(r1.mean_velocity, 5) << " vs " << num(t1, 5) << " ("
       << num(e1 * 100, 3) << "%), limit 20%";
    return {e0 < 0.2 && e1 < 0.2, os.str()};
}

std::vector<double> probe_times(double r0, const GridSpec& g)
{
    std::vector<double> t;
    const double q0 = 8 * g.cell(), q1 = 0.07 * r0;
    for (int i = 0; i < 8; ++i) t.push_back(std::pow(q0 * std::pow(q1 / q0, i / 7.0), 4));
    return t;
}

Outcome cancellation()
{
    const GridSpec g{1.0, 2048};
    const double R0 = 0.2;
    const auto ts = probe_times(R0, g);
    const auto single = expansion_probe(R0, g, ts, 0.0, Combination::single_scale);
    const auto three = expansion_probe(R0, g, ts, 0.0, Combination::three_scale);
    const double ratio = std::abs(three.fitted_c14 / single.fitted_c14);
    const double match = std::abs(single.fitted_c14 / single.expected_c14 - 1);
    std::ostringstream os;
    os << "single c14 " << num(single.fitted_c14, 5) << " vs " << num(single.expected_c14, 5) << " ("
       << num(match * 100, 3) << "%, < 10%); three-scale c14 " << num(three.fitted_c14, 4) << ", ratio "
       << num(ratio * 100, 3) << "% (< 5%)";
    return {ratio < 0.05 && match < 0.10, os.str()};
}

Outcome band_order()
{
    const GridSpec g{1.0, 2048};
    const double R0 = 0.15;
    std::vector<double> ts;
    for (int i = 0; i < 5; ++i) ts.push_back(circle_step_for_cells(R0, g, std::pow(10.0, i / 4.0)));
    const ThresholdParams p;
    const auto rep = band_inclusion_check(Circle{{}, R0}, g, p, ts, Combination::three_scale);
    const auto contrast = band_inclusion_check(Circle{{}, R0}, g, p, ts, Combination::single_scale);
    std::ostringstream os;
    os << "t in [" << num(ts.front(), 3) << ", " << num(ts.back(), 3) << "], sup d:";
    for (double d : rep.sup_distance) os << " " << num(d, 3);
    os << "; slope " << num(rep.slope, 4) << " (in [0.8, 1.2]); single-scale contrast slope "
       << num(contrast.slope, 3);
    return {rep.slope >= 0.8 && rep.slope <= 1.2, os.str()};
}

struct RunSummary {
    bool ok = false;
    std::string text;
    std::vector<double> energies;
};

RunSummary qualitative(const Shape& s, double h)
{
    const GridSpec g{5.0, 1024};
    FlowConfig cfg;
    cfg.params.h = h;
    cfg.steps = 4;
    cfg.snapshot_every = 1;
    const auto tr = evolve(rasterize(s, g).field, cfg);
    bool topo = false;
    for (auto& l : tr.log) topo = topo || l.find("contour diagnostics skipped") != std::string::npos;
    int after_start = 0;
    for (auto& snap : tr.snapshots) after_start += snap.k > 0;
    RunSummary r;
    for (auto& rec : tr.records) r.energies.push_back(rec.energy);
    r.ok = tr.stop_reason.empty() && !topo && after_start >= 4;
    std::ostringstream os;
    os << to_string(s) << " h=" << num(h, 3) << ": " << after_start << " snapshots"
       << (tr.stop_reason.empty() ? "" : ", stopped: " + tr.stop_reason) << (topo ? ", topology error" : "");
    r.text = os.str();
    return r;
}

Outcome qualitative_runs()
{
    const auto cas = qualitative(Cassini{0.6825, 0.678}, 0.004);
    const auto rose_body = qualitative(Rose{}, 0.003);
    const auto rose_caption = qualitative(Rose{}, 0.0003);
    bool energy_ok = true;
    std::ostringstream os;
    os << cas.text << "; E:";
    for (std::size_t k = 0; k < cas.energies.size(); ++k) {
        os << " " << num(cas.energies[k], 5);
        if (k > 0) energy_ok = energy_ok && cas.energies[k] <= 1.05 * cas.energies[k - 1];
    }
    os << (energy_ok ? " (non-increasing within 5%)" : " (rises beyond 5%)") << "; " << rose_body.text << "; "
       << rose_caption.text;
    return {cas.ok && rose_body.ok && rose_caption.ok && energy_ok, os.str()};
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "kernel constants", 5, kernel_constants},
        {2, "moment identities", 60, moment_identities},
        {3, "positivity of I(r)", 5, positivity},
        {4, "flat-interface stationarity", 60, flat_stationarity},
        {5, "circle law", 600, circle_law},
        {6, "first-order convergence", 1800, convergence},
        {7, "velocity law", 600, velocity_law},
        {8, "cancellation of the t^(1/4) term", 600, cancellation},
        {9, "O(t) band", 600, band_order},
        {10, "qualitative runs", 600, qualitative_runs},
    };
    int failed = 0;
    for (auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("criterion %2d: %s  %s | %s | %.1f s (limit %.0f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
