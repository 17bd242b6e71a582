#include "wmbo/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wmbo/error.hpp"

namespace wmbo {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Narrower widths leave pixel noise in the contour curvature.
double smoothing_time(const GridSpec& g)
{
    const double w = 6 * g.cell();
    return w * w * w * w;
}

struct ContourStats {
    double energy = 0.0;
    double sup_gradient = 0.0;
};

ContourStats contour_stats(const std::vector<PolyCurve>& curves, const GridSpec& grid, double lambda)
{
    ContourStats s;
    for (auto& c : curves) {
        if (c.size() < 3) continue;
        const auto geom = curve_geometry(resample_uniform(c, resample_count(c, grid)));
        s.energy += willmore_energy(geom, lambda);
        for (double g : l2_gradient(geom, lambda)) s.sup_gradient = std::max(s.sup_gradient, std::abs(g));
    }
    return s;
}

// Below this predicted motion per step the interface counts as flat.
constexpr double kFlatCells = 0.05;

double max_abs_displacement(const std::vector<PolyCurve>& before, const std::vector<PolyCurve>& after,
                            const GridSpec& grid)
{
    double worst = nan;
    for (auto& c : before) {
        if (c.size() < 3) continue;
        const auto d =
            normal_displacement(resample_uniform(c, resample_count(c, grid)), after, grid.side_length / 8);
        for (double x : d)
            if (!std::isnan(x) && !(std::abs(x) <= worst)) worst = std::abs(x);
    }
    return worst;
}

double seam_clearance(const std::vector<PolyCurve>& curves, const GridSpec& grid)
{
    const double L = grid.side_length;
    double c = std::numeric_limits<double>::infinity();
    for (auto& curve : curves) {
        if (curve.wraps()) continue;
        for (auto& v : curve.vertices) c = std::min({c, v.x, v.y, L - v.x, L - v.y});
    }
    return c;
}

}  // namespace

const char* to_string(FlowStatus s)
{
    switch (s) {
    case FlowStatus::ok: return "ok";
    case FlowStatus::collapsed: return "collapsed";
    case FlowStatus::filled: return "filled";
    case FlowStatus::under_resolved: return "under_resolved";
    }
    return "?";
}

std::vector<PolyCurve> interface_contours(const IndicatorField& ind)
{
    auto smooth = SpectralOperator::single_scale(ind.grid, smoothing_time(ind.grid), 0.0);
    return extract_contours(smooth.apply(ind), 0.5);
}

Trajectory evolve(const IndicatorField& ind0, const FlowConfig& cfg)
{
    validate(ind0.grid);
    if (cfg.steps < 1) throw RangeError("steps must be >= 1");
    if (cfg.snapshot_every < 0) throw RangeError("snapshot_every must be >= 0");
    if (!(cfg.params.h > 0.0)) throw RangeError("time step must be > 0");
    const GridSpec& grid = ind0.grid;
    const std::size_t ones = ind0.count();
    if (ones == 0 || ones == grid.size()) throw RangeError("initial set must be nonempty and not full");

    const bool want_contours =
        cfg.diagnostics.contour || cfg.diagnostics.energy || cfg.diagnostics.velocity;
    auto op = SpectralOperator::three_scale(grid, cfg.params);
    auto smooth = SpectralOperator::single_scale(grid, smoothing_time(grid), 0.0);

    Trajectory tr;
    IndicatorField cur = ind0;
    std::vector<PolyCurve> contours;
    bool have_contours = false;
    double contour_sup_gradient = nan;  // of the current contours

    double sup_gradient = nan;
    auto measure = [&](FlowRecord& rec, int k) {
        sup_gradient = nan;
        rec.area = cur.area();
        rec.components = component_count(cur);
        rec.energy = nan;
        rec.max_displacement = nan;
        if (!want_contours) return;
        std::vector<PolyCurve> next;
        try {
            next = extract_contours(smooth.apply(cur), 0.5);
        } catch (const TopologyError& e) {
            tr.log.push_back("step " + std::to_string(k) + ": contour diagnostics skipped: " + e.what());
            have_contours = false;
            return;
        }
        const auto stats = contour_stats(next, grid, cfg.params.lambda);
        if (cfg.diagnostics.energy) rec.energy = stats.energy;
        sup_gradient = have_contours ? contour_sup_gradient : nan;
        contour_sup_gradient = stats.sup_gradient;
        if (cfg.diagnostics.velocity && have_contours && k > 0)
            rec.max_displacement = max_abs_displacement(contours, next, grid);
        contours = std::move(next);
        have_contours = true;
    };
    auto snapshot = [&](int k) {
        if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0)
            tr.snapshots.push_back({k, cur, have_contours ? contours : std::vector<PolyCurve>{}});
    };

    FlowRecord r0;
    measure(r0, 0);
    tr.records.push_back(r0);
    snapshot(0);

    for (int k = 1; k <= cfg.steps; ++k) {
        auto res = op.step(cur, cfg.params.level);
        cur = std::move(res.field);
        FlowRecord rec;
        rec.k = k;
        rec.t = k * cfg.params.h;
        if (res.status != StepStatus::ok) {
            rec.area = cur.area();
            rec.components = res.status == StepStatus::filled ? 1 : 0;
            rec.energy = nan;
            rec.max_displacement = nan;
            rec.status = res.status == StepStatus::collapsed ? FlowStatus::collapsed : FlowStatus::filled;
            tr.records.push_back(rec);
            tr.stop_reason = to_string(rec.status);
            tr.log.push_back("step " + std::to_string(k) + ": set " + tr.stop_reason + ", stopping");
            break;
        }
        measure(rec, k);
        // predicted motion uses the contours of the previous set
        const bool moving = !(sup_gradient * cfg.params.h < kFlatCells * grid.cell());
        if (!std::isnan(rec.max_displacement) && moving) {
            if (rec.max_displacement < 0.5 * grid.cell()) rec.status = FlowStatus::under_resolved;
            for (auto& w : resolution_guard(rec.max_displacement / cfg.params.h, cfg.params.h, grid))
                tr.log.push_back("step " + std::to_string(k) + ": " + w);
        }
        const double e_prev = tr.records.back().energy;
        if (!std::isnan(rec.energy) && !std::isnan(e_prev) && rec.energy > 1.05 * e_prev) {
            std::ostringstream os;
            os << "step " << k << ": energy rose from " << e_prev << " to " << rec.energy
               << " (beyond the 5% allowance)";
            tr.log.push_back(os.str());
        }
        tr.records.push_back(rec);
        snapshot(k);
        if (have_contours && seam_clearance(contours, grid) < cfg.clearance_cells * grid.cell()) {
            tr.stop_reason = "clearance";
            tr.log.push_back("step " + std::to_string(k) + ": contour within "
                             + std::to_string(cfg.clearance_cells) + " cells of the periodic seam, stopping");
            break;
        }
    }
    tr.final_field = std::move(cur);
    return tr;
}

std::vector<double> step_velocity_from_curve(const PolyCurve& reference,
                                             const std::vector<PolyCurve>& after, double h,
                                             const GridSpec& grid)
{
    if (!(h > 0.0)) throw RangeError("time step must be > 0");
    auto d = normal_displacement(reference, after, grid.side_length / 8);
    for (double& x : d) x /= h;
    return d;
}

std::vector<double> measure_step_velocity(const IndicatorField& before, const IndicatorField& after,
                                          double h, const GridSpec& grid)
{
    const auto cb = interface_contours(before);
    const auto ca = interface_contours(after);
    if (cb.empty() || ca.empty()) throw RangeError("measure_step_velocity: missing contour");
    std::vector<double> out;
    if (cb.size() == 1 && ca.size() == 1) {
        const auto ref = resample_uniform(cb[0], resample_count(cb[0], grid));
        return step_velocity_from_curve(ref, ca, h, grid);
    }
    std::vector<int> taken(ca.size(), 0);
    for (auto& c : cb) {
        const Vec2 p = curve_centroid(c);
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t j = 0; j < ca.size(); ++j) dist.push_back({norm(curve_centroid(ca[j]) - p), j});
        std::sort(dist.begin(), dist.end());
        if (dist.size() > 1 && dist[0].first > 0.5 * dist[1].first)
            throw RangeError("measure_step_velocity: ambiguous component pairing");
        if (taken[dist[0].second]++) throw RangeError("measure_step_velocity: components merge");
        const auto ref = resample_uniform(c, resample_count(c, grid));
        const auto v = step_velocity_from_curve(ref, {ca[dist[0].second]}, h, grid);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

}  // namespace wmbo
