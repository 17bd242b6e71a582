#pragma once

#include <string>
#include <vector>

#include "wmbo/geometry.hpp"
#include "wmbo/spectral.hpp"

namespace wmbo {

struct DiagnosticFlags {
    bool area = true;
    bool energy = true;
    bool contour = true;
    bool velocity = true;
};

struct FlowConfig {
    ThresholdParams params;
    int steps = 1;
    int snapshot_every = 0;
    DiagnosticFlags diagnostics;
    double clearance_cells = 8.0;
};

enum class FlowStatus { ok, collapsed, filled, under_resolved };
const char* to_string(FlowStatus s);

struct FlowRecord {
    int k = 0;
    double t = 0.0;
    double area = 0.0;
    int components = 0;
    double energy = 0.0;            // NaN when contours are unavailable
    double max_displacement = 0.0;  // NaN at k = 0 or without contours
    FlowStatus status = FlowStatus::ok;
};

struct Snapshot {
    int k = 0;
    IndicatorField field;
    std::vector<PolyCurve> contours;
};

struct Trajectory {
    std::vector<FlowRecord> records;
    std::vector<Snapshot> snapshots;
    std::vector<std::string> log;
    std::string stop_reason;  // empty when all steps ran
    IndicatorField final_field;
};

// Sub-cell boundary of an indicator: level-1/2 contours after a short
// single-scale propagation (kernel width two cells).
std::vector<PolyCurve> interface_contours(const IndicatorField& ind);

Trajectory evolve(const IndicatorField& ind0, const FlowConfig& cfg);

// Normal velocity on the uniformly resampled boundary of `before`.
std::vector<double> measure_step_velocity(const IndicatorField& before, const IndicatorField& after,
                                          double h, const GridSpec& grid);

// Same, with a caller-supplied closed reference curve (already resampled).
std::vector<double> step_velocity_from_curve(const PolyCurve& reference,
                                             const std::vector<PolyCurve>& after, double h,
                                             const GridSpec& grid);

}  // namespace wmbo
