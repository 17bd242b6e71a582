#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wmbo/flow.hpp"
#include "wmbo/geometry.hpp"
#include "wmbo/spectral.hpp"

namespace wmbo {

// Binary P5, 0 outside / 255 inside, first image row is the top (largest y).
void write_pgm(const std::filesystem::path& path, const IndicatorField& ind);
IndicatorField read_pgm(const std::filesystem::path& path, double side_length);

// Indicator as gray runs with the contours on top; viewBox is the domain,
// stroke width one cell.
void write_svg_overlay(const std::filesystem::path& path, const IndicatorField& ind,
                       const std::vector<PolyCurve>& curves);

// Log-log scatter of y against x with a slope-1 guide through the last point.
void write_loglog_svg(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<double>& y, const std::string& xlabel, const std::string& ylabel);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);
void write_curve_csv(const std::filesystem::path& path, const CurveGeometry& g,
                     const std::vector<double>& grad);

// Throws UsageError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace wmbo
