#pragma once

#include <string>
#include <variant>
#include <vector>

#include "wmbo/grid.hpp"
#include "wmbo/spectral.hpp"

namespace wmbo {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

// Positions of Circle centers and HalfPlane offsets are relative to the domain center.
struct Circle {
    Vec2 center;
    double radius = 0.25;
};
struct Cassini {
    double a = 0.6825, b = 0.678;
};
struct Rose {};
// axis 0: horizontal band |y - L/2| <= half_width; axis 1: vertical band.
struct Band {
    int axis = 0;
    double half_width = 0.25;
};
// {x : normal . (x - c) <= offset}
struct HalfPlane {
    Vec2 normal{0.0, 1.0};
    double offset = 0.0;
};

using Shape = std::variant<Circle, Cassini, Rose, Band, HalfPlane>;

// Mini-DSL: circle:R[,dx,dy]  cassini:a,b  rose  band:axis,half_width  halfplane:nx,ny,offset
Shape parse_shape(const std::string& text);
std::string to_string(const Shape& s);

bool contains(const Shape& s, Vec2 p, const GridSpec& grid);

// Closed, oriented polyline; the region is on the left. A curve that closes only
// on the torus carries the translation `wrap` taking last-vertex successor to the first.
struct PolyCurve {
    std::vector<Vec2> vertices;
    bool closed = true;
    Vec2 wrap;

    bool wraps() const { return wrap.x != 0.0 || wrap.y != 0.0; }
    std::size_t size() const { return vertices.size(); }
    // successor of the last vertex for closed curves
    Vec2 after_last() const { return vertices.front() + wrap; }
};

struct CurveGeometry {
    std::vector<Vec2> vertices;
    std::vector<double> arclengths;
    std::vector<double> kappa;     // -1/R on a counterclockwise circle
    std::vector<double> kappa_ss;
    double length = 0.0;
    double spacing = 0.0;
};

// Analytic boundary of a bounded shape, counterclockwise, m vertices in domain coordinates.
PolyCurve boundary_curve(const Shape& s, const GridSpec& grid, int m);

struct Raster {
    IndicatorField field;
    std::vector<std::string> warnings;
};

Raster rasterize(const Shape& s, const GridSpec& grid, Exec exec = Exec::parallel);

struct ContourOptions {
    bool periodic = true;
};

std::vector<PolyCurve> extract_contours(const RealField& field, double level,
                                        ContourOptions opt = {});

double curve_length(const PolyCurve& c);
double curve_area(const PolyCurve& c);
Vec2 curve_centroid(const PolyCurve& c);
PolyCurve resample_uniform(const PolyCurve& c, int m);
int resample_count(const PolyCurve& c, const GridSpec& grid);

CurveGeometry curve_geometry(const PolyCurve& c);
double willmore_energy(const CurveGeometry& g, double lambda);
std::vector<double> l2_gradient(const CurveGeometry& g, double lambda);

// Signed distance along the outward normal (t_y, -t_x) from each vertex of `old`
// to the nearest crossing of `new_curves` within +-window; NaN when none is found.
std::vector<double> normal_displacement(const PolyCurve& old,
                                        const std::vector<PolyCurve>& new_curves, double window);

// Number of 4-connected components of ones on the torus.
int component_count(const IndicatorField& ind);

}  // namespace wmbo
