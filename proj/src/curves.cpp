#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wmbo/error.hpp"
#include "wmbo/geometry.hpp"

namespace wmbo {

namespace {

// Vertex k of the periodic extension of a closed curve.
Vec2 vertex(const PolyCurve& c, long k)
{
    const long m = static_cast<long>(c.size());
    long q = k >= 0 ? k / m : -((-k + m - 1) / m);
    const long r = k - q * m;
    return c.vertices[r] + static_cast<double>(q) * c.wrap;
}

void require_closed(const PolyCurve& c, const char* what)
{
    if (!c.closed) throw RangeError(std::string(what) + " needs a closed curve");
    if (c.size() < 3) throw RangeError(std::string(what) + " needs at least 3 vertices");
}

}  // namespace

double curve_length(const PolyCurve& c)
{
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) len += norm(c.vertices[k + 1] - c.vertices[k]);
    if (c.closed && c.size() > 1) len += norm(c.after_last() - c.vertices.back());
    return len;
}

double curve_area(const PolyCurve& c)
{
    require_closed(c, "curve_area");
    if (c.wraps()) throw RangeError("curve_area: curve closes only across the periodic seam");
    double a = 0.0;
    const std::size_t m = c.size();
    for (std::size_t k = 0; k < m; ++k) a += cross(c.vertices[k], c.vertices[(k + 1) % m]);
    return 0.5 * a;
}

Vec2 curve_centroid(const PolyCurve& c)
{
    Vec2 s;
    for (auto& v : c.vertices) s = s + v;
    return (1.0 / c.size()) * s;
}

PolyCurve resample_uniform(const PolyCurve& c, int m)
{
    if (m < 16) throw RangeError("resample_uniform needs m >= 16");
    require_closed(c, "resample_uniform");
    const double total = curve_length(c);
    if (!(total > 0.0)) throw RangeError("resample_uniform: zero-length curve");
    PolyCurve out;
    out.closed = true;
    out.wrap = c.wrap;
    out.vertices.reserve(m);
    const long nv = static_cast<long>(c.size());
    long seg = 0;
    double seg_start = 0.0;
    double seg_len = norm(vertex(c, 1) - vertex(c, 0));
    for (int k = 0; k < m; ++k) {
        const double s = total * k / m;
        while (s > seg_start + seg_len && seg < nv - 1) {
            seg_start += seg_len;
            ++seg;
            seg_len = norm(vertex(c, seg + 1) - vertex(c, seg));
        }
        const double t = seg_len > 0 ? (s - seg_start) / seg_len : 0.0;
        const Vec2 a = vertex(c, seg), b = vertex(c, seg + 1);
        out.vertices.push_back(a + t * (b - a));
    }
    return out;
}

int resample_count(const PolyCurve& c, const GridSpec& grid)
{
    return std::max(256, static_cast<int>(std::ceil(curve_length(c) / (2 * grid.cell()))));
}

CurveGeometry curve_geometry(const PolyCurve& c)
{
    require_closed(c, "curve_geometry");
    const long m = static_cast<long>(c.size());
    std::vector<double> d(m), theta(m);
    for (long k = 0; k < m; ++k) {
        const Vec2 t = vertex(c, k + 1) - vertex(c, k);
        d[k] = norm(t);
        theta[k] = std::atan2(t.y, t.x);
    }
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= m;
    double worst = 0.0;
    for (double x : d) worst = std::max(worst, std::abs(x - mean) / mean);
    if (worst > 0.01) {
        std::ostringstream os;
        os << "vertex spacing varies by " << 100 * worst << "% (> 1%): resample the curve first";
        throw RangeError(os.str());
    }

    CurveGeometry g;
    g.vertices = c.vertices;
    g.spacing = mean;
    g.arclengths.resize(m);
    g.kappa.resize(m);
    g.kappa_ss.resize(m);
    double s = 0.0;
    for (long k = 0; k < m; ++k) {
        g.arclengths[k] = s;
        s += d[k];
    }
    g.length = s;
    for (long k = 0; k < m; ++k) {
        const long km = (k + m - 1) % m;
        double turn = theta[k] - theta[km];
        turn -= 2 * std::numbers::pi * std::round(turn / (2 * std::numbers::pi));
        g.kappa[k] = -turn / (0.5 * (d[k] + d[km]));
    }
    for (long k = 0; k < m; ++k) {
        const double h = 0.5 * (d[k] + d[(k + m - 1) % m]);
        g.kappa_ss[k] = (g.kappa[(k + 1) % m] - 2 * g.kappa[k] + g.kappa[(k + m - 1) % m]) / (h * h);
    }
    return g;
}

double willmore_energy(const CurveGeometry& g, double lambda)
{
    const std::size_t m = g.kappa.size();
    double e = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double next = k + 1 < m ? g.arclengths[k + 1] : g.length;
        const double prev = k > 0 ? g.arclengths[k - 1] : g.arclengths[m - 1] - g.length;
        e += (0.5 * g.kappa[k] * g.kappa[k] + lambda) * 0.5 * (next - prev);
    }
    return e;
}

std::vector<double> l2_gradient(const CurveGeometry& g, double lambda)
{
    std::vector<double> out(g.kappa.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double kap = g.kappa[k];
        out[k] = g.kappa_ss[k] + 0.5 * kap * kap * kap - lambda * kap;
    }
    return out;
}

std::vector<double> normal_displacement(const PolyCurve& old,
                                        const std::vector<PolyCurve>& new_curves, double window)
{
    require_closed(old, "normal_displacement");
    if (new_curves.empty()) throw RangeError("normal_displacement: no target curves");
    struct Seg {
        Vec2 a, b;
    };
    std::vector<Seg> segs;
    for (auto& c : new_curves) {
        for (std::size_t k = 0; k + 1 < c.size(); ++k) segs.push_back({c.vertices[k], c.vertices[k + 1]});
        if (c.closed && c.size() > 1) segs.push_back({c.vertices.back(), c.after_last()});
    }
    const long m = static_cast<long>(old.size());
    std::vector<double> out(m, std::numeric_limits<double>::quiet_NaN());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < m; ++k) {
        const Vec2 p = old.vertices[k];
        Vec2 t = vertex(old, k + 1) - vertex(old, k - 1);
        t = (1.0 / norm(t)) * t;
        const Vec2 nrm{t.y, -t.x};
        double best = std::numeric_limits<double>::infinity();
        for (auto& s : segs) {
            const Vec2 e = s.b - s.a;
            const double den = cross(nrm, e);
            if (den == 0.0) continue;
            const Vec2 w = s.a - p;
            const double dist = cross(w, e) / den;   // along the normal
            const double u = cross(w, nrm) / den;    // along the segment
            if (u < 0.0 || u > 1.0 || std::abs(dist) > window) continue;
            if (std::abs(dist) < std::abs(best)) best = dist;
        }
        if (std::isfinite(best)) out[k] = best;
    }
    return out;
}

}  // namespace wmbo
