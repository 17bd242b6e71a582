#include "wmbo/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wmbo/error.hpp"
#include "wmbo/format.hpp"

namespace wmbo {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
    if (!out) throw UsageError("cannot write " + path.string());
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_pgm(const fs::path& path, const IndicatorField& ind)
{
    const int n = ind.grid.n;
    std::string data = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    data.reserve(data.size() + ind.grid.size());
    for (int row = 0; row < n; ++row) {
        const int j = n - 1 - row;
        for (int i = 0; i < n; ++i) data.push_back(ind.at(i, j) ? char(255) : char(0));
    }
    write_text(path, data);
}

IndicatorField read_pgm(const fs::path& path, double side_length)
{
    const std::string s = read_text(path);
    std::istringstream in(s);
    std::string magic;
    int w = 0, h = 0, maxv = 0;
    in >> magic >> w >> h >> maxv;
    if (magic != "P5" || w != h || maxv != 255) throw UsageError("unsupported PGM " + path.string());
    in.get();
    GridSpec g{side_length, w};
    validate(g);
    auto ind = IndicatorField::empty(g);
    for (int row = 0; row < h; ++row)
        for (int i = 0; i < w; ++i) {
            const int c = in.get();
            if (c == EOF) throw UsageError("truncated PGM " + path.string());
            ind.values[g.index(i, h - 1 - row)] = c >= 128 ? 1 : 0;
        }
    return ind;
}

void write_svg_overlay(const fs::path& path, const IndicatorField& ind, const std::vector<PolyCurve>& curves)
{
    const int n = ind.grid.n;
    const double L = ind.grid.side_length, c = ind.grid.cell();
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " << fmt(L) << " "
       << fmt(L) << "\" width=\"800\" height=\"800\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << fmt(L) << "\" height=\"" << fmt(L) << "\" fill=\"black\"/>\n"
       << "<g transform=\"matrix(1 0 0 -1 0 " << fmt(L) << ")\">\n<g fill=\"#bbbbbb\">\n";
    for (int j = 0; j < n; ++j) {
        int i = 0;
        while (i < n) {
            if (!ind.at(i, j)) {
                ++i;
                continue;
            }
            int e = i;
            while (e < n && ind.at(e, j)) ++e;
            os << "<rect x=\"" << fmt(i * c) << "\" y=\"" << fmt(j * c) << "\" width=\"" << fmt((e - i) * c)
               << "\" height=\"" << fmt(c) << "\"/>\n";
            i = e;
        }
    }
    os << "</g>\n<g fill=\"none\" stroke=\"red\" stroke-width=\"" << fmt(c) << "\">\n";
    for (auto& curve : curves) {
        if (curve.vertices.empty()) continue;
        os << "<path d=\"M";
        for (std::size_t k = 0; k < curve.size(); ++k)
            os << (k ? " L" : "") << fmt(curve.vertices[k].x) << "," << fmt(curve.vertices[k].y);
        if (curve.closed) {
            const Vec2 e = curve.after_last();
            os << " L" << fmt(e.x) << "," << fmt(e.y);
        }
        os << "\"/>\n";
    }
    os << "</g>\n</g>\n</svg>\n";
    write_text(path, os.str());
}

void write_loglog_svg(const fs::path& path, const std::vector<double>& x, const std::vector<double>& y,
                      const std::string& xlabel, const std::string& ylabel)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0 && y[i] > 0 && std::isfinite(y[i])) {
            lx.push_back(std::log10(x[i]));
            ly.push_back(std::log10(y[i]));
        }
    const double W = 480, H = 360, m = 50;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    if (!lx.empty()) {
        double x0 = std::floor(*std::min_element(lx.begin(), lx.end()));
        double x1 = std::ceil(*std::max_element(lx.begin(), lx.end()));
        double y0 = std::floor(*std::min_element(ly.begin(), ly.end()));
        double y1 = std::ceil(*std::max_element(ly.begin(), ly.end()));
        if (x1 == x0) x1 += 1;
        if (y1 == y0) y1 += 1;
        auto px = [&](double v) { return m + (v - x0) / (x1 - x0) * (W - 2 * m); };
        auto py = [&](double v) { return H - m - (v - y0) / (y1 - y0) * (H - 2 * m); };
        os << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << m << "\" y=\"" << m << "\" width=\""
           << W - 2 * m << "\" height=\"" << H - 2 * m << "\"/></g>\n"
           << "<g font-size=\"11\" font-family=\"sans-serif\">\n";
        for (double d = x0; d <= x1 + 1e-9; d += 1)
            os << "<text x=\"" << fmt(px(d)) << "\" y=\"" << H - m + 15 << "\" text-anchor=\"middle\">1e"
               << d << "</text>\n";
        for (double d = y0; d <= y1 + 1e-9; d += 1)
            os << "<text x=\"" << m - 5 << "\" y=\"" << fmt(py(d)) << "\" text-anchor=\"end\">1e" << d
               << "</text>\n";
        os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel
           << "</text>\n<text x=\"12\" y=\"" << H / 2 << "\" transform=\"rotate(-90 12 " << H / 2
           << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n</g>\n";
        // O(h) guide through the last point
        const double gx0 = x0, gx1 = x1, gy = ly.back() - lx.back();
        os << "<line x1=\"" << fmt(px(gx0)) << "\" y1=\"" << fmt(py(gx0 + gy)) << "\" x2=\"" << fmt(px(gx1))
           << "\" y2=\"" << fmt(py(gx1 + gy)) << "\" stroke=\"orange\"/>\n<g fill=\"blue\">\n";
        for (std::size_t i = 0; i < lx.size(); ++i)
            os << "<circle cx=\"" << fmt(px(lx[i])) << "\" cy=\"" << fmt(py(ly[i])) << "\" r=\"4\"/>\n";
        os << "</g>\n";
    }
    os << "</svg>\n";
    write_text(path, os.str());
}

void write_trajectory_csv(const fs::path& path, const Trajectory& tr)
{
    std::ostringstream os;
    os << "k,t,area,components,energy,max_disp,status\r\n";
    for (auto& r : tr.records)
        os << r.k << "," << fmt(r.t) << "," << fmt(r.area) << "," << r.components << "," << fmt(r.energy)
           << "," << fmt(r.max_displacement) << "," << to_string(r.status) << "\r\n";
    write_text(path, os.str());
}

void write_curve_csv(const fs::path& path, const CurveGeometry& g, const std::vector<double>& grad)
{
    std::ostringstream os;
    os << "s,x,y,kappa,kappa_ss,gradE\r\n";
    for (std::size_t k = 0; k < g.kappa.size(); ++k)
        os << fmt(g.arclengths[k]) << "," << fmt(g.vertices[k].x) << "," << fmt(g.vertices[k].y) << ","
           << fmt(g.kappa[k]) << "," << fmt(g.kappa_ss[k]) << "," << fmt(grad[k]) << "\r\n";
    write_text(path, os.str());
}

}  // namespace wmbo
