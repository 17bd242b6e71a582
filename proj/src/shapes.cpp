#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wmbo/error.hpp"
#include "wmbo/format.hpp"
#include "wmbo/geometry.hpp"

namespace wmbo {

namespace {

constexpr double pi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec2 domain_center(const GridSpec& g) { return {0.5 * g.side_length, 0.5 * g.side_length}; }

double rose_radius(double c) { return 0.5 + (16 * std::pow(c, 5) - 20 * c * c * c + 5 * c) / 3.0; }

std::vector<double> numbers(const std::string& args, std::size_t expect_min, std::size_t expect_max,
                            const std::string& name)
{
    std::vector<double> v;
    if (!args.empty())
        for (auto& s : split(args, ',')) v.push_back(parse_double(s));
    if (v.size() < expect_min || v.size() > expect_max)
        throw UsageError("wrong number of arguments for shape '" + name + "'");
    return v;
}

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Shape parse_shape(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (name == "circle") {
        auto v = numbers(args, 1, 3, name);
        if (v.size() == 2) throw UsageError("circle takes R or R,dx,dy");
        if (!(v[0] > 0)) throw UsageError("circle radius must be > 0");
        return Circle{v.size() == 3 ? Vec2{v[1], v[2]} : Vec2{}, v[0]};
    }
    if (name == "cassini") {
        auto v = numbers(args, 2, 2, name);
        if (!(v[0] >= v[1] && v[1] > 0)) throw UsageError("cassini needs a >= b > 0");
        return Cassini{v[0], v[1]};
    }
    if (name == "rose") {
        numbers(args, 0, 0, name);
        return Rose{};
    }
    if (name == "band") {
        auto v = numbers(args, 2, 2, name);
        if (v[0] != 0 && v[0] != 1) throw UsageError("band axis must be 0 or 1");
        return Band{static_cast<int>(v[0]), v[1]};
    }
    if (name == "halfplane") {
        auto v = numbers(args, 3, 3, name);
        const double l = std::hypot(v[0], v[1]);
        if (!(l > 0)) throw UsageError("halfplane normal must be nonzero");
        return HalfPlane{{v[0] / l, v[1] / l}, v[2]};
    }
    throw UsageError("unknown shape '" + name + "'");
}

std::string to_string(const Shape& s)
{
    return std::visit(
        overloaded{
            [](const Circle& c) {
                return "circle:" + fmt(c.radius) + "," + fmt(c.center.x) + "," + fmt(c.center.y);
            },
            [](const Cassini& c) { return "cassini:" + fmt(c.a) + "," + fmt(c.b); },
            [](const Rose&) { return std::string("rose"); },
            [](const Band& b) { return "band:" + std::to_string(b.axis) + "," + fmt(b.half_width); },
            [](const HalfPlane& h) {
                return "halfplane:" + fmt(h.normal.x) + "," + fmt(h.normal.y) + "," + fmt(h.offset);
            },
        },
        s);
}

bool contains(const Shape& s, Vec2 p, const GridSpec& grid)
{
    const Vec2 q = p - domain_center(grid);
    return std::visit(
        overloaded{
            [&](const Circle& c) {
                const Vec2 d = q - c.center;
                return dot(d, d) <= c.radius * c.radius;
            },
            [&](const Cassini& c) {
                const double x2 = q.x * q.x, y2 = q.y * q.y;
                const double a4 = std::pow(c.a, 4), b4 = std::pow(c.b, 4);
                return (x2 + y2) * (x2 + y2) - 2 * c.b * c.b * (x2 - y2) <= a4 - b4;
            },
            [&](const Rose&) {
                const double rr = dot(q, q);
                if (rr == 0.0) return true;
                const double r = rose_radius(q.x / std::sqrt(rr));
                return rr <= std::max(0.01, r * r);
            },
            [&](const Band& b) { return std::abs(b.axis == 0 ? q.y : q.x) <= b.half_width; },
            [&](const HalfPlane& h) { return dot(h.normal, q) <= h.offset; },
        },
        s);
}

PolyCurve boundary_curve(const Shape& s, const GridSpec& grid, int m)
{
    if (m < 8) throw RangeError("boundary curve needs at least 8 vertices");
    const Vec2 c0 = domain_center(grid);
    PolyCurve curve;
    curve.vertices.reserve(m);
    auto radial = [&](auto radius, Vec2 center) {
        for (int k = 0; k < m; ++k) {
            const double th = 2 * pi * k / m;
            const double r = radius(th);
            curve.vertices.push_back(c0 + center + Vec2{r * std::cos(th), r * std::sin(th)});
        }
    };
    std::visit(overloaded{
                   [&](const Circle& c) { radial([&](double) { return c.radius; }, c.center); },
                   [&](const Cassini& c) {
                       const double a4 = std::pow(c.a, 4), b4 = std::pow(c.b, 4), b2 = c.b * c.b;
                       radial(
                           [&](double th) {
                               const double c2 = std::cos(2 * th);
                               return std::sqrt(b2 * c2 + std::sqrt(b4 * c2 * c2 + a4 - b4));
                           },
                           Vec2{});
                   },
                   [&](const Rose&) {
                       radial([](double th) { return std::max(0.1, rose_radius(std::cos(th))); },
                              Vec2{});
                   },
                   [](const Band&) { throw RangeError("band has no bounded boundary curve"); },
                   [](const HalfPlane&) {
                       throw RangeError("half-plane has no bounded boundary curve");
                   },
               },
               s);
    return curve;
}

Raster rasterize(const Shape& s, const GridSpec& grid, Exec exec)
{
    validate(grid);
    Raster out{IndicatorField::empty(grid), {}};
    const int n = grid.n;
    auto fill_row = [&](int i) {
        const double x = grid.center(i);
        for (int j = 0; j < n; ++j)
            out.field.values[grid.index(i, j)] = contains(s, {x, grid.center(j)}, grid) ? 1 : 0;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) fill_row(i);
    } else {
        for (int i = 0; i < n; ++i) fill_row(i);
    }

    const double L = grid.side_length;
    double clearance = std::numeric_limits<double>::infinity();
    if (auto* b = std::get_if<Band>(&s)) {
        clearance = 0.5 * L - b->half_width;
    } else if (std::holds_alternative<HalfPlane>(s)) {
        out.warnings.push_back("half-plane is not periodic: the domain seam acts as a second interface");
    } else {
        const auto curve = boundary_curve(s, grid, 4096);
        for (auto& v : curve.vertices)
            clearance = std::min({clearance, v.x, v.y, L - v.x, L - v.y});
    }
    if (clearance < 4 * grid.cell()) {
        std::ostringstream os;
        os << "shape clearance to the periodic seam is " << clearance / grid.cell()
           << " cells (< 4): wrap-around contamination";
        out.warnings.push_back(os.str());
    }
    return out;
}

int component_count(const IndicatorField& ind)
{
    const int n = ind.grid.n;
    std::vector<int> label(ind.grid.size(), -1);
    std::vector<std::size_t> stack;
    int count = 0;
    for (std::size_t start = 0; start < label.size(); ++start) {
        if (!ind.values[start] || label[start] >= 0) continue;
        label[start] = count;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(p / n), j = static_cast<int>(p % n);
            const std::size_t nb[4] = {ind.grid.index((i + 1) % n, j), ind.grid.index((i + n - 1) % n, j),
                                       ind.grid.index(i, (j + 1) % n), ind.grid.index(i, (j + n - 1) % n)};
            for (auto q : nb)
                if (ind.values[q] && label[q] < 0) {
                    label[q] = count;
                    stack.push_back(q);
                }
        }
        ++count;
    }
    return count;
}

}  // namespace wmbo
