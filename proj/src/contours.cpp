#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "wmbo/error.hpp"
#include "wmbo/geometry.hpp"

namespace wmbo {

namespace {

// Edge ids: horizontal edge from node (i,j) to (i+1,j) is 2*(i*n+j), vertical edge
// from (i,j) to (i,j+1) is 2*(i*n+j)+1 (indices taken modulo n).
struct Marcher {
    const RealField& f;
    double level;
    bool periodic;
    int n;
    double cell;

    std::int64_t hedge(int i, int j) const { return 2 * (std::int64_t(i % n) * n + j % n); }
    std::int64_t vedge(int i, int j) const { return hedge(i, j) + 1; }

    double value(int i, int j) const { return f.values[f.grid.index(i % n, j % n)]; }

    Vec2 crossing(std::int64_t id) const
    {
        const std::int64_t node = id / 2;
        const int i = static_cast<int>(node / n), j = static_cast<int>(node % n);
        const double fa = value(i, j);
        const bool vertical = id % 2;
        const double fb = vertical ? value(i, j + 1) : value(i + 1, j);
        const double t = (level - fa) / (fb - fa);
        const double x = (i + 0.5) * cell, y = (j + 0.5) * cell;
        return vertical ? Vec2{x, y + t * cell} : Vec2{x + t * cell, y};
    }
};

}  // namespace

std::vector<PolyCurve> extract_contours(const RealField& field, double level, ContourOptions opt)
{
    validate(field.grid);
    for (double v : field.values)
        if (!std::isfinite(v)) throw RangeError("contour field has non-finite values");
    const int n = field.grid.n;
    const double L = field.grid.side_length;
    Marcher mc{field, level, opt.periodic, n, field.grid.cell()};

    std::unordered_map<std::int64_t, std::int64_t> next;
    std::vector<std::int64_t> order;  // exit edges in scan order, for deterministic output
    std::unordered_set<std::int64_t> is_end;
    const int cells = opt.periodic ? n : n - 1;
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            const double v[4] = {mc.value(i, j), mc.value(i + 1, j), mc.value(i + 1, j + 1),
                                 mc.value(i, j + 1)};
            bool in[4];
            int mask = 0;
            for (int k = 0; k < 4; ++k) {
                in[k] = v[k] >= level;
                mask |= in[k] << k;
            }
            if (mask == 0 || mask == 15) continue;
            const std::int64_t edge[4] = {mc.hedge(i, j), mc.vedge(i + 1, j), mc.hedge(i, j + 1),
                                          mc.vedge(i, j)};
            int exits[2], entries[2], ne = 0, nn = 0;
            for (int k = 0; k < 4; ++k) {
                const bool a = in[k], b = in[(k + 1) % 4];
                if (a && !b) exits[ne++] = k;
                if (!a && b) entries[nn++] = k;
            }
            auto link = [&](int ek, int nk) {
                next[edge[ek]] = edge[nk];
                order.push_back(edge[ek]);
                is_end.insert(edge[nk]);
            };
            if (ne == 1) {
                link(exits[0], entries[0]);
            } else {
                const bool center_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                for (int e = 0; e < 2; ++e) {
                    const int k = exits[e];
                    const int target = center_in ? (k + 1) % 4 : (k + 3) % 4;
                    link(k, target);
                }
            }
        }
    }

    std::vector<PolyCurve> curves;
    std::unordered_set<std::int64_t> used;
    auto nearest_image = [L](Vec2 p, Vec2 ref) {
        p.x -= L * std::round((p.x - ref.x) / L);
        p.y -= L * std::round((p.y - ref.y) / L);
        return p;
    };
    auto trace = [&](std::int64_t start, bool open) {
        PolyCurve c;
        c.closed = !open;
        std::int64_t e = start;
        Vec2 prev = mc.crossing(e);
        c.vertices.push_back(prev);
        used.insert(e);
        for (;;) {
            auto it = next.find(e);
            if (it == next.end()) {
                if (!open) throw TopologyError("contour chain ends without closing");
                break;
            }
            e = it->second;
            Vec2 p = opt.periodic ? nearest_image(mc.crossing(e), prev) : mc.crossing(e);
            if (e == start) {
                const Vec2 w = p - c.vertices.front();
                c.wrap = {L * std::round(w.x / L), L * std::round(w.y / L)};
                break;
            }
            if (used.count(e)) throw TopologyError("contour chain revisits an edge");
            used.insert(e);
            c.vertices.push_back(p);
            prev = p;
        }
        // drop repeated vertices (crossings that sit exactly on a node)
        const double eps = 1e-12 * L;
        std::vector<Vec2> clean;
        for (auto& p : c.vertices)
            if (clean.empty() || norm(p - clean.back()) > eps) clean.push_back(p);
        if (c.closed)
            while (clean.size() > 1 && norm(clean.back() - (clean.front() + c.wrap)) <= eps)
                clean.pop_back();
        c.vertices = std::move(clean);
        return c;
    };

    if (!opt.periodic)
        for (auto e : order)
            if (!is_end.count(e) && !used.count(e)) curves.push_back(trace(e, true));
    for (auto e : order) {
        if (used.count(e)) continue;
        if (opt.periodic && !is_end.count(e)) throw TopologyError("open contour chain on the torus");
        curves.push_back(trace(e, false));
    }
    return curves;
}

}  // namespace wmbo
