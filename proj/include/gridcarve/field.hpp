#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "gridcarve/embed.hpp"

namespace gridcarve {

// Node-indexed solution values over G_R, k-major. Exterior nodes hold NaN;
// the writers substitute the blanking sentinel on output.
struct Field {
    GridSpec grid;
    std::vector<double> v;

    static Field undefined(const GridSpec& g) {
        Field f;
        f.grid = g;
        f.v.assign(g.node_count(), std::numeric_limits<double>::quiet_NaN());
        return f;
    }

    double& at(int j, int k) { return v[grid.node_index(j, k)]; }
    double at(int j, int k) const { return v[grid.node_index(j, k)]; }
};

struct Extremum {
    double value = 0.0;
    double x = 0.0;
    double y = 0.0;
};

// Min and max over the interior nodes only; ties keep the first node in
// k-major order.
inline std::pair<Extremum, Extremum> interior_extrema(const Field& f, const EmbeddedMesh& m) {
    if (m.interior_count < 1)
        throw MeshError("extrema need at least one interior node");
    Extremum mn, mx;
    bool first = true;
    for (int k = 0; k <= m.grid.my; ++k) {
        for (int j = 0; j <= m.grid.mx; ++j) {
            if (m.cls(j, k) != NodeClass::Interior)
                continue;
            double u = f.at(j, k);
            double x = m.grid.x(j), y = m.grid.y(k);
            if (first) {
                mn = mx = Extremum{u, x, y};
                first = false;
                continue;
            }
            if (u < mn.value)
                mn = Extremum{u, x, y};
            if (u > mx.value)
                mx = Extremum{u, x, y};
        }
    }
    return {mn, mx};
}

// Max |f| over interior plus boundary nodes.
inline double max_abs(const Field& f, const EmbeddedMesh& m) {
    double best = 0.0;
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j)
            if (m.cls(j, k) != NodeClass::Exterior)
                best = std::max(best, std::abs(f.at(j, k)));
    return best;
}

inline double max_abs_diff(const Field& a, const Field& b, const EmbeddedMesh& m) {
    double best = 0.0;
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j)
            if (m.cls(j, k) != NodeClass::Exterior)
                best = std::max(best, std::abs(a.at(j, k) - b.at(j, k)));
    return best;
}

} // namespace gridcarve
