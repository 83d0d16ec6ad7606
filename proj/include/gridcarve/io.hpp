#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

#include "gridcarve/analyze.hpp"
#include "gridcarve/assemble.hpp"
#include "gridcarve/embed.hpp"
#include "gridcarve/field.hpp"

namespace gridcarve {

// Exterior nodes are written as this blanking value so viewers can mask them.
inline constexpr double kBlank = -1e30;

namespace detail {

// 17 significant digits round-trip doubles exactly
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline char class_letter(NodeClass c) {
    return c == NodeClass::Interior ? 'I' : c == NodeClass::Boundary ? 'B' : 'E';
}

} // namespace detail

// `j,k,x,y,class` per node of G_R, k-major rows.
inline void write_mesh_csv(std::ostream& os, const EmbeddedMesh& m) {
    os << "j,k,x,y,class\n";
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j)
            os << j << ',' << k << ',' << detail::g17(m.grid.x(j)) << ','
               << detail::g17(m.grid.y(k)) << ',' << detail::class_letter(m.cls(j, k)) << '\n';
}

inline void write_solution_csv(std::ostream& os, const Field& f, const EmbeddedMesh& m) {
    os << "j,k,x,y,class,u\n";
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j) {
            double v = f.at(j, k);
            os << j << ',' << k << ',' << detail::g17(m.grid.x(j)) << ','
               << detail::g17(m.grid.y(k)) << ',' << detail::class_letter(m.cls(j, k)) << ','
               << detail::g17(std::isfinite(v) ? v : kBlank) << '\n';
        }
}

// Same node layout as the mesh dump plus the snapshot time.
inline void write_snapshot_csv(std::ostream& os, const Field& f, const EmbeddedMesh& m,
                               double t) {
    os << "j,k,x,y,class,t,u\n";
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j) {
            double v = f.at(j, k);
            os << j << ',' << k << ',' << detail::g17(m.grid.x(j)) << ','
               << detail::g17(m.grid.y(k)) << ',' << detail::class_letter(m.cls(j, k)) << ','
               << detail::g17(t) << ',' << detail::g17(std::isfinite(v) ? v : kBlank) << '\n';
        }
}

inline void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
    os << "dx,variant,u_min,x_min,y_min,u_max,x_max,y_max,error_inf,iterations,area_error\n";
    for (const SweepRow& r : rep.rows) {
        os << detail::g17(r.dx) << ','
           << (r.variant == MeshVariant::OverBar ? "overbar" : "underbar") << ','
           << detail::g17(r.u_min) << ',' << detail::g17(r.x_min) << ','
           << detail::g17(r.y_min) << ',' << detail::g17(r.u_max) << ','
           << detail::g17(r.x_max) << ',' << detail::g17(r.y_max) << ','
           << detail::g17(r.error_inf) << ',' << r.iterations << ','
           << detail::g17(r.area_error) << '\n';
    }
}

// `row,center,cE,cW,cN,cS,rhs` per unknown (--dump-system).
inline void write_system_csv(std::ostream& os, const DiscreteProblem& dp) {
    os << "row,center,cE,cW,cN,cS,rhs\n";
    for (std::size_t r = 0; r < dp.rows.size(); ++r) {
        const StencilRow& row = dp.rows[r];
        os << r << ',' << detail::g17(row.center) << ',' << detail::g17(row.ce) << ','
           << detail::g17(row.cw) << ',' << detail::g17(row.cn) << ',' << detail::g17(row.cs)
           << ',' << detail::g17(row.rhs) << '\n';
    }
}

// Legacy ASCII STRUCTURED_POINTS over the full G_R lattice; exterior nodes
// carry the blanking value.
inline void write_vtk(std::ostream& os, const Field& f, const EmbeddedMesh& m,
                      std::string_view name) {
    const GridSpec& g = m.grid;
    os << "# vtk DataFile Version 3.0\n";
    os << name << '\n';
    os << "ASCII\n";
    os << "DATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << g.nx() << ' ' << g.ny() << " 1\n";
    os << "ORIGIN " << detail::g17(g.box.x0) << ' ' << detail::g17(g.box.y0) << " 0\n";
    os << "SPACING " << detail::g17(g.dx) << ' ' << detail::g17(g.dy) << " 1\n";
    os << "POINT_DATA " << g.node_count() << '\n';
    os << "SCALARS " << name << " double 1\n";
    os << "LOOKUP_TABLE default\n";
    for (int k = 0; k <= g.my; ++k)
        for (int j = 0; j <= g.mx; ++j) {
            double v = f.at(j, k);
            os << detail::g17(std::isfinite(v) ? v : kBlank) << '\n';
        }
}

} // namespace gridcarve
