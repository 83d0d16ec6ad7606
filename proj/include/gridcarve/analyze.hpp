#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gridcarve/assemble.hpp"
#include "gridcarve/embed.hpp"
#include "gridcarve/solve.hpp"

namespace gridcarve {

// Max over interior nodes of |u - exact|.
inline double error_inf(const Field& u, const Expr& exact, const EmbeddedMesh& m,
                        double t = 0.0) {
    double worst = 0.0;
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j)
            if (m.cls(j, k) == NodeClass::Interior)
                worst = std::max(worst,
                                 std::abs(u.at(j, k) - exact.eval(m.grid.x(j), m.grid.y(k), t)));
    return worst;
}

inline std::pair<Extremum, Extremum> extrema_interior(const Field& u, const EmbeddedMesh& m) {
    return interior_extrema(u, m);
}

struct OrderFit {
    double order = 0.0;
    bool exact = false; // truncation below the round-off floor at every level
};

// Truncation-order estimate of the discrete operator applied to phi: the
// operator at spacing dx is compared against itself at dx/16 (which carries
// a 256x smaller second-order term), and the log-log slope is fitted by
// least squares. Quadratic-exact inputs report the sentinel instead of a
// slope.
inline OrderFit consistency_order(const ProblemSpec& p, const Expr& phi,
                                  const std::vector<double>& dx_list) {
    if (!p.is_linear())
        throw SolveError("consistency order is defined for the linear kinds");
    if (dx_list.size() < 3)
        throw SolveError("consistency order needs at least 3 spacings");

    auto apply = [&](double x, double y, double h) {
        double lap;
        if (const auto* vs = std::get_if<VarCoeffSpec>(&p.kind)) {
            double ce = vs->coef.eval(x + 0.5 * h, y);
            double cw = vs->coef.eval(x - 0.5 * h, y);
            double cn = vs->coef.eval(x, y + 0.5 * h);
            double cs = vs->coef.eval(x, y - 0.5 * h);
            lap = (ce * (phi.eval(x + h, y) - phi.eval(x, y)) -
                   cw * (phi.eval(x, y) - phi.eval(x - h, y))) /
                      (h * h) +
                  (cn * (phi.eval(x, y + h) - phi.eval(x, y)) -
                   cs * (phi.eval(x, y) - phi.eval(x, y - h))) /
                      (h * h);
        } else {
            lap = (phi.eval(x + h, y) - 2.0 * phi.eval(x, y) + phi.eval(x - h, y)) / (h * h) +
                  (phi.eval(x, y + h) - 2.0 * phi.eval(x, y) + phi.eval(x, y - h)) / (h * h);
        }
        if (const auto* hs = std::get_if<HelmholtzSpec>(&p.kind))
            lap += hs->f.eval(x, y) * phi.eval(x, y);
        return lap;
    };

    std::vector<double> tau;
    bool all_below_floor = true;
    for (double dx : dx_list) {
        double worst = 0.0;
        int n = std::max(3, int(std::floor(1.0 / dx)) - 1);
        for (int k = 1; k <= n; ++k) {
            for (int j = 1; j <= n; ++j) {
                double x = j * dx, y = k * dx;
                worst = std::max(worst, std::abs(apply(x, y, dx) - apply(x, y, dx / 16.0)));
            }
        }
        tau.push_back(worst);
        if (worst > 1e-12 / (dx * dx))
            all_below_floor = false;
    }
    if (all_below_floor)
        return OrderFit{std::numeric_limits<double>::infinity(), true};

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < dx_list.size(); ++i) {
        double lx = std::log(dx_list[i]);
        double ly = std::log(std::max(tau[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = double(dx_list.size());
    return OrderFit{(n * sxy - sx * sy) / (n * sxx - sx * sx), false};
}

struct SweepRow {
    double dx = 0.0;
    MeshVariant variant = MeshVariant::OverBar;
    double u_min = 0.0, x_min = 0.0, y_min = 0.0;
    double u_max = 0.0, x_max = 0.0, y_max = 0.0;
    double error_inf = 0.0; // NaN when no exact solution is known
    long iterations = 0;
    double area_error = 0.0;
};

enum class SweepFailure { None, Mesh, Solver };

struct SweepReport {
    std::vector<SweepRow> rows; // sorted by decreasing dx
    SweepFailure failure = SweepFailure::None;
    double failed_dx = 0.0;
    std::string message;

    bool ok() const { return failure == SweepFailure::None; }
};

// Full pipeline per spacing: padded rectangle, mesh, connectivity check,
// assembly, Gauss-Seidel, error/extrema/area metrics. A failing level stops
// the sweep and leaves the completed rows in place.
inline SweepReport run_sweep(const DomainSpec& d, const ProblemSpec& p,
                             std::vector<double> dx_list, MeshVariant variant,
                             const IterConfig& cfg = {}, int area_samples = 16) {
    std::sort(dx_list.begin(), dx_list.end(), std::greater<>());
    SweepReport report;
    for (double dx : dx_list) {
        try {
            GridSpec g = build_rectangle(d, dx, dx);
            EmbeddedMesh m = build_mesh(d, g, variant);
            if (!check_connectivity(m))
                throw MeshError("interior not connected at dx=" + std::to_string(dx));
            DiscreteProblem dp = assemble_linear(p, m, 0.0);
            auto [f, rep] = solve_gauss_seidel(dp, cfg);
            if (!rep.converged)
                throw SolveError("gauss-seidel did not converge at dx=" + std::to_string(dx));

            SweepRow row;
            row.dx = dx;
            row.variant = variant;
            row.u_min = rep.min.value;
            row.x_min = rep.min.x;
            row.y_min = rep.min.y;
            row.u_max = rep.max.value;
            row.x_max = rep.max.x;
            row.y_max = rep.max.y;
            row.iterations = rep.iterations;
            row.error_inf = p.exact ? error_inf(f, *p.exact, m)
                                    : std::numeric_limits<double>::quiet_NaN();
            row.area_error = induced_region_area_error(m, d, area_samples);
            report.rows.push_back(row);
        } catch (const MeshError& e) {
            report.failure = SweepFailure::Mesh;
            report.failed_dx = dx;
            report.message = e.what();
            break;
        } catch (const SolveError& e) {
            report.failure = SweepFailure::Solver;
            report.failed_dx = dx;
            report.message = e.what();
            break;
        }
    }
    return report;
}

} // namespace gridcarve
