#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gridcarve/assemble.hpp"
#include "gridcarve/errors.hpp"
#include "gridcarve/solve.hpp"

namespace gridcarve {

struct TimeConfig {
    double dt = 0.0;
    double t0 = 0.0;
    long steps = 0;
    double nu = 1.0;
    enum class Scheme { Explicit, Implicit } scheme = Scheme::Explicit;
    std::vector<double> snapshot_times;
};

// Largest stable forward-Euler step for the 5-point heat stencil.
inline double cfl_limit(const EmbeddedMesh& m, double nu) {
    if (!(nu > 0.0))
        throw TimestepError("diffusivity must be positive");
    double ax = 1.0 / (m.grid.dx * m.grid.dx);
    double ay = 1.0 / (m.grid.dy * m.grid.dy);
    return 1.0 / (2.0 * nu * (ax + ay));
}

// u^0 from the initial-condition expression on interior and boundary nodes.
inline Field initial_field(const EmbeddedMesh& m, const ProblemSpec& p, double t0) {
    if (!p.initial)
        throw TimestepError("time stepping needs an initial-condition expression");
    Field f = Field::undefined(m.grid);
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j)
            if (m.cls(j, k) != NodeClass::Exterior)
                f.at(j, k) = p.initial->eval(m.grid.x(j), m.grid.y(k), t0);
    return f;
}

// One forward-Euler update of the interior, then the boundary is refreshed
// from the Dirichlet data at the end-of-step time t0 + (n+1)*dt. Stability
// is the caller's concern, not a precondition.
inline Field step_explicit(const Field& field, const EmbeddedMesh& m, const ProblemSpec& p,
                           const TimeConfig& tc, long n) {
    if (!(tc.dt > 0.0))
        throw TimestepError("time step must be positive");
    const GridSpec& g = m.grid;
    const double rx = tc.nu * tc.dt / (g.dx * g.dx);
    const double ry = tc.nu * tc.dt / (g.dy * g.dy);

    Field next = field;
    for (int k = 0; k <= g.my; ++k) {
        for (int j = 0; j <= g.mx; ++j) {
            if (m.cls(j, k) != NodeClass::Interior)
                continue;
            double uc = field.at(j, k);
            next.at(j, k) = uc +
                            rx * (field.at(j + 1, k) - 2.0 * uc + field.at(j - 1, k)) +
                            ry * (field.at(j, k + 1) - 2.0 * uc + field.at(j, k - 1));
        }
    }
    double tnew = tc.t0 + (n + 1) * tc.dt;
    for (int k = 0; k <= g.my; ++k)
        for (int j = 0; j <= g.mx; ++j)
            if (m.cls(j, k) == NodeClass::Boundary)
                next.at(j, k) = p.dirichlet.eval(g.x(j), g.y(k), tnew);
    return next;
}

// One backward-Euler step: (I - dt*nu*L) u^{n+1} = u^n with boundary terms
// taken at the end-of-step time; the inner system is solved with Jacobi.
inline Field step_implicit(const Field& field, const EmbeddedMesh& m, const ProblemSpec& p,
                           const TimeConfig& tc, long n, const IterConfig& cfg = {}) {
    if (!(tc.dt > 0.0))
        throw TimestepError("time step must be positive");
    const GridSpec& g = m.grid;
    const double rx = tc.nu * tc.dt / (g.dx * g.dx);
    const double ry = tc.nu * tc.dt / (g.dy * g.dy);
    const double tnew = tc.t0 + (n + 1) * tc.dt;

    DiscreteProblem dp = detail::problem_shell(m, p.dirichlet, tnew);
    dp.rows.reserve(dp.node_of_unknown.size());
    for (std::size_t node : dp.node_of_unknown) {
        int j = int(node % std::size_t(g.nx()));
        int k = int(node / std::size_t(g.nx()));
        StencilRow row;
        row.j = j;
        row.k = k;
        row.center = 1.0 + 2.0 * rx + 2.0 * ry;
        row.ce = row.cw = -rx;
        row.cn = row.cs = -ry;
        row.rhs = field.at(j, k);
        auto hook = [&](int jj, int kk, double coef, int& slot) {
            std::size_t nidx = g.node_index(jj, kk);
            if (m.node_class[nidx] == NodeClass::Interior)
                slot = dp.unknown_of_node[nidx];
            else
                row.rhs -= coef * dp.boundary_value[nidx];
        };
        hook(j + 1, k, row.ce, row.ue);
        hook(j - 1, k, row.cw, row.uw);
        hook(j, k + 1, row.cn, row.un);
        hook(j, k - 1, row.cs, row.us);
        dp.rows.push_back(row);
    }

    IterConfig inner = cfg;
    inner.init = IterConfig::Init::Given;
    inner.given.resize(dp.node_of_unknown.size());
    for (std::size_t i = 0; i < dp.node_of_unknown.size(); ++i)
        inner.given[i] = field.v[dp.node_of_unknown[i]];

    auto [f, rep] = solve_jacobi(dp, inner);
    if (!rep.converged)
        throw TimestepError("implicit step " + std::to_string(n + 1) +
                            ": inner Jacobi solve did not converge (" +
                            std::to_string(rep.iterations) + " iterations, update " +
                            std::to_string(rep.final_update_norm) + ")");
    return f;
}

struct Snapshot {
    long step = 0;
    double t = 0.0;
    Field field;
};

// Marches the heat equation for tc.steps steps and collects the fields
// whose times land within dt/2 of a requested snapshot time.
inline std::vector<Snapshot> march(const EmbeddedMesh& m, const ProblemSpec& p,
                                   const TimeConfig& tc, const IterConfig& cfg = {}) {
    if (tc.steps < 1)
        throw TimestepError("step count must be >= 1");
    Field u = initial_field(m, p, tc.t0);

    std::vector<Snapshot> out;
    std::vector<char> taken(tc.snapshot_times.size(), 0);
    auto collect = [&](long n, const Field& f) {
        double t = tc.t0 + n * tc.dt;
        for (std::size_t s = 0; s < tc.snapshot_times.size(); ++s) {
            if (taken[s])
                continue;
            if (std::abs(t - tc.snapshot_times[s]) <= 0.5 * tc.dt) {
                out.push_back(Snapshot{n, t, f});
                taken[s] = 1;
            }
        }
    };

    collect(0, u);
    for (long n = 0; n < tc.steps; ++n) {
        u = tc.scheme == TimeConfig::Scheme::Explicit ? step_explicit(u, m, p, tc, n)
                                                      : step_implicit(u, m, p, tc, n, cfg);
        collect(n + 1, u);
    }
    return out;
}

} // namespace gridcarve
