#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gridcarve/embed.hpp"
#include "gridcarve/errors.hpp"
#include "gridcarve/expr.hpp"
#include "gridcarve/field.hpp"

namespace gridcarve {

enum class Mobility { Constant, ProportionalToP };

// laplacian(a) = f
struct PoissonSpec {
    Expr f;
};

// laplacian(a) + f*a = g
struct HelmholtzSpec {
    Expr f, g;
};

// div(coef * grad a) = f, coef evaluated at cell-face midpoints
struct VarCoeffSpec {
    Expr coef, f;
};

// Steady pollinator density: d1*div(f1(p) grad a) - a^2 + a*(k+1) - 1/2 = 0
// with the companion plant field p = 2a - 1. The mobility factor f1 is
// either 1 or p, frozen at the cell center.
struct PollinatorSpec {
    double d1 = 0.0;
    double k = 0.0;
    Mobility mobility = Mobility::Constant;
};

struct ProblemSpec {
    std::variant<PoissonSpec, HelmholtzSpec, VarCoeffSpec, PollinatorSpec> kind;
    Expr dirichlet;                // g(x,y,t), evaluable on all of R
    std::optional<Expr> exact;     // for error reporting
    std::optional<Expr> initial;   // time-dependent runs

    bool is_linear() const { return !std::holds_alternative<PollinatorSpec>(kind); }
};

// One discrete equation per interior node:
//   center*u_C + ce*u_E + cw*u_W + cn*u_N + cs*u_S = rhs
// Neighbor unknown indices are -1 where the neighbor is a boundary carrier;
// those contributions are already folded into rhs. The stored coefficients
// are kept for dumps and symmetry checks.
struct StencilRow {
    int j = 0, k = 0;
    double center = 0.0, ce = 0.0, cw = 0.0, cn = 0.0, cs = 0.0;
    int ue = -1, uw = -1, un = -1, us = -1;
    double rhs = 0.0;
};

struct NonlinearData {
    double d1 = 0.0;
    double k = 0.0;
    Mobility mobility = Mobility::Constant;
};

struct DiscreteProblem {
    EmbeddedMesh mesh;
    std::vector<int> unknown_of_node;          // node index -> unknown or -1
    std::vector<std::size_t> node_of_unknown;  // k-major
    std::vector<StencilRow> rows;              // linear kinds only
    std::vector<double> boundary_value;        // per node, valid on Boundary
    std::optional<NonlinearData> nonlinear;

    int n() const { return int(node_of_unknown.size()); }

    // Full-grid field from an unknown vector: interior from u, boundary from
    // the stored Dirichlet values, exterior NaN.
    Field expand(const std::vector<double>& u) const {
        Field f = Field::undefined(mesh.grid);
        for (std::size_t i = 0; i < mesh.node_class.size(); ++i) {
            if (mesh.node_class[i] == NodeClass::Boundary)
                f.v[i] = boundary_value[i];
            else if (mesh.node_class[i] == NodeClass::Interior)
                f.v[i] = u[std::size_t(unknown_of_node[i])];
        }
        return f;
    }
};

namespace detail {

inline DiscreteProblem problem_shell(const EmbeddedMesh& m, const Expr& dirichlet, double t) {
    DiscreteProblem dp;
    dp.mesh = m;
    dp.unknown_of_node.assign(m.grid.node_count(), -1);
    dp.boundary_value.assign(m.grid.node_count(), 0.0);
    for (int k = 0; k <= m.grid.my; ++k) {
        for (int j = 0; j <= m.grid.mx; ++j) {
            std::size_t idx = m.grid.node_index(j, k);
            if (m.node_class[idx] == NodeClass::Interior) {
                dp.unknown_of_node[idx] = int(dp.node_of_unknown.size());
                dp.node_of_unknown.push_back(idx);
            } else if (m.node_class[idx] == NodeClass::Boundary) {
                dp.boundary_value[idx] = dirichlet.eval(m.grid.x(j), m.grid.y(k), t);
            }
        }
    }
    return dp;
}

} // namespace detail

// Discretizes a linear problem with the 5-point second-difference stencil.
// Dirichlet data is evaluated at time t and moved to the right-hand side.
inline DiscreteProblem assemble_linear(const ProblemSpec& p, const EmbeddedMesh& m,
                                       double t = 0.0) {
    if (!p.is_linear())
        throw SolveError("assemble_linear cannot handle the nonlinear kind");

    DiscreteProblem dp = detail::problem_shell(m, p.dirichlet, t);
    const GridSpec& g = m.grid;
    const double ax = 1.0 / (g.dx * g.dx);
    const double ay = 1.0 / (g.dy * g.dy);

    dp.rows.reserve(dp.node_of_unknown.size());
    for (std::size_t node : dp.node_of_unknown) {
        int j = int(node % std::size_t(g.nx()));
        int k = int(node / std::size_t(g.nx()));
        double x = g.x(j), y = g.y(k);

        StencilRow row;
        row.j = j;
        row.k = k;
        if (const auto* ps = std::get_if<PoissonSpec>(&p.kind)) {
            row.ce = row.cw = ax;
            row.cn = row.cs = ay;
            row.center = -2.0 * ax - 2.0 * ay;
            row.rhs = ps->f.eval(x, y, t);
        } else if (const auto* hs = std::get_if<HelmholtzSpec>(&p.kind)) {
            row.ce = row.cw = ax;
            row.cn = row.cs = ay;
            row.center = -2.0 * ax - 2.0 * ay + hs->f.eval(x, y, t);
            row.rhs = hs->g.eval(x, y, t);
        } else {
            const auto& vs = std::get<VarCoeffSpec>(p.kind);
            double ce = vs.coef.eval(x + 0.5 * g.dx, y, t);
            double cw = vs.coef.eval(x - 0.5 * g.dx, y, t);
            double cn = vs.coef.eval(x, y + 0.5 * g.dy, t);
            double cs = vs.coef.eval(x, y - 0.5 * g.dy, t);
            row.ce = ce * ax;
            row.cw = cw * ax;
            row.cn = cn * ay;
            row.cs = cs * ay;
            row.center = -(ce + cw) * ax - (cn + cs) * ay;
            row.rhs = vs.f.eval(x, y, t);
        }

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
    return dp;
}

// Nonlinear residual form of the steady pollinator problem. Boundary
// carriers hold the Dirichlet density a_f; the plant field follows as
// p = 2a - 1 everywhere.
inline DiscreteProblem assemble_pollinator(const ProblemSpec& p, const EmbeddedMesh& m) {
    const auto* ps = std::get_if<PollinatorSpec>(&p.kind);
    if (!ps)
        throw SolveError("assemble_pollinator needs the pollinator kind");
    if (!(ps->d1 > 0.0))
        throw SolveError("pollinator diffusion d1 must be positive");
    if (!(ps->k > 0.0))
        throw SolveError("pollinator parameter k must be positive");

    DiscreteProblem dp = detail::problem_shell(m, p.dirichlet, 0.0);
    dp.nonlinear = NonlinearData{ps->d1, ps->k, ps->mobility};
    return dp;
}

// Residual of the discrete pollinator equation at every unknown, for the
// current iterate u (unknown-indexed).
inline std::vector<double> pollinator_residual(const DiscreteProblem& dp,
                                               const std::vector<double>& u) {
    if (!dp.nonlinear)
        throw SolveError("pollinator_residual needs a nonlinear problem");
    const NonlinearData& nl = *dp.nonlinear;
    const GridSpec& g = dp.mesh.grid;
    const double ax = 1.0 / (g.dx * g.dx);
    const double ay = 1.0 / (g.dy * g.dy);

    auto value_at = [&](int j, int k) {
        std::size_t idx = g.node_index(j, k);
        int unk = dp.unknown_of_node[idx];
        return unk >= 0 ? u[std::size_t(unk)] : dp.boundary_value[idx];
    };

    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < dp.node_of_unknown.size(); ++i) {
        std::size_t node = dp.node_of_unknown[i];
        int j = int(node % std::size_t(g.nx()));
        int k = int(node / std::size_t(g.nx()));
        double uc = u[i];
        double p_c = 2.0 * uc - 1.0;
        double f1 = 1.0;
        if (nl.mobility == Mobility::ProportionalToP) {
            if (p_c <= 0.0)
                throw SolveError("DegenerateCoefficient: plant density p <= 0 at node (" +
                                 std::to_string(j) + "," + std::to_string(k) + ")");
            f1 = p_c;
        }
        double c = f1 * (value_at(j + 1, k) - 2.0 * uc + value_at(j - 1, k));
        double d = f1 * (value_at(j, k + 1) - 2.0 * uc + value_at(j, k - 1));
        r[i] = nl.d1 * (c * ax + d * ay) - uc * uc + uc * (nl.k + 1.0) - 0.5;
    }
    return r;
}

// Pointwise reduction h = (1+p)(1-p/k) linking plant and herbivore
// densities; where p peaks h dips and vice versa.
inline Field reduce_plants_herbivores(const Field& p_field, double k) {
    if (!(k > 0.0))
        throw SolveError("reduction parameter k must be positive");
    Field h = p_field;
    for (double& v : h.v)
        if (std::isfinite(v))
            v = (1.0 + v) * (1.0 - v / k);
    return h;
}

// |center| >= sum|neighbors| on every row, strict where a Dirichlet value
// was folded in.
inline bool diagonally_dominant(const DiscreteProblem& dp) {
    for (const StencilRow& r : dp.rows) {
        double off = std::abs(r.ce) + std::abs(r.cw) + std::abs(r.cn) + std::abs(r.cs);
        if (std::abs(r.center) < off - 1e-12 * std::abs(r.center))
            return false;
    }
    return true;
}

} // namespace gridcarve
