#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gridcarve/assemble.hpp"
#include "gridcarve/errors.hpp"
#include "gridcarve/field.hpp"

namespace gridcarve {

struct IterConfig {
    double tol = 1e-13;           // max-norm of the successive-iterate difference
    long max_iter = 10'000'000;
    enum class Init { Zeros, BoundaryAverage, Given } init = Init::Zeros;
    std::vector<double> given;    // unknown-indexed start values for Init::Given
};

struct SolveReport {
    long iterations = 0;
    double final_update_norm = 0.0;
    bool converged = false;
    std::optional<double> error_vs_exact;
    Extremum min{}, max{};
};

namespace detail {

inline void validate_iter_config(const IterConfig& cfg) {
    if (!(cfg.tol > 0.0))
        throw SolveError("iteration tolerance must be positive");
    if (cfg.max_iter < 1)
        throw SolveError("max_iter must be >= 1");
}

inline std::vector<double> initial_vector(const DiscreteProblem& dp, const IterConfig& cfg) {
    std::size_t n = std::size_t(dp.n());
    switch (cfg.init) {
    case IterConfig::Init::Zeros:
        return std::vector<double>(n, 0.0);
    case IterConfig::Init::BoundaryAverage: {
        double sum = 0.0;
        long count = 0;
        for (std::size_t i = 0; i < dp.mesh.node_class.size(); ++i)
            if (dp.mesh.node_class[i] == NodeClass::Boundary) {
                sum += dp.boundary_value[i];
                ++count;
            }
        return std::vector<double>(n, count > 0 ? sum / count : 0.0);
    }
    case IterConfig::Init::Given:
        if (cfg.given.size() != n)
            throw SolveError("initial vector has wrong length");
        return cfg.given;
    }
    throw SolveError("corrupt IterConfig");
}

inline void fill_report_extrema(SolveReport& rep, const DiscreteProblem& dp, const Field& f) {
    auto [mn, mx] = interior_extrema(f, dp.mesh);
    rep.min = mn;
    rep.max = mx;
}

inline double row_apply(const StencilRow& r, const std::vector<double>& u) {
    double s = r.rhs;
    if (r.ue >= 0) s -= r.ce * u[std::size_t(r.ue)];
    if (r.uw >= 0) s -= r.cw * u[std::size_t(r.uw)];
    if (r.un >= 0) s -= r.cn * u[std::size_t(r.un)];
    if (r.us >= 0) s -= r.cs * u[std::size_t(r.us)];
    return s / r.center;
}

} // namespace detail

// Simultaneous-update sweep. Stops when the max-norm update drops to tol;
// a report with converged == false carries the last iterate.
inline std::pair<Field, SolveReport> solve_jacobi(const DiscreteProblem& dp,
                                                  const IterConfig& cfg = {}) {
    if (dp.nonlinear)
        throw SolveError("solve_jacobi needs a linear problem");
    detail::validate_iter_config(cfg);
    std::vector<double> u = detail::initial_vector(dp, cfg);
    std::vector<double> next(u.size());

    SolveReport rep;
    for (long it = 1; it <= cfg.max_iter; ++it) {
        double delta = 0.0;
        for (std::size_t r = 0; r < dp.rows.size(); ++r) {
            next[r] = detail::row_apply(dp.rows[r], u);
            delta = std::max(delta, std::abs(next[r] - u[r]));
        }
        u.swap(next);
        rep.iterations = it;
        rep.final_update_norm = delta;
        if (delta <= cfg.tol) {
            rep.converged = true;
            break;
        }
    }
    Field f = dp.expand(u);
    detail::fill_report_extrema(rep, dp, f);
    return {std::move(f), rep};
}

// In-place sweep in k-major unknown order. The order is part of the
// contract: reported iterates depend on it.
inline std::pair<Field, SolveReport> solve_gauss_seidel(const DiscreteProblem& dp,
                                                        const IterConfig& cfg = {}) {
    if (dp.nonlinear)
        throw SolveError("solve_gauss_seidel needs a linear problem");
    detail::validate_iter_config(cfg);
    std::vector<double> u = detail::initial_vector(dp, cfg);

    SolveReport rep;
    for (long it = 1; it <= cfg.max_iter; ++it) {
        double delta = 0.0;
        for (std::size_t r = 0; r < dp.rows.size(); ++r) {
            double nv = detail::row_apply(dp.rows[r], u);
            delta = std::max(delta, std::abs(nv - u[r]));
            u[r] = nv;
        }
        rep.iterations = it;
        rep.final_update_norm = delta;
        if (delta <= cfg.tol) {
            rep.converged = true;
            break;
        }
    }
    Field f = dp.expand(u);
    detail::fill_report_extrema(rep, dp, f);
    return {std::move(f), rep};
}

// Dense Gaussian elimination with partial pivoting; the verification oracle
// for the iterative paths. Refuses systems above 4000 unknowns.
inline Field solve_direct_dense(const DiscreteProblem& dp) {
    if (dp.nonlinear)
        throw SolveError("solve_direct_dense needs a linear problem");
    const std::size_t n = std::size_t(dp.n());
    if (n > 4000)
        throw SolveError("dense oracle limited to 4000 unknowns, got " + std::to_string(n));
    if (n == 0)
        throw SolveError("empty system");

    std::vector<double> a(n * n, 0.0);
    std::vector<double> b(n);
    for (std::size_t r = 0; r < n; ++r) {
        const StencilRow& row = dp.rows[r];
        a[r * n + r] = row.center;
        if (row.ue >= 0) a[r * n + std::size_t(row.ue)] = row.ce;
        if (row.uw >= 0) a[r * n + std::size_t(row.uw)] = row.cw;
        if (row.un >= 0) a[r * n + std::size_t(row.un)] = row.cn;
        if (row.us >= 0) a[r * n + std::size_t(row.us)] = row.cs;
        b[r] = row.rhs;
    }
    std::vector<double> a0 = a, b0 = b; // for the residual check

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a[perm[col] * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double cand = std::abs(a[perm[r] * n + col]);
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (best == 0.0)
            throw SolveError("SingularMatrix: zero pivot in column " + std::to_string(col));
        std::swap(perm[col], perm[piv]);
        double diag = a[perm[col] * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            double factor = a[perm[r] * n + col] / diag;
            if (factor == 0.0)
                continue;
            a[perm[r] * n + col] = 0.0;
            for (std::size_t c = col + 1; c < n; ++c)
                a[perm[r] * n + c] -= factor * a[perm[col] * n + c];
            b[perm[r]] -= factor * b[perm[col]];
        }
    }
    std::vector<double> u(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[perm[i]];
        for (std::size_t c = i + 1; c < n; ++c)
            s -= a[perm[i] * n + c] * u[c];
        u[i] = s / a[perm[i] * n + i];
    }

    double scale = 1.0, resid = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        scale = std::max(scale, std::abs(b0[r]));
        double s = -b0[r];
        for (std::size_t c = 0; c < n; ++c)
            s += a0[r * n + c] * u[c];
        resid = std::max(resid, std::abs(s));
    }
    if (resid > 1e-9 * scale)
        throw SolveError("dense solve residual " + std::to_string(resid) +
                         " exceeds tolerance");
    return dp.expand(u);
}

// Relaxed fixed-point sweep for the pollinator system. Each node's equation
// is solved for its center value with neighbors and the mobility factor
// frozen from the previous iterate; with frozen data the equation is a
// quadratic in the center unknown and the root continuous in the reaction
// equilibrium is taken.
inline std::pair<Field, SolveReport> solve_fixed_point(const DiscreteProblem& dp,
                                                       const IterConfig& cfg, double relax) {
    if (!dp.nonlinear)
        throw SolveError("solve_fixed_point needs the nonlinear problem form");
    if (!(relax > 0.0 && relax <= 1.0))
        throw SolveError("relaxation factor must be in (0, 1]");
    detail::validate_iter_config(cfg);

    const NonlinearData& nl = *dp.nonlinear;
    const GridSpec& g = dp.mesh.grid;
    const double ax = 1.0 / (g.dx * g.dx);
    const double ay = 1.0 / (g.dy * g.dy);

    std::vector<double> u = detail::initial_vector(dp, cfg);
    std::vector<double> next(u.size());

    auto value_at = [&](const std::vector<double>& vec, int j, int k) {
        std::size_t idx = g.node_index(j, k);
        int unk = dp.unknown_of_node[idx];
        return unk >= 0 ? vec[std::size_t(unk)] : dp.boundary_value[idx];
    };

    SolveReport rep;
    for (long it = 1; it <= cfg.max_iter; ++it) {
        double delta = 0.0;
        for (std::size_t i = 0; i < dp.node_of_unknown.size(); ++i) {
            std::size_t node = dp.node_of_unknown[i];
            int j = int(node % std::size_t(g.nx()));
            int k = int(node / std::size_t(g.nx()));
            double p_c = 2.0 * u[i] - 1.0;
            double f1 = 1.0;
            if (nl.mobility == Mobility::ProportionalToP) {
                if (p_c <= 0.0)
                    throw SolveError("DegenerateCoefficient: plant density p <= 0 at node (" +
                                     std::to_string(j) + "," + std::to_string(k) + ")");
                f1 = p_c;
            }
            double amob = nl.d1 * f1;
            double s = amob * ((value_at(u, j + 1, k) + value_at(u, j - 1, k)) * ax +
                               (value_at(u, j, k + 1) + value_at(u, j, k - 1)) * ay);
            double tt = 2.0 * amob * (ax + ay);
            // -u^2 + u*(k+1-T) + (S - 1/2) = 0
            double bb = (nl.k + 1.0) - tt;
            double cc = s - 0.5;
            double disc = bb * bb + 4.0 * cc;
            if (disc < 0.0)
                throw SolveError("fixed-point center equation has no real root at node (" +
                                 std::to_string(j) + "," + std::to_string(k) + ")");
            // conjugate form when bb and the square root cancel
            double root = bb > 0.0 ? 0.5 * (bb + std::sqrt(disc))
                                   : 2.0 * cc / (std::sqrt(disc) - bb);
            double nv = (1.0 - relax) * u[i] + relax * root;
            delta = std::max(delta, std::abs(nv - u[i]));
            next[i] = nv;
        }
        u.swap(next);
        rep.iterations = it;
        rep.final_update_norm = delta;
        if (delta <= cfg.tol) {
            rep.converged = true;
            break;
        }
    }
    Field f = dp.expand(u);
    detail::fill_report_extrema(rep, dp, f);
    return {std::move(f), rep};
}

// Residual max-norm of a linear system at the interior values of f. Boundary
// contributions already live in the stored rhs, so only unknown neighbors
// are applied.
inline double linear_residual_norm(const DiscreteProblem& dp, const Field& f) {
    double worst = 0.0;
    for (std::size_t r = 0; r < dp.rows.size(); ++r) {
        const StencilRow& row = dp.rows[r];
        double s = row.center * f.at(row.j, row.k) - row.rhs;
        if (row.ue >= 0) s += row.ce * f.at(row.j + 1, row.k);
        if (row.uw >= 0) s += row.cw * f.at(row.j - 1, row.k);
        if (row.un >= 0) s += row.cn * f.at(row.j, row.k + 1);
        if (row.us >= 0) s += row.cs * f.at(row.j, row.k - 1);
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

} // namespace gridcarve
