// End-to-end acceptance runs. Each criterion prints one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gridcarve/analyze.hpp"
#include "gridcarve/fixtures.hpp"
#include "gridcarve/solve.hpp"
#include "gridcarve/timestep.hpp"

using namespace gridcarve;

namespace {

struct Criterion {
    std::string name;
    std::vector<std::string> failures;
    double seconds = 0.0;

    void expect(bool ok, const std::string& what) {
        if (!ok)
            failures.push_back(what);
    }
    void expect_close(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: got %.10g, want %.10g (tol %.1e)",
                          what.c_str(), got, want, tol);
            failures.push_back(buf);
        }
    }
    void expect_le(double got, double bound, const std::string& what) {
        if (!(got <= bound)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: got %.10g, bound %.10g", what.c_str(), got,
                          bound);
            failures.push_back(buf);
        }
    }
};

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

ProblemSpec parabola_problem() {
    return ProblemSpec{PoissonSpec{Expr::parse("4")}, Expr::parse("(x+y)^2"),
                       Expr::parse("(x+y)^2"), std::nullopt};
}

ProblemSpec square_cos_problem() {
    return ProblemSpec{PoissonSpec{Expr::parse("-16*pi^2*(cos(4*pi*x)+cos(4*pi*y))")},
                       Expr::parse("cos(4*pi*x)+cos(4*pi*y)"),
                       Expr::parse("cos(4*pi*x)+cos(4*pi*y)"), std::nullopt};
}

double pollinator_equilibrium(double k) {
    return 0.5 * ((k + 1.0) + std::sqrt((k + 1.0) * (k + 1.0) - 2.0));
}

Field random_interior(const EmbeddedMesh& m, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f = Field::undefined(m.grid);
    for (int k = 0; k <= m.grid.my; ++k)
        for (int j = 0; j <= m.grid.mx; ++j) {
            if (m.cls(j, k) == NodeClass::Interior)
                f.at(j, k) = u(rng);
            else if (m.cls(j, k) == NodeClass::Boundary)
                f.at(j, k) = 0.0;
        }
    return f;
}

// ---- criterion 1: single-resolution reproduction ------------------------

void criterion1(Criterion& c) {
    Clock clock;
    DomainSpec d = make_fixture("parabola");
    GridSpec g = build_rectangle(d, Rect{-0.2, -0.2, 1.2, 1.2}, 0.1, 0.1);

    {
        EmbeddedMesh m = build_mesh(d, g, MeshVariant::OverBar);
        DiscreteProblem dp = assemble_linear(parabola_problem(), m);
        c.expect(dp.n() == 24, "extrapolated system must have 24 unknowns");
        auto [f, rep] = solve_gauss_seidel(dp);
        c.expect(rep.converged, "extrapolated solve converged");
        c.expect_le(error_inf(f, *parabola_problem().exact, m), 1e-10, "extrapolated error");
        c.expect_close(rep.min.value, 0.2500, 1e-9, "extrapolated min");
        c.expect_close(rep.min.x, 0.4, 1e-9, "extrapolated min x");
        c.expect_close(rep.min.y, 0.1, 1e-9, "extrapolated min y");
        c.expect_close(rep.max.value, 2.8900, 1e-9, "extrapolated max");
        c.expect_close(rep.max.x, 0.9, 1e-9, "extrapolated max x");
        c.expect_close(rep.max.y, 0.8, 1e-9, "extrapolated max y");
    }
    {
        EmbeddedMesh m = build_mesh(d, g, MeshVariant::UnderBar);
        DiscreteProblem dp = assemble_linear(parabola_problem(), m);
        c.expect(dp.n() == 6, "interpolated system must have 6 unknowns");
        auto [f, rep] = solve_gauss_seidel(dp);
        c.expect(rep.converged, "interpolated solve converged");
        c.expect_le(error_inf(f, *parabola_problem().exact, m), 1e-10, "interpolated error");
        c.expect_close(rep.min.value, 0.6400, 1e-9, "interpolated min");
        c.expect_close(rep.min.x, 0.6, 1e-9, "interpolated min x");
        c.expect_close(rep.min.y, 0.2, 1e-9, "interpolated min y");
        c.expect_close(rep.max.value, 1.4400, 1e-9, "interpolated max");
        c.expect_close(rep.max.x, 0.8, 1e-9, "interpolated max x");
        c.expect_close(rep.max.y, 0.4, 1e-9, "interpolated max y");
    }
    c.expect_le(clock.seconds(), 1.0, "criterion runtime (s)");
}

// ---- criterion 2: refinement sweep ---------------------------------------

void criterion2(Criterion& c) {
    DomainSpec d = make_fixture("parabola");

    struct Want {
        double min, minx, miny, max, maxx, maxy;
    };
    const Want over[4] = {
        {0.2500, 0.40, 0.10, 2.8900, 0.90, 0.80},
        {0.1600, 0.32, 0.08, 3.3856, 0.96, 0.88},
        {0.1296, 0.30, 0.06, 3.4596, 0.96, 0.90},
        {0.0144, 0.11, 0.01, 3.8809, 0.99, 0.98},
    };
    const Want under[4] = {
        {0.6400, 0.60, 0.20, 1.4400, 0.80, 0.40},
        {0.5184, 0.56, 0.16, 2.0736, 0.88, 0.56},
        {0.3600, 0.48, 0.12, 2.4336, 0.90, 0.66},
        {0.0400, 0.18, 0.02, 3.6864, 0.98, 0.94},
    };

    for (MeshVariant variant : {MeshVariant::OverBar, MeshVariant::UnderBar}) {
        const Want* want = variant == MeshVariant::OverBar ? over : under;
        const char* tag = variant == MeshVariant::OverBar ? "extrapolated" : "interpolated";

        Clock fine_clock;
        SweepReport rep =
            run_sweep(d, parabola_problem(), {0.1, 0.08, 0.06, 0.01}, variant, IterConfig{}, 8);
        double sweep_seconds = fine_clock.seconds();
        c.expect(rep.ok(), std::string(tag) + " sweep completed");
        if (!rep.ok() || rep.rows.size() != 4)
            continue;
        for (int i = 0; i < 4; ++i) {
            const SweepRow& r = rep.rows[std::size_t(i)];
            std::string level = std::string(tag) + " dx=" + std::to_string(r.dx);
            c.expect_close(r.u_min, want[i].min, 1e-9, level + " u_min");
            c.expect_close(r.x_min, want[i].minx, 1e-9, level + " x_min");
            c.expect_close(r.y_min, want[i].miny, 1e-9, level + " y_min");
            c.expect_close(r.u_max, want[i].max, 1e-9, level + " u_max");
            c.expect_close(r.x_max, want[i].maxx, 1e-9, level + " x_max");
            c.expect_close(r.y_max, want[i].maxy, 1e-9, level + " y_max");
            c.expect_le(r.error_inf, 1e-9, level + " error_inf");
        }
        for (int i = 1; i < 4; ++i)
            c.expect(rep.rows[i].iterations >= rep.rows[i - 1].iterations,
                     std::string(tag) + " iteration counts non-decreasing");
        // whole sweep (dominated by the dx=0.01 level) within the budget
        c.expect_le(sweep_seconds, 120.0, std::string(tag) + " dx=0.01 runtime (s)");

        // the dx=0.001 row is out of desk scale; its stand-in property is the
        // monotone closing of the extrema gaps under halving
        SweepReport halving =
            run_sweep(d, parabola_problem(), {0.1, 0.05, 0.025, 0.0125}, variant, IterConfig{}, 4);
        c.expect(halving.ok(), std::string(tag) + " halving sweep completed");
        double prev_min = 1e300, prev_max = 1e300;
        for (const SweepRow& r : halving.rows) {
            c.expect(std::abs(r.u_min - 0.0) < prev_min,
                     std::string(tag) + " |u_min - 0| decreases monotonically");
            c.expect(std::abs(r.u_max - 4.0) < prev_max,
                     std::string(tag) + " |u_max - 4| decreases monotonically");
            prev_min = std::abs(r.u_min);
            prev_max = std::abs(r.u_max - 4.0);
        }
    }
}

// ---- criterion 3: independence from the covering rectangle ---------------

void criterion3(Criterion& c) {
    DomainSpec sq = make_fixture("unit_square");
    ProblemSpec p = square_cos_problem();

    auto err_for = [&](const Rect& r, double dx) {
        GridSpec g = build_rectangle(sq, r, dx, dx);
        EmbeddedMesh m = build_mesh(sq, g, MeshVariant::OverBar);
        DiscreteProblem dp = assemble_linear(p, m);
        auto [f, rep] = solve_jacobi(dp);
        if (!rep.converged)
            c.expect(false, "jacobi converged on every placement");
        return error_inf(f, *p.exact, m);
    };

    const double dx = 0.02;
    double aligned = err_for(Rect{-0.02, -0.02, 1.02, 1.02}, dx);
    double offset = err_for(Rect{-0.0134, -0.0071, 1.0134, 1.0071}, dx); // non-multiple of dx
    double enlarged = err_for(Rect{-0.1, -0.1, 1.1, 1.1}, dx);

    double lo = std::min({aligned, offset, enlarged});
    double hi = std::max({aligned, offset, enlarged});
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "error_inf relative spread across placements (aligned %.6e, offset %.6e, "
                  "enlarged %.6e)",
                  aligned, offset, enlarged);
    c.expect_le((hi - lo) / hi, 1e-6, detail);

    double coarse = err_for(Rect{-0.04, -0.04, 1.04, 1.04}, 0.04);
    double ratio = coarse / aligned;
    c.expect(ratio >= 3.2 && ratio <= 4.8,
             "second-order convergence ratio err(0.04)/err(0.02) = " + std::to_string(ratio) +
                 " in [3.2, 4.8]");
}

// ---- criterion 4: heat stepping -------------------------------------------

void criterion4(Criterion& c) {
    Clock clock;
    DomainSpec d = make_fixture("unit_square");
    GridSpec g = build_rectangle(d, Rect{0, 0, 1, 1}, 0.02, 0.02);
    EmbeddedMesh m = build_mesh(d, g, MeshVariant::OverBar);
    ProblemSpec p{PoissonSpec{Expr::parse("0")},
                  Expr::parse("sin(t)*(sin(pi*x)+sin(pi*y))"), std::nullopt,
                  Expr::parse("0")};

    const double dtmax = cfl_limit(m, 1.0);
    const std::vector<double> times = {0.0096, 0.1052, 0.3548};

    TimeConfig te{0.9 * dtmax, 0.0, long(std::ceil(0.36 / (0.9 * dtmax))), 1.0,
                  TimeConfig::Scheme::Explicit, times};
    TimeConfig ti{9.0 * dtmax, 0.0, long(std::ceil(0.36 / (9.0 * dtmax))), 1.0,
                  TimeConfig::Scheme::Implicit, times};
    auto se = march(m, p, te);
    auto si = march(m, p, ti);
    c.expect(se.size() == 3 && si.size() == 3, "all three snapshot times matched");
    for (std::size_t i = 0; i < std::min(se.size(), si.size()); ++i) {
        char what[120];
        std::snprintf(what, sizeof what, "explicit/implicit gap at t=%.4f", times[i]);
        c.expect_le(max_abs_diff(se[i].field, si[i].field, m), 5e-3, what);
    }

    // over the stability limit the norm must blow up quickly
    ProblemSpec zero{PoissonSpec{Expr::parse("0")}, Expr::parse("0"), std::nullopt,
                     Expr::parse("0")};
    Field u = random_interior(m, 1234);
    double norm0 = max_abs(u, m);
    TimeConfig bad{1.1 * dtmax, 0.0, 200, 1.0, TimeConfig::Scheme::Explicit, {}};
    double worst = 0.0;
    for (long n = 0; n < 200; ++n) {
        u = step_explicit(u, m, zero, bad, n);
        worst = std::max(worst, max_abs(u, m));
    }
    c.expect(worst >= 10.0 * norm0, "explicit run at 1.1x the limit grows by 10x in 200 steps");

    // far over the limit the implicit norm may not grow
    Field v = random_interior(m, 77);
    TimeConfig big{100.0 * dtmax, 0.0, 50, 1.0, TimeConfig::Scheme::Implicit, {}};
    double prev = max_abs(v, m);
    bool monotone = true;
    for (long n = 0; n < 50; ++n) {
        v = step_implicit(v, m, zero, big, n);
        double now = max_abs(v, m);
        monotone = monotone && now <= prev + 1e-12;
        prev = now;
    }
    c.expect(monotone, "implicit zero-boundary norm non-increasing at 100x the limit");
    c.expect_le(clock.seconds(), 60.0, "criterion runtime (s)");
}

// ---- criterion 5: nonlinear steady state ----------------------------------

void criterion5(Criterion& c) {
    const double k = 0.45;
    const double a_star = pollinator_equilibrium(k);
    c.expect_close(a_star, 0.8851, 5e-5, "equilibrium density rounds to the reference value 0.8851");
    c.expect_close(2 * a_star - 1, 0.7702, 1e-4, "plant density rounds to the reference value 0.7702");

    char literal[64];
    std::snprintf(literal, sizeof literal, "%.17g", a_star);

    DomainSpec star = make_fixture("star");
    GridSpec g = build_rectangle(star, 0.125, 0.125);
    EmbeddedMesh m = build_mesh(star, g, MeshVariant::OverBar);
    c.expect(check_connectivity(m), "star interior is one component at dx=0.125");

    for (Mobility mob : {Mobility::Constant, Mobility::ProportionalToP}) {
        const char* tag = mob == Mobility::Constant ? "f1=1" : "f1=p";
        ProblemSpec p{PollinatorSpec{10.0, k, mob}, Expr::parse(literal), std::nullopt,
                      std::nullopt};
        DiscreteProblem dp = assemble_pollinator(p, m);

        IterConfig cfg;
        cfg.init = IterConfig::Init::BoundaryAverage; // constant field a_f
        auto [f, rep] = solve_fixed_point(dp, cfg, 1.0);
        c.expect(rep.converged, std::string(tag) + ": converged");
        c.expect(rep.iterations <= 2,
                 std::string(tag) + ": constant start converges in <= 2 iterations (got " +
                     std::to_string(rep.iterations) + ")");

        std::vector<double> u(std::size_t(dp.n()));
        for (int i = 0; i < dp.n(); ++i)
            u[std::size_t(i)] = f.v[dp.node_of_unknown[std::size_t(i)]];
        double rmax = 0.0;
        for (double r : pollinator_residual(dp, u))
            rmax = std::max(rmax, std::abs(r));
        c.expect_le(rmax, 1e-10, std::string(tag) + ": residual at the constant state");

        // the derived plant field p = 2a - 1 must satisfy the second
        // equilibrium equation -p/2 + a p/(1+p) = 0 at every node
        double worst_rel = 0.0;
        for (std::size_t i = 0; i < f.v.size(); ++i)
            if (std::isfinite(f.v[i])) {
                double a = f.v[i];
                double pv = 2.0 * a - 1.0;
                worst_rel = std::max(worst_rel, std::abs(-0.5 * pv + a * pv / (1.0 + pv)));
            }
        c.expect_le(worst_rel, 1e-12, std::string(tag) + ": p = 2a - 1 closes the system");

        // non-constant boundary perturbation
        char pert[128];
        std::snprintf(pert, sizeof pert, "%.17g + 0.005*sin(3*x + 2*y)", a_star);
        ProblemSpec pp{PollinatorSpec{10.0, k, mob}, Expr::parse(pert), std::nullopt,
                       std::nullopt};
        DiscreteProblem dpp = assemble_pollinator(pp, m);
        auto [fp, repp] = solve_fixed_point(dpp, cfg, 1.0);
        c.expect(repp.converged, std::string(tag) + ": perturbed run converged");
        for (int i = 0; i < dpp.n(); ++i)
            u[std::size_t(i)] = fp.v[dpp.node_of_unknown[std::size_t(i)]];
        rmax = 0.0;
        for (double r : pollinator_residual(dpp, u))
            rmax = std::max(rmax, std::abs(r));
        c.expect_le(rmax, 1e-8, std::string(tag) + ": perturbed residual");

        double bmin = 1e300, bmax = -1e300;
        for (std::size_t i = 0; i < m.node_class.size(); ++i)
            if (m.node_class[i] == NodeClass::Boundary) {
                bmin = std::min(bmin, dpp.boundary_value[i]);
                bmax = std::max(bmax, dpp.boundary_value[i]);
            }
        auto [mn, mx] = interior_extrema(fp, m);
        c.expect(mn.value >= bmin - 1e-10 && mx.value <= bmax + 1e-10,
                 std::string(tag) + ": maximum principle bracket for the density");
    }
}

// ---- criterion 6: property suites -----------------------------------------

void criterion6(Criterion& c) {
    // stencil completeness and mesh ordering across all fixtures
    for (const std::string& name : fixture_names()) {
        DomainSpec d = make_fixture(name);
        Rect b = d.bounding_box(256);
        double h = std::max(b.width(), b.height()) / 24;
        GridSpec g = build_rectangle(d, h, h);
        EmbeddedMesh over = build_mesh(d, g, MeshVariant::OverBar);
        EmbeddedMesh under = build_mesh(d, g, MeshVariant::UnderBar);
        c.expect(stencil_complete(over), name + ": extrapolated stencil complete");
        c.expect(stencil_complete(under), name + ": interpolated stencil complete");
        bool subset = true;
        for (int k = 0; k <= g.my; ++k)
            for (int j = 0; j <= g.mx; ++j)
                if (under.cls(j, k) == NodeClass::Interior &&
                    over.cls(j, k) != NodeClass::Interior)
                    subset = false;
        c.expect(subset, name + ": interpolated interior inside extrapolated interior");
    }

    // discrete maximum principle for the Laplace fixtures
    ProblemSpec laplace{PoissonSpec{Expr::parse("0")}, Expr::parse("cos(x)+cos(y)"),
                        std::nullopt, std::nullopt};
    for (const char* name : {"triangle", "pentagon", "star"}) {
        DomainSpec d = make_fixture(name);
        GridSpec g = build_rectangle(d, 0.25, 0.25);
        if (std::string(name) == "star")
            g = build_rectangle(d, 0.125, 0.125);
        EmbeddedMesh m = build_mesh(d, g, MeshVariant::OverBar);
        DiscreteProblem dp = assemble_linear(laplace, m);
        auto [f, rep] = solve_gauss_seidel(dp);
        c.expect(rep.converged, std::string(name) + ": laplace solve converged");
        double bmin = 1e300, bmax = -1e300;
        for (std::size_t i = 0; i < m.node_class.size(); ++i)
            if (m.node_class[i] == NodeClass::Boundary) {
                bmin = std::min(bmin, dp.boundary_value[i]);
                bmax = std::max(bmax, dp.boundary_value[i]);
            }
        auto [mn, mx] = interior_extrema(f, m);
        c.expect(mn.value >= bmin - 1e-12 && mx.value <= bmax + 1e-12,
                 std::string(name) + ": discrete maximum principle");
    }

    // triple agreement of both iterative methods with the dense oracle
    struct Fixture {
        const char* name;
        double h;
        ProblemSpec p;
    };
    std::vector<Fixture> fixtures;
    fixtures.push_back({"parabola", 0.05, parabola_problem()});
    fixtures.push_back({"unit_square", 0.05, square_cos_problem()});
    fixtures.push_back({"star", 0.5, laplace});
    fixtures.push_back(
        {"rect_annulus", 0.25,
         ProblemSpec{PoissonSpec{Expr::parse("-1")}, Expr::parse("1"), std::nullopt,
                     std::nullopt}});
    fixtures.push_back(
        {"dome", 0.05,
         ProblemSpec{VarCoeffSpec{Expr::parse("cos(x)"),
                                  Expr::parse("-sin(x)*pi*cos(pi*x)*sin(pi*y) - "
                                              "2*pi^2*cos(x)*sin(pi*x)*sin(pi*y)")},
                     Expr::parse("sin(pi*x)*sin(pi*y)"), Expr::parse("sin(pi*x)*sin(pi*y)"),
                     std::nullopt}});
    for (const Fixture& fx : fixtures) {
        DomainSpec d = make_fixture(fx.name);
        GridSpec g = build_rectangle(d, fx.h, fx.h);
        EmbeddedMesh m = build_mesh(d, g, MeshVariant::OverBar);
        DiscreteProblem dp = assemble_linear(fx.p, m);
        c.expect(dp.n() <= 4000, std::string(fx.name) + ": within the dense-oracle limit");
        IterConfig tight;
        tight.tol = 5e-15; // iterate to round-off; compare at 10x the working tolerance
        auto [fj, rj] = solve_jacobi(dp, tight);
        auto [fg, rg] = solve_gauss_seidel(dp, tight);
        Field fd = solve_direct_dense(dp);
        c.expect(rj.converged && rg.converged, std::string(fx.name) + ": iterations converged");
        double bound = 10 * IterConfig{}.tol;
        c.expect_le(max_abs_diff(fj, fd, m), bound, std::string(fx.name) + ": jacobi vs dense");
        c.expect_le(max_abs_diff(fg, fd, m), bound,
                    std::string(fx.name) + ": gauss-seidel vs dense");
        c.expect(rg.iterations <= rj.iterations,
                 std::string(fx.name) + ": gauss-seidel needs no more sweeps than jacobi");
    }

    // quadratic exactness of the 5-point operator
    {
        DomainSpec d = make_fixture("parabola");
        GridSpec g = build_rectangle(d, 0.1, 0.1);
        EmbeddedMesh m = build_mesh(d, g, MeshVariant::OverBar);
        DiscreteProblem dp = assemble_linear(parabola_problem(), m);
        Expr exact = Expr::parse("(x+y)^2");
        std::vector<double> u(std::size_t(dp.n()));
        for (std::size_t i = 0; i < u.size(); ++i) {
            std::size_t node = dp.node_of_unknown[i];
            int j = int(node % std::size_t(g.nx()));
            int k = int(node / std::size_t(g.nx()));
            u[i] = exact.eval(g.x(j), g.y(k));
        }
        c.expect_le(linear_residual_norm(dp, dp.expand(u)), 1e-12 / (0.1 * 0.1),
                    "quadratic field satisfies every assembled row");
    }

    // second-order consistency of the discrete operator
    {
        ProblemSpec poisson{PoissonSpec{Expr::parse("0")}, Expr::parse("0"), std::nullopt,
                            std::nullopt};
        OrderFit fit = consistency_order(poisson, Expr::parse("sin(pi*x)*sin(pi*y)"),
                                         {0.1, 0.05, 0.025});
        c.expect(!fit.exact, "sine test function is not quadratic-exact");
        c.expect_close(fit.order, 2.0, 0.1, "consistency order");
    }

    // induced-area mismatch vanishes under refinement
    DomainSpec parabola = make_fixture("parabola");
    for (MeshVariant variant : {MeshVariant::OverBar, MeshVariant::UnderBar}) {
        double prev = 1e300;
        bool decreasing = true;
        for (double dx : {0.1, 0.05, 0.025, 0.0125}) {
            GridSpec g = build_rectangle(parabola, dx, dx);
            EmbeddedMesh m = build_mesh(parabola, g, variant);
            double a = induced_region_area_error(m, parabola, 16);
            decreasing = decreasing && a < prev;
            prev = a;
        }
        c.expect(decreasing,
                 variant == MeshVariant::OverBar
                     ? "extrapolated area error strictly decreasing over 4 levels"
                     : "interpolated area error strictly decreasing over 4 levels");
    }
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        void (*fn)(Criterion&);
    };
    const Entry entries[] = {
        {"criterion 1: parabolic-domain reproduction at dx=0.1", criterion1},
        {"criterion 2: refinement sweep reproduction", criterion2},
        {"criterion 3: covering-rectangle independence", criterion3},
        {"criterion 4: explicit/implicit heat stepping", criterion4},
        {"criterion 5: nonlinear pollinator steady state", criterion5},
        {"criterion 6: property suites", criterion6},
    };

    int failed = 0;
    for (const Entry& e : entries) {
        Criterion c;
        c.name = e.name;
        Clock clock;
        try {
            e.fn(c);
        } catch (const Error& err) {
            c.failures.push_back(std::string("unexpected error: ") + err.what());
        }
        c.seconds = clock.seconds();
        if (c.failures.empty()) {
            std::printf("[PASS] %s (%.2fs)\n", c.name.c_str(), c.seconds);
        } else {
            ++failed;
            std::printf("[FAIL] %s (%.2fs)\n", c.name.c_str(), c.seconds);
            for (const std::string& f : c.failures)
                std::printf("       - %s\n", f.c_str());
        }
    }
    return failed == 0 ? 0 : 1;
}
