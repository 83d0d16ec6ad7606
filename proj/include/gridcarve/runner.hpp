#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gridcarve/analyze.hpp"
#include "gridcarve/config.hpp"
#include "gridcarve/io.hpp"
#include "gridcarve/timestep.hpp"

namespace gridcarve {

// Exit codes, one per failing subsystem.
enum ExitCode {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitGeometry = 3,
    kExitMesh = 4,
    kExitSolver = 5,
    kExitTimestep = 6,
};

struct CliOptions {
    bool dump_system = false;
    std::optional<std::string> out_dir;
};

namespace rundetail {

inline std::string short4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

inline std::string coords(double x, double y) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "(%g,%g)", x, y);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const auto& writer) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot write output file '" + path.string() + "'");
    writer(os);
}

inline EmbeddedMesh make_mesh(const RunConfig& cfg) {
    GridSpec g = cfg.padded ? build_rectangle(cfg.domain, cfg.dx, cfg.dy)
                            : build_rectangle(cfg.domain, cfg.fixed_rect, cfg.dx, cfg.dy);
    EmbeddedMesh m = build_mesh(cfg.domain, g, cfg.variant);
    if (!check_connectivity(m))
        throw MeshError("interior not connected at dx=" + std::to_string(cfg.dx) +
                        " (refine the grid or check the domain)");
    return m;
}

inline void run_steady(const RunConfig& cfg, const CliOptions& opt,
                       const std::filesystem::path& out) {
    EmbeddedMesh m = make_mesh(cfg);
    write_file(out / "mesh.csv", [&](std::ostream& os) { write_mesh_csv(os, m); });

    Field f = Field::undefined(m.grid);
    SolveReport rep;
    DiscreteProblem dp;
    if (cfg.problem.is_linear()) {
        dp = assemble_linear(cfg.problem, m, 0.0);
        if (!diagonally_dominant(dp))
            std::cerr << "warning: system is not diagonally dominant; "
                         "iteration may not converge\n";
        if (opt.dump_system)
            write_file(out / "system.csv",
                       [&](std::ostream& os) { write_system_csv(os, dp); });
        if (cfg.method == "jacobi") {
            std::tie(f, rep) = solve_jacobi(dp, cfg.iter);
        } else if (cfg.method == "direct") {
            f = solve_direct_dense(dp);
            rep.converged = true;
            auto [mn, mx] = interior_extrema(f, m);
            rep.min = mn;
            rep.max = mx;
        } else {
            std::tie(f, rep) = solve_gauss_seidel(dp, cfg.iter);
        }
    } else {
        dp = assemble_pollinator(cfg.problem, m);
        std::tie(f, rep) = solve_fixed_point(dp, cfg.iter, cfg.relax);
    }
    if (!rep.converged)
        throw SolveError("solver hit max_iter=" + std::to_string(cfg.iter.max_iter) +
                         " with update norm " + std::to_string(rep.final_update_norm));

    if (cfg.problem.exact)
        rep.error_vs_exact = error_inf(f, *cfg.problem.exact, m);

    if (cfg.csv_output)
        write_file(out / "solution.csv",
                   [&](std::ostream& os) { write_solution_csv(os, f, m); });
    if (cfg.vtk_output)
        write_file(out / "solution.vtk",
                   [&](std::ostream& os) { write_vtk(os, f, m, "u"); });

    if (!cfg.problem.is_linear()) {
        // companion plant density p = 2a - 1 and the herbivore reduction
        Field p_field = f;
        for (double& v : p_field.v)
            if (std::isfinite(v))
                v = 2.0 * v - 1.0;
        const auto& ps = std::get<PollinatorSpec>(cfg.problem.kind);
        Field h_field = reduce_plants_herbivores(p_field, ps.k);
        if (cfg.csv_output) {
            write_file(out / "plants.csv",
                       [&](std::ostream& os) { write_solution_csv(os, p_field, m); });
            write_file(out / "herbivores.csv",
                       [&](std::ostream& os) { write_solution_csv(os, h_field, m); });
        }
    }

    std::string err = "n/a";
    if (rep.error_vs_exact) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.4e", *rep.error_vs_exact);
        err = buf;
    }
    std::cout << "steady domain=" << cfg.domain_label << " variant="
              << (cfg.variant == MeshVariant::OverBar ? "overbar" : "underbar")
              << " n=" << dp.n() << " iter=" << rep.iterations << " err=" << err
              << " min=" << short4(rep.min.value) << " @ " << coords(rep.min.x, rep.min.y)
              << " max=" << short4(rep.max.value) << " @ " << coords(rep.max.x, rep.max.y)
              << "\n";
}

inline void run_sweep_mode(const RunConfig& cfg, const std::filesystem::path& out) {
    SweepReport rep = run_sweep(cfg.domain, cfg.problem, cfg.dx_list, cfg.variant, cfg.iter,
                                cfg.area_samples);
    write_file(out / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, rep); });
    for (const SweepRow& r : rep.rows) {
        char errbuf[40];
        std::snprintf(errbuf, sizeof errbuf, "%.4e", r.error_inf);
        std::cout << "sweep dx=" << r.dx << " min=" << short4(r.u_min) << " @ "
                  << coords(r.x_min, r.y_min) << " max=" << short4(r.u_max) << " @ "
                  << coords(r.x_max, r.y_max) << " err=" << errbuf << " iter=" << r.iterations
                  << " area_err=" << short4(r.area_error) << "\n";
    }
    if (!rep.ok()) {
        if (rep.failure == SweepFailure::Mesh)
            throw MeshError("sweep aborted at dx=" + std::to_string(rep.failed_dx) + ": " +
                            rep.message);
        throw SolveError("sweep aborted at dx=" + std::to_string(rep.failed_dx) + ": " +
                         rep.message);
    }
}

inline void run_timestep(const RunConfig& cfg, const std::filesystem::path& out) {
    EmbeddedMesh m = make_mesh(cfg);
    write_file(out / "mesh.csv", [&](std::ostream& os) { write_mesh_csv(os, m); });

    TimeConfig tc;
    tc.nu = cfg.nu;
    tc.dt = cfg.dt ? *cfg.dt : *cfg.cfl_fraction * cfl_limit(m, cfg.nu);
    if (!(tc.dt > 0.0))
        throw TimestepError("computed time step is not positive");
    tc.t0 = cfg.t0;
    tc.steps = cfg.steps;
    tc.scheme = cfg.scheme;
    tc.snapshot_times = cfg.snapshot_times;

    std::vector<Snapshot> snaps = march(m, cfg.problem, tc, cfg.iter);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        char name[64];
        if (cfg.csv_output) {
            std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
            write_file(out / name, [&](std::ostream& os) {
                write_snapshot_csv(os, snaps[i].field, m, snaps[i].t);
            });
        }
        if (cfg.vtk_output) {
            std::snprintf(name, sizeof name, "snapshot_%03zu.vtk", i);
            write_file(out / name, [&](std::ostream& os) {
                write_vtk(os, snaps[i].field, m, "u");
            });
        }
    }

    std::cout << "timestep domain=" << cfg.domain_label << " scheme="
              << (tc.scheme == TimeConfig::Scheme::Explicit ? "explicit" : "implicit")
              << " dt=" << tc.dt << " steps=" << tc.steps
              << " cfl_limit=" << cfl_limit(m, cfg.nu) << " snapshots=" << snaps.size()
              << "\n";
}

} // namespace rundetail

inline int run(const RunConfig& cfg, const CliOptions& opt = {}) {
    try {
        std::filesystem::path out = opt.out_dir ? *opt.out_dir : cfg.out_dir;
        std::filesystem::create_directories(out);
        if (cfg.mode == "steady")
            rundetail::run_steady(cfg, opt, out);
        else if (cfg.mode == "sweep")
            rundetail::run_sweep_mode(cfg, out);
        else
            rundetail::run_timestep(cfg, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EvalError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return kExitMesh;
    } catch (const TimestepError& e) {
        std::cerr << "timestep error: " << e.what() << "\n";
        return kExitTimestep;
    } catch (const SolveError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}

inline int run_cli(int argc, char** argv) {
    auto usage = [](std::ostream& os) {
        os << "usage:\n"
              "  gridcarve run <config> [--dump-system] [--out DIR]\n"
              "  gridcarve sweep <config> [--out DIR]\n"
              "\n"
              "Solves the problem described by <config> (sectioned key=value file).\n"
              "`sweep` requires run.mode=sweep in the config. GRIDCARVE_THREADS caps\n"
              "parallel area sampling (0 = all cores).\n";
    };
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        usage(args.empty() ? std::cerr : std::cout);
        return args.empty() ? kExitUsage : kExitOk;
    }
    std::string command = args[0];
    if (command != "run" && command != "sweep") {
        std::cerr << "unknown command '" << command << "'\n";
        usage(std::cerr);
        return kExitUsage;
    }

    CliOptions opt;
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--dump-system") {
            opt.dump_system = true;
        } else if (args[i] == "--out") {
            if (i + 1 >= args.size()) {
                std::cerr << "--out needs a directory argument\n";
                return kExitUsage;
            }
            opt.out_dir = args[++i];
        } else if (!args[i].empty() && args[i][0] == '-') {
            std::cerr << "unknown flag '" << args[i] << "'\n";
            return kExitUsage;
        } else if (config_path.empty()) {
            config_path = args[i];
        } else {
            std::cerr << "unexpected argument '" << args[i] << "'\n";
            return kExitUsage;
        }
    }
    if (config_path.empty()) {
        std::cerr << "missing config path\n";
        usage(std::cerr);
        return kExitUsage;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (command == "sweep" && cfg.mode != "sweep") {
        std::cerr << "config error: `gridcarve sweep` needs run.mode=sweep (got '" << cfg.mode
                  << "')\n";
        return kExitConfig;
    }
    return run(cfg, opt);
}

} // namespace gridcarve
