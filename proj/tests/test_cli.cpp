#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gridcarve/runner.hpp"

using namespace gridcarve;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(GC_SOURCE_DIR) / "configs";
const fs::path kGolden = fs::path(GC_SOURCE_DIR) / "tests" / "golden";

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("gridcarve_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CaptureStdout {
    std::stringstream buffer;
    std::streambuf* old;
    CaptureStdout() : old(std::cout.rdbuf(buffer.rdbuf())) {}
    ~CaptureStdout() { std::cout.rdbuf(old); }
};

struct CaptureStderr {
    std::stringstream buffer;
    std::streambuf* old;
    CaptureStderr() : old(std::cerr.rdbuf(buffer.rdbuf())) {}
    ~CaptureStderr() { std::cerr.rdbuf(old); }
};

int run_config_text(const std::string& text, const std::string& tag,
                    std::string* out_text = nullptr, std::string* err_text = nullptr) {
    fs::path dir = temp_dir(tag);
    std::istringstream in(text);
    int code;
    {
        CaptureStdout cout_cap;
        CaptureStderr cerr_cap;
        try {
            RunConfig cfg = load_config_stream(in);
            CliOptions opt;
            opt.out_dir = (dir / "out").string();
            code = run(cfg, opt);
        } catch (const ConfigError& e) {
            cerr_cap.buffer << e.what();
            code = kExitConfig;
        }
        if (out_text)
            *out_text = cout_cap.buffer.str();
        if (err_text)
            *err_text = cerr_cap.buffer.str();
    }
    return code;
}

} // namespace

TEST_CASE("all shipped configs load") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(kConfigs)) {
        if (entry.path().extension() != ".cfg")
            continue;
        ++count;
        INFO(entry.path().filename());
        CHECK_NOTHROW(load_config(entry.path().string()));
    }
    CHECK(count >= 15);
}

TEST_CASE("reference config reproduces the expected summary") {
    RunConfig cfg = load_config((kConfigs / "parabola_poisson.cfg").string());
    fs::path dir = temp_dir("parabola_run");
    CliOptions opt;
    opt.out_dir = dir.string();
    std::string summary;
    {
        CaptureStdout cap;
        CHECK(run(cfg, opt) == kExitOk);
        summary = cap.buffer.str();
    }
    CHECK(summary.find("min=0.2500 @ (0.4,0.1)") != std::string::npos);
    CHECK(summary.find("max=2.8900 @ (0.9,0.8)") != std::string::npos);
    CHECK(summary.find("n=24") != std::string::npos);
    CHECK(fs::exists(dir / "mesh.csv"));
    CHECK(fs::exists(dir / "solution.csv"));
}

TEST_CASE("validation lists every violated key") {
    std::string bad = R"(
[domain]
fixture = parabola
[problem]
kind = poisson
dirichlet = (x+y)^2
[run]
mode = steady
)";
    std::istringstream in(bad);
    try {
        load_config_stream(in);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string what = e.what();
        CHECK(what.find("grid.dx") != std::string::npos); // missing
        CHECK(what.find("problem.f") != std::string::npos);
    }

    std::string unknown = R"(
[domain]
fixture = parabola
[problem]
kind = poisson
f = 4
dirichlet = 0
typo_key = 1
[grid]
dx = 0.1
[run]
mode = steady
)";
    std::istringstream in2(unknown);
    try {
        load_config_stream(in2);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("problem.typo_key") != std::string::npos);
    }
}

TEST_CASE("parse errors carry line numbers") {
    std::string text = "[domain\nfixture = parabola\n";
    std::istringstream in(text);
    try {
        load_config_stream(in);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }

    std::string dup = "[grid]\ndx = 0.1\ndx = 0.2\n";
    std::istringstream in2(dup);
    CHECK_THROWS_AS(load_config_stream(in2), ConfigError);

    std::string stray = "dx = 0.1\n";
    std::istringstream in3(stray);
    CHECK_THROWS_AS(load_config_stream(in3), ConfigError);
}

TEST_CASE("pollinator config validates") {
    std::string text = R"(
[domain]
fixture = star
[problem]
kind = pollinator
d1 = 10
k = 0.45
mobility = proportional
dirichlet = 0.8851
[grid]
dx = 0.125
[run]
mode = steady
)";
    std::istringstream in(text);
    RunConfig cfg = load_config_stream(in);
    CHECK_FALSE(cfg.problem.is_linear());
    CHECK(std::get<PollinatorSpec>(cfg.problem.kind).d1 == 10.0);
    CHECK(std::get<PollinatorSpec>(cfg.problem.kind).mobility == Mobility::ProportionalToP);
}

TEST_CASE("module failures map to distinct exit codes") {
    // disconnected interior -> mesh error, exit 4
    const char* sq1 = "((abs(x-1)+abs(y-1))+abs(abs(x-1)-abs(y-1)))/2-0.6";
    const char* sq2 = "((abs(x-5)+abs(y-1))+abs(abs(x-5)-abs(y-1)))/2-0.6";
    std::string disconnected = std::string("[domain]\nimplicit = ((") + sq1 + ")+(" + sq2 +
                               ")-abs((" + sq1 + ")-(" + sq2 +
                               ")))/2\nwindow = -1,-1,7,3\n"
                               "[problem]\nkind = poisson\nf = 0\ndirichlet = 1\n"
                               "[grid]\ndx = 0.25\n[run]\nmode = steady\n";
    std::string err;
    CHECK(run_config_text(disconnected, "disconnected", nullptr, &err) == kExitMesh);
    CHECK(err.find("interior not connected") != std::string::npos);

    // expression faulting during classification -> geometry error, exit 3
    std::string geo = "[domain]\nimplicit = sqrt(x) - 0.5\nwindow = -0.5,-0.5,1,1\n"
                      "[problem]\nkind = poisson\nf = 0\ndirichlet = 1\n"
                      "[grid]\ndx = 0.25\n[run]\nmode = steady\n";
    CHECK(run_config_text(geo, "geoerr") == kExitGeometry);

    // iteration starved of sweeps -> solver error, exit 5
    std::string starved = "[domain]\nfixture = parabola\n"
                          "[problem]\nkind = poisson\nf = 4\ndirichlet = (x+y)^2\n"
                          "[grid]\ndx = 0.1\n[solver]\nmax_iter = 2\n[run]\nmode = steady\n";
    CHECK(run_config_text(starved, "starved") == kExitSolver);

    // implicit stepping with a starved inner solve -> timestep error, exit 6
    std::string tserr = "[domain]\nfixture = unit_square\n"
                        "[problem]\nkind = heat\ndirichlet = 0\ninitial = "
                        "sin(pi*x)*sin(pi*y)\n[grid]\ndx = 0.1\n[solver]\nmax_iter = 1\n"
                        "[run]\nmode = timestep\nscheme = implicit\ndt = 0.01\nsteps = 3\n";
    CHECK(run_config_text(tserr, "tserr") == kExitTimestep);

    // broken config -> exit 2
    std::string broken = "[domain]\nfixture = parabola\n";
    CHECK(run_config_text(broken, "broken") == kExitConfig);
}

TEST_CASE("golden files") {
    struct Row {
        const char* config;
        const char* sub;
        std::vector<const char*> files;
    };
    const Row rows[] = {
        {"parabola_poisson.cfg", "parabola_poisson", {"mesh.csv", "solution.csv"}},
        {"parabola_poisson_underbar.cfg", "parabola_poisson_underbar", {"solution.csv"}},
        {"parabola_sweep.cfg", "parabola_sweep", {"sweep.csv"}},
        {"parabola_sweep_underbar.cfg", "parabola_sweep_underbar", {"sweep.csv"}},
        {"square_poisson_cos.cfg", "square_poisson_cos", {"solution.csv"}},
    };
    for (const Row& row : rows) {
        RunConfig cfg = load_config((kConfigs / row.config).string());
        fs::path dir = temp_dir(std::string("golden_") + row.sub);
        CliOptions opt;
        opt.out_dir = dir.string();
        CaptureStdout mute;
        REQUIRE(run(cfg, opt) == kExitOk);
        for (const char* file : row.files) {
            INFO(row.config << " / " << file);
            CHECK(slurp(dir / file) == slurp(kGolden / row.sub / file));
        }
    }
}

TEST_CASE("running every shipped config twice is byte-stable") {
    for (const auto& entry : fs::directory_iterator(kConfigs)) {
        if (entry.path().extension() != ".cfg")
            continue;
        INFO(entry.path().filename());
        RunConfig cfg = load_config(entry.path().string());
        fs::path a = temp_dir("stable_a");
        fs::path b = temp_dir("stable_b");
        CaptureStdout mute;
        CliOptions oa, ob;
        oa.out_dir = a.string();
        ob.out_dir = b.string();
        REQUIRE(run(cfg, oa) == kExitOk);
        REQUIRE(run(cfg, ob) == kExitOk);
        int compared = 0;
        for (const auto& f : fs::directory_iterator(a)) {
            ++compared;
            CHECK(slurp(f.path()) == slurp(b / f.path().filename()));
        }
        CHECK(compared > 0);
    }
}

TEST_CASE("sweep row count follows dx_list") {
    std::string text = R"(
[domain]
fixture = parabola
[problem]
kind = poisson
f = 4
dirichlet = (x+y)^2
exact = (x+y)^2
[grid]
dx = 0.1
[run]
mode = sweep
dx_list = 0.1, 0.08, 0.06
)";
    std::istringstream in(text);
    RunConfig cfg = load_config_stream(in);
    fs::path dir = temp_dir("sweep3");
    CliOptions opt;
    opt.out_dir = dir.string();
    CaptureStdout mute;
    REQUIRE(run(cfg, opt) == kExitOk);
    std::string csv = slurp(dir / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + one row per dx
}

TEST_CASE("vtk output and system dumps") {
    std::string text = R"(
[domain]
fixture = parabola
[problem]
kind = poisson
f = 4
dirichlet = (x+y)^2
[grid]
dx = 0.1
policy = fixed
rect = -0.2,-0.2,1.2,1.2
[run]
mode = steady
[output]
formats = csv, vtk
)";
    std::istringstream in(text);
    RunConfig cfg = load_config_stream(in);
    fs::path dir = temp_dir("vtk");
    CliOptions opt;
    opt.out_dir = dir.string();
    opt.dump_system = true;
    CaptureStdout mute;
    REQUIRE(run(cfg, opt) == kExitOk);

    std::string vtk = slurp(dir / "solution.vtk");
    CHECK(vtk.rfind("# vtk DataFile Version 3.0", 0) == 0);
    CHECK(vtk.find("DATASET STRUCTURED_POINTS") != std::string::npos);
    CHECK(vtk.find("DIMENSIONS 15 15 1") != std::string::npos);
    CHECK(vtk.find("-1e+30") != std::string::npos); // exterior blanking value

    std::string sys = slurp(dir / "system.csv");
    CHECK(sys.rfind("row,center,cE,cW,cN,cS,rhs", 0) == 0);
    // 24 unknowns plus header
    CHECK(std::count(sys.begin(), sys.end(), '\n') == 25);
}

TEST_CASE("command-line parsing") {
    auto call = [](std::vector<std::string> args) {
        std::vector<char*> argv;
        static std::string prog = "gridcarve";
        argv.push_back(prog.data());
        for (std::string& a : args)
            argv.push_back(a.data());
        CaptureStdout o;
        CaptureStderr e;
        return run_cli(int(argv.size()), argv.data());
    };
    CHECK(call({"--help"}) == kExitOk);
    CHECK(call({}) == kExitUsage);
    CHECK(call({"frobnicate", "x.cfg"}) == kExitUsage);
    CHECK(call({"run"}) == kExitUsage);
    CHECK(call({"run", "/nonexistent/path.cfg"}) == kExitConfig);
    CHECK(call({"run", (kConfigs / "parabola_poisson.cfg").string(), "--out"}) == kExitUsage);
    // `sweep` refuses configs in other modes
    CHECK(call({"sweep", (kConfigs / "parabola_poisson.cfg").string()}) == kExitConfig);

    fs::path dir = temp_dir("cli_run");
    CHECK(call({"run", (kConfigs / "parabola_poisson.cfg").string(), "--out", dir.string()}) ==
          kExitOk);
    CHECK(fs::exists(dir / "solution.csv"));
}
