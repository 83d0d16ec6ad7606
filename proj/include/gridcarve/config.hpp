#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridcarve/assemble.hpp"
#include "gridcarve/errors.hpp"
#include "gridcarve/fixtures.hpp"
#include "gridcarve/geometry.hpp"
#include "gridcarve/solve.hpp"
#include "gridcarve/timestep.hpp"

namespace gridcarve {

// One fully validated run description, built from a sectioned key=value
// file. Unknown sections or keys are errors; every violated requirement is
// reported, not just the first.
struct RunConfig {
    DomainSpec domain = DomainSpec::polygon({{0, 0}, {1, 0}, {0, 1}});
    std::string domain_label;

    ProblemSpec problem{PoissonSpec{Expr::parse("0")}, Expr::parse("0"), std::nullopt,
                        std::nullopt};
    bool heat = false;
    double nu = 1.0;

    double dx = 0.0, dy = 0.0;
    bool padded = true;
    Rect fixed_rect{};

    std::string method = "gauss_seidel"; // gauss_seidel | jacobi | direct
    IterConfig iter;
    double relax = 1.0;

    std::string mode; // steady | sweep | timestep
    MeshVariant variant = MeshVariant::OverBar;
    std::vector<double> dx_list;
    int area_samples = 16;

    std::optional<double> dt;
    std::optional<double> cfl_fraction;
    double t0 = 0.0;
    long steps = 0;
    TimeConfig::Scheme scheme = TimeConfig::Scheme::Explicit;
    std::vector<double> snapshot_times;

    std::string out_dir = "out";
    bool csv_output = true;
    bool vtk_output = false;
};

namespace cfgdetail {

struct RawValue {
    std::string text;
    int line = 0;
    mutable bool used = false;
};

using RawConfig = std::map<std::string, std::map<std::string, RawValue>>;

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline RawConfig parse_raw(std::istream& in) {
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config parse error at line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("config parse error at line " + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config parse error at line " + std::to_string(lineno) +
                              ": expected key = value");
        if (section.empty())
            throw ConfigError("config parse error at line " + std::to_string(lineno) +
                              ": key outside any [section]");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config parse error at line " + std::to_string(lineno) +
                              ": empty key");
        if (raw[section].count(key))
            throw ConfigError("config parse error at line " + std::to_string(lineno) +
                              ": duplicate key " + section + "." + key);
        raw[section][key] = RawValue{value, lineno, false};
    }
    return raw;
}

inline std::vector<double> parse_reals(const std::string& text, const std::string& where,
                                       char sep = ',') {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (item.empty())
            continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("invalid number '" + item + "' in " + where);
        }
    }
    return out;
}

class Reader {
public:
    Reader(const RawConfig& raw) : raw_(raw) {}

    bool has(const std::string& section, const std::string& key) const {
        auto s = raw_.find(section);
        return s != raw_.end() && s->second.count(key) > 0;
    }

    const std::string* get(const std::string& section, const std::string& key) const {
        auto s = raw_.find(section);
        if (s == raw_.end())
            return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end())
            return nullptr;
        k->second.used = true;
        return &k->second.text;
    }

    std::string require(const std::string& section, const std::string& key) {
        const std::string* v = get(section, key);
        if (!v) {
            issues_.push_back("missing " + section + "." + key);
            return "";
        }
        return *v;
    }

    double require_real(const std::string& section, const std::string& key) {
        const std::string* v = get(section, key);
        if (!v) {
            issues_.push_back("missing " + section + "." + key);
            return 0.0;
        }
        return real_of(*v, section + "." + key);
    }

    double real_or(const std::string& section, const std::string& key, double fallback) {
        const std::string* v = get(section, key);
        return v ? real_of(*v, section + "." + key) : fallback;
    }

    long int_or(const std::string& section, const std::string& key, long fallback) {
        const std::string* v = get(section, key);
        if (!v)
            return fallback;
        try {
            return std::stol(*v);
        } catch (const std::exception&) {
            issues_.push_back("invalid integer in " + section + "." + key);
            return fallback;
        }
    }

    std::string string_or(const std::string& section, const std::string& key,
                          const std::string& fallback) {
        const std::string* v = get(section, key);
        return v ? *v : fallback;
    }

    Expr require_expr(const std::string& section, const std::string& key) {
        const std::string* v = get(section, key);
        if (!v) {
            issues_.push_back("missing " + section + "." + key);
            return Expr::parse("0");
        }
        return expr_of(*v, section + "." + key);
    }

    std::optional<Expr> optional_expr(const std::string& section, const std::string& key) {
        const std::string* v = get(section, key);
        if (!v)
            return std::nullopt;
        return expr_of(*v, section + "." + key);
    }

    void complain(const std::string& what) { issues_.push_back(what); }

    void check_choice(const std::string& section, const std::string& key,
                      const std::string& value, std::initializer_list<const char*> allowed) {
        if (value.empty())
            return; // the missing-key complaint is already recorded
        for (const char* a : allowed)
            if (value == a)
                return;
        std::string list;
        for (const char* a : allowed)
            list += std::string(list.empty() ? "" : "|") + a;
        issues_.push_back("invalid value '" + value + "' for " + section + "." + key +
                          " (expected " + list + ")");
    }

    // every key must have been consumed by now
    void finish() {
        for (const auto& [section, keys] : raw_)
            for (const auto& [key, value] : keys)
                if (!value.used)
                    issues_.push_back("unknown key " + section + "." + key + " (line " +
                                      std::to_string(value.line) + ")");
        if (!issues_.empty()) {
            std::string msg = "invalid config:";
            for (const std::string& i : issues_)
                msg += "\n  - " + i;
            throw ConfigError(msg);
        }
    }

private:
    double real_of(const std::string& text, const std::string& where) {
        try {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            if (used != text.size())
                throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            issues_.push_back("invalid number '" + text + "' in " + where);
            return 0.0;
        }
    }

    Expr expr_of(const std::string& text, const std::string& where) {
        try {
            return Expr::parse(text);
        } catch (const ParseError& e) {
            issues_.push_back("bad expression in " + where + ": " + e.what());
            return Expr::parse("0");
        }
    }

    const RawConfig& raw_;
    std::vector<std::string> issues_;
};

inline std::optional<Rect> rect_of(Reader& r, const std::string& section,
                                   const std::string& key) {
    const std::string* v = r.get(section, key);
    if (!v)
        return std::nullopt;
    std::vector<double> parts;
    try {
        parts = parse_reals(*v, section + "." + key);
    } catch (const ConfigError& e) {
        r.complain(e.what());
        return std::nullopt;
    }
    if (parts.size() != 4) {
        r.complain(section + "." + key + " needs four numbers x0,y0,x1,y1");
        return std::nullopt;
    }
    return Rect{parts[0], parts[1], parts[2], parts[3]};
}

inline DomainSpec build_domain(Reader& r, std::string& label) {
    int given = int(r.has("domain", "fixture")) + int(r.has("domain", "polygon")) +
                int(r.has("domain", "implicit")) + int(r.has("domain", "constraints"));
    std::optional<Rect> window = rect_of(r, "domain", "window");
    std::optional<Rect> bbox = rect_of(r, "domain", "bbox");
    DomainSpec fallback = DomainSpec::polygon({{0, 0}, {1, 0}, {0, 1}});
    if (given != 1) {
        for (const char* key : {"fixture", "polygon", "implicit", "constraints"})
            r.get("domain", key); // consume so only this complaint is reported
        r.complain("domain needs exactly one of fixture|polygon|implicit|constraints");
        return fallback;
    }
    try {
        if (const std::string* name = r.get("domain", "fixture")) {
            label = *name;
            DomainSpec d = make_fixture(*name);
            if (bbox)
                d.with_bbox(*bbox);
            return d;
        }
        if (const std::string* poly = r.get("domain", "polygon")) {
            label = "polygon";
            std::vector<Point> pts;
            std::string pair;
            std::stringstream ss(*poly);
            while (std::getline(ss, pair, ';')) {
                pair = trim(pair);
                if (pair.empty())
                    continue;
                std::vector<double> xy = parse_reals(pair, "domain.polygon");
                if (xy.size() != 2)
                    throw ConfigError("domain.polygon vertices need the form x,y; x,y; ...");
                pts.push_back({xy[0], xy[1]});
            }
            DomainSpec d = DomainSpec::polygon(std::move(pts));
            if (bbox)
                d.with_bbox(*bbox);
            return d;
        }
        if (const std::string* phi = r.get("domain", "implicit")) {
            label = "implicit";
            DomainSpec d = DomainSpec::implicit(Expr::parse(*phi), window);
            if (bbox)
                d.with_bbox(*bbox);
            return d;
        }
        const std::string* cons = r.get("domain", "constraints");
        label = "constraints";
        std::vector<Expr> gs;
        std::string one;
        std::stringstream ss(*cons);
        while (std::getline(ss, one, ';')) {
            one = trim(one);
            if (!one.empty())
                gs.push_back(Expr::parse(one));
        }
        DomainSpec d = DomainSpec::curve_bounded(std::move(gs), window);
        if (bbox)
            d.with_bbox(*bbox);
        return d;
    } catch (const ParseError& e) {
        r.complain(std::string("bad domain expression: ") + e.what());
    } catch (const ConfigError& e) {
        r.complain(e.what());
    } catch (const GeometryError& e) {
        r.complain(std::string("bad domain: ") + e.what());
    }
    return fallback;
}

} // namespace cfgdetail

inline RunConfig load_config_stream(std::istream& in) {
    using namespace cfgdetail;
    RawConfig raw = parse_raw(in);
    Reader r(raw);
    RunConfig cfg;

    cfg.mode = r.require("run", "mode");
    r.check_choice("run", "mode", cfg.mode, {"steady", "sweep", "timestep"});

    cfg.domain = build_domain(r, cfg.domain_label);

    // problem section
    std::string kind = r.require("problem", "kind");
    r.check_choice("problem", "kind", kind,
                   {"poisson", "helmholtz", "varcoeff", "pollinator", "heat"});
    Expr dirichlet = r.require_expr("problem", "dirichlet");
    std::optional<Expr> exact = r.optional_expr("problem", "exact");
    std::optional<Expr> initial = r.optional_expr("problem", "initial");
    if (kind == "poisson") {
        cfg.problem = ProblemSpec{PoissonSpec{r.require_expr("problem", "f")}, dirichlet,
                                  exact, initial};
    } else if (kind == "helmholtz") {
        cfg.problem = ProblemSpec{HelmholtzSpec{r.require_expr("problem", "f"),
                                                r.require_expr("problem", "g")},
                                  dirichlet, exact, initial};
    } else if (kind == "varcoeff") {
        cfg.problem = ProblemSpec{VarCoeffSpec{r.require_expr("problem", "coef"),
                                               r.require_expr("problem", "f")},
                                  dirichlet, exact, initial};
    } else if (kind == "pollinator") {
        PollinatorSpec ps;
        ps.d1 = r.require_real("problem", "d1");
        ps.k = r.require_real("problem", "k");
        std::string mob = r.string_or("problem", "mobility", "constant");
        r.check_choice("problem", "mobility", mob, {"constant", "proportional"});
        ps.mobility = mob == "constant" ? Mobility::Constant : Mobility::ProportionalToP;
        cfg.problem = ProblemSpec{ps, dirichlet, exact, initial};
        if (r.has("problem", "d1") && !(ps.d1 > 0.0))
            r.complain("problem.d1 must be positive");
        if (r.has("problem", "k") && !(ps.k > 0.0))
            r.complain("problem.k must be positive");
    } else if (kind == "heat") {
        cfg.heat = true;
        cfg.nu = r.real_or("problem", "nu", 1.0);
        cfg.problem = ProblemSpec{PoissonSpec{Expr::parse("0")}, dirichlet, exact, initial};
        if (!cfg.problem.initial)
            r.complain("missing problem.initial (required for kind=heat)");
        if (!(cfg.nu > 0.0))
            r.complain("problem.nu must be positive");
    }

    // grid section
    cfg.dx = r.require_real("grid", "dx");
    cfg.dy = r.real_or("grid", "dy", cfg.dx);
    std::string policy = r.string_or("grid", "policy", "padded");
    r.check_choice("grid", "policy", policy, {"padded", "fixed"});
    cfg.padded = policy == "padded";
    if (!cfg.padded) {
        std::optional<Rect> rect = cfgdetail::rect_of(r, "grid", "rect");
        if (!rect)
            r.complain("grid.policy=fixed needs grid.rect = x0,y0,x1,y1");
        else
            cfg.fixed_rect = *rect;
    } else if (r.has("grid", "rect")) {
        r.complain("grid.rect is only valid with grid.policy=fixed");
    }

    // solver section
    cfg.method = r.string_or("solver", "method", "gauss_seidel");
    r.check_choice("solver", "method", cfg.method, {"gauss_seidel", "jacobi", "direct"});
    cfg.iter.tol = r.real_or("solver", "tol", 1e-13);
    cfg.iter.max_iter = r.int_or("solver", "max_iter", 10'000'000);
    cfg.relax = r.real_or("solver", "relax", 1.0);
    std::string init = r.string_or("solver", "init", "zeros");
    r.check_choice("solver", "init", init, {"zeros", "boundary_average"});
    cfg.iter.init = init == "zeros" ? IterConfig::Init::Zeros
                                    : IterConfig::Init::BoundaryAverage;

    // run section
    std::string variant = r.string_or("run", "variant", "overbar");
    r.check_choice("run", "variant", variant, {"overbar", "underbar"});
    cfg.variant = variant == "overbar" ? MeshVariant::OverBar : MeshVariant::UnderBar;
    cfg.area_samples = int(r.int_or("run", "area_samples", 16));

    if (cfg.mode == "sweep") {
        const std::string* list = r.get("run", "dx_list");
        if (!list)
            r.complain("missing run.dx_list (required for mode=sweep)");
        else {
            try {
                cfg.dx_list = cfgdetail::parse_reals(*list, "run.dx_list");
            } catch (const ConfigError& e) {
                r.complain(e.what());
            }
            if (cfg.dx_list.empty())
                r.complain("run.dx_list must contain at least one spacing");
        }
    }
    if (cfg.mode == "timestep") {
        if (r.has("run", "dt"))
            cfg.dt = r.require_real("run", "dt");
        if (r.has("run", "cfl_fraction"))
            cfg.cfl_fraction = r.require_real("run", "cfl_fraction");
        if (!cfg.dt && !cfg.cfl_fraction)
            r.complain("mode=timestep needs run.dt or run.cfl_fraction");
        if (cfg.dt && cfg.cfl_fraction)
            r.complain("run.dt and run.cfl_fraction are mutually exclusive");
        cfg.t0 = r.real_or("run", "t0", 0.0);
        cfg.steps = r.int_or("run", "steps", 0);
        if (cfg.steps < 1)
            r.complain("missing or invalid run.steps (must be >= 1)");
        std::string scheme = r.require("run", "scheme");
        r.check_choice("run", "scheme", scheme, {"explicit", "implicit"});
        cfg.scheme = scheme == "implicit" ? TimeConfig::Scheme::Implicit
                                          : TimeConfig::Scheme::Explicit;
        if (const std::string* snaps = r.get("run", "snapshot_times")) {
            try {
                cfg.snapshot_times = cfgdetail::parse_reals(*snaps, "run.snapshot_times");
            } catch (const ConfigError& e) {
                r.complain(e.what());
            }
        }
        if (!cfg.heat)
            r.complain("mode=timestep needs problem.kind=heat");
    } else if (cfg.heat) {
        r.complain("problem.kind=heat needs run.mode=timestep");
    }

    // output section
    cfg.out_dir = r.string_or("output", "dir", "out");
    std::string formats = r.string_or("output", "formats", "csv");
    cfg.csv_output = false;
    cfg.vtk_output = false;
    {
        std::stringstream ss(formats);
        std::string f;
        while (std::getline(ss, f, ',')) {
            f = cfgdetail::trim(f);
            if (f == "csv")
                cfg.csv_output = true;
            else if (f == "vtk")
                cfg.vtk_output = true;
            else if (!f.empty())
                r.complain("unknown output format '" + f + "'");
        }
    }

    if (r.has("grid", "dx") && !(cfg.dx > 0.0))
        r.complain("grid.dx must be positive");
    if (r.has("grid", "dy") && !(cfg.dy > 0.0))
        r.complain("grid.dy must be positive");
    if (!(cfg.relax > 0.0 && cfg.relax <= 1.0))
        r.complain("solver.relax must be in (0, 1]");

    r.finish();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return load_config_stream(in);
}

} // namespace gridcarve
