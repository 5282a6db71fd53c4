#include "poromech/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "poromech/errors.hpp"

namespace poromech::io {

int ScenarioConfig::fluid_index(std::string_view n) const {
    for (std::size_t i = 0; i < fluids.size(); ++i)
        if (fluids[i].name == n) return static_cast<int>(i);
    return -1;
}

namespace {

const std::set<std::string> known_tags = {"left", "right", "top", "bottom"};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto end = pos == std::string_view::npos ? s.size() : pos;
        out.push_back(trim(s.substr(start, end - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

double to_double(std::string_view v, int line, std::string_view key) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (v.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(x))
        throw ParseError(line, fmt::format("'{}' expects a number, got '{}'", key, v));
    return x;
}

int to_int(std::string_view v, int line, std::string_view key) {
    int x = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (v.empty() || r.ec != std::errc() || r.ptr != end)
        throw ParseError(line, fmt::format("'{}' expects an integer, got '{}'", key, v));
    return x;
}

bool to_bool(std::string_view v, int line, std::string_view key) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ParseError(line, fmt::format("'{}' expects true or false, got '{}'", key, v));
}

std::vector<double> to_list(std::string_view v, int line, std::string_view key) {
    std::vector<double> out;
    for (auto w : words(v)) out.push_back(to_double(w, line, key));
    return out;
}

template <std::size_t N>
std::array<double, N> to_array(std::string_view v, int line, std::string_view key) {
    const auto l = to_list(v, line, key);
    if (l.size() != N) throw ParseError(line, fmt::format("'{}' expects {} numbers, got {}", key, N, l.size()));
    std::array<double, N> a{};
    std::copy(l.begin(), l.end(), a.begin());
    return a;
}

std::string word(std::string_view v, int line, std::string_view key) {
    if (v.empty()) throw ParseError(line, fmt::format("'{}' has no value", key));
    return std::string(v);
}

// Keys each fluid model accepts beyond the common ones.
const std::map<std::string, std::set<std::string>> model_keys = {
    {"ideal_gas", {"R", "T", "xi", "molar_mass"}},
    {"vdw", {"a", "b", "c", "R", "T", "molar_mass"}},
    {"incompressible_liquid", {"rho_tilde"}},
    {"constant_bulk", {"K_f", "rho_ref"}},
};

const std::set<std::string> fluid_common = {"model", "phi0", "P0", "p", "conductivity", "kappa", "viscosity"};

struct Parser {
    ScenarioConfig cfg;
    std::string section;  // full header text
    std::set<std::string> seen_sections;
    std::set<std::string> seen_keys;
    FluidConfig* fluid = nullptr;
    std::map<std::string, int> fluid_key_lines;
    BcConfig* bc = nullptr;

    void finish_fluid() {
        if (!fluid) return;
        const auto it = model_keys.find(fluid->model);
        if (fluid->model.empty())
            throw ValidationError("fluid." + fluid->name + ".model", "missing fluid model");
        if (it == model_keys.end())
            throw ValidationError("fluid." + fluid->name + ".model", "unknown fluid model '" + fluid->model + "'");
        for (const auto& [k, line] : fluid_key_lines)
            if (!fluid_common.count(k) && !it->second.count(k))
                throw ParseError(line, fmt::format("unknown key '{}' for fluid model '{}'", k, fluid->model));
        fluid = nullptr;
        fluid_key_lines.clear();
    }

    void open(std::string_view name, int line) {
        finish_fluid();
        bc = nullptr;
        const std::string s(name);
        if (!seen_sections.insert(s).second) throw ParseError(line, "duplicate section [" + s + "]");
        seen_keys.clear();
        section = s;
        if (s.rfind("fluid.", 0) == 0) {
            const std::string n = s.substr(6);
            if (n.empty()) throw ParseError(line, "fluid section without a name");
            cfg.fluids.push_back(FluidConfig{});
            fluid = &cfg.fluids.back();
            fluid->name = n;
        } else if (s.rfind("bc.", 0) == 0) {
            const std::string t = s.substr(3);
            if (t.empty()) throw ParseError(line, "bc section without a tag");
            cfg.bcs.push_back(BcConfig{});
            bc = &cfg.bcs.back();
            bc->tag = t;
        } else if (s != "scenario" && s != "geometry" && s != "solid" && s != "mixture" && s != "time" &&
                   s != "output" && s != "solver") {
            throw ParseError(line, "unknown section [" + s + "]");
        }
    }

    [[noreturn]] void unknown(std::string_view key, int line) const {
        throw ParseError(line, fmt::format("unknown key '{}' in [{}]", key, section));
    }

    void set(std::string_view key, std::string_view v, int line) {
        if (section.empty()) throw ParseError(line, "key outside of any section");
        if (!seen_keys.insert(std::string(key)).second)
            throw ParseError(line, fmt::format("duplicate key '{}' in [{}]", key, section));
        if (section == "scenario") {
            if (key == "name") cfg.name = word(v, line, key);
            else if (key == "description") cfg.description = std::string(v);
            else unknown(key, line);
        } else if (section == "geometry") {
            auto& g = cfg.geometry;
            if (key == "Lx") g.Lx = to_double(v, line, key);
            else if (key == "Ly") g.Ly = to_double(v, line, key);
            else if (key == "nx") g.nx = to_int(v, line, key);
            else if (key == "ny") g.ny = to_int(v, line, key);
            else unknown(key, line);
        } else if (section == "solid") {
            auto& s = cfg.solid;
            if (key == "model") s.model = word(v, line, key);
            else if (key == "lambda") s.lambda = to_double(v, line, key);
            else if (key == "mu") s.mu = to_double(v, line, key);
            else if (key == "phi0") s.phi0 = to_double(v, line, key);
            else if (key == "density") s.density = to_double(v, line, key);
            else unknown(key, line);
        } else if (section == "mixture") {
            auto& m = cfg.mixture;
            if (key == "volume_fraction") m.volume_fraction = word(v, line, key);
            else if (key == "gravity") m.gravity = to_bool(v, line, key);
            else if (key == "g") m.g = to_double(v, line, key);
            else unknown(key, line);
        } else if (fluid) {
            set_fluid(key, v, line);
        } else if (bc) {
            set_bc(key, v, line);
        } else if (section == "time") {
            auto& t = cfg.time;
            if (key == "t_end") t.t_end = to_double(v, line, key);
            else if (key == "dt") t.dt = to_double(v, line, key);
            else if (key == "dt0") t.dt0 = to_double(v, line, key);
            else if (key == "growth") t.growth = to_double(v, line, key);
            else if (key == "plot_times") t.plot_times = to_list(v, line, key);
            else unknown(key, line);
        } else if (section == "output") {
            auto& o = cfg.output;
            if (key == "directory") o.directory = word(v, line, key);
            else if (key == "cadence") o.cadence = to_int(v, line, key);
            else if (key == "probes") o.probes = to_probes(v, line);
            else if (key == "profile") o.profile = to_array<4>(v, line, key);
            else if (key == "profile_points") o.profile_points = to_int(v, line, key);
            else if (key == "vtk") o.vtk = to_bool(v, line, key);
            else unknown(key, line);
        } else if (section == "solver") {
            auto& s = cfg.solver;
            if (key == "rel_tol") s.rel_tol = to_double(v, line, key);
            else if (key == "abs_tol") s.abs_tol = to_double(v, line, key);
            else if (key == "max_iter") s.max_iter = to_int(v, line, key);
            else if (key == "max_halvings") s.max_halvings = to_int(v, line, key);
            else if (key == "threads") s.threads = to_int(v, line, key);
            else if (key == "transport") s.transport = word(v, line, key);
            else unknown(key, line);
        }
    }

    void set_fluid(std::string_view key, std::string_view v, int line) {
        auto& f = *fluid;
        fluid_key_lines[std::string(key)] = line;
        if (key == "model") f.model = word(v, line, key);
        else if (key == "R") f.R = to_double(v, line, key);
        else if (key == "T") f.T = to_double(v, line, key);
        else if (key == "xi") f.xi = to_double(v, line, key);
        else if (key == "molar_mass") f.molar_mass = to_double(v, line, key);
        else if (key == "a") f.a = to_double(v, line, key);
        else if (key == "b") f.b = to_double(v, line, key);
        else if (key == "c") f.c = to_double(v, line, key);
        else if (key == "rho_tilde") f.rho_tilde = to_double(v, line, key);
        else if (key == "K_f") f.K_f = to_double(v, line, key);
        else if (key == "rho_ref") f.rho_ref = to_double(v, line, key);
        else if (key == "phi0") f.phi0 = to_double(v, line, key);
        else if (key == "P0") f.P0 = to_double(v, line, key);
        else if (key == "p") f.p = to_double(v, line, key);
        else if (key == "conductivity") f.conductivity = to_double(v, line, key);
        else if (key == "kappa") f.kappa = to_double(v, line, key);
        else if (key == "viscosity") f.viscosity = to_double(v, line, key);
        else unknown(key, line);
    }

    void set_bc(std::string_view key, std::string_view v, int line) {
        auto& b = *bc;
        const auto dot = key.find('.');
        if (dot != std::string_view::npos) {
            const auto head = key.substr(0, dot);
            const std::string fl(key.substr(dot + 1));
            if (fl.empty()) throw ParseError(line, fmt::format("'{}' names no fluid", key));
            const double x = to_double(v, line, key);
            if (head == "eta") b.eta[fl] = x;
            else if (head == "p") b.p[fl] = x;
            else if (head == "P0") b.P0[fl] = x;
            else if (head == "flux") b.flux[fl] = x;
            else unknown(key, line);
            return;
        }
        if (key == "traction") b.traction = to_array<2>(v, line, key);
        else if (key == "ux") b.ux = to_double(v, line, key);
        else if (key == "uy") b.uy = to_double(v, line, key);
        else if (key == "tie") b.tie = word(v, line, key);
        else if (key == "flux_center") b.flux_center = to_double(v, line, key);
        else if (key == "flux_width") b.flux_width = to_double(v, line, key);
        else unknown(key, line);
    }

    static std::vector<Probe> to_probes(std::string_view v, int line) {
        std::vector<Probe> out;
        for (auto item : split(v, ';')) {
            if (item.empty()) continue;
            const auto w = words(item);
            if (w.size() != 3) throw ParseError(line, "probe entries are 'name x y'");
            out.push_back({std::string(w[0]), to_double(w[1], line, "probes"), to_double(w[2], line, "probes")});
        }
        return out;
    }
};

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
    return s;
}

void require(bool ok, const std::string& field, const std::string& msg) {
    if (!ok) throw ValidationError(field, msg);
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    Parser ps;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (const auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            ps.open(trim(line.substr(1, line.size() - 2)), line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(line_no, "missing key");
        ps.set(key, trim(line.substr(eq + 1)), line_no);
    }
    ps.finish_fluid();
    validate(ps.cfg);
    return std::move(ps.cfg);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::string s;
    auto kv = [&](std::string_view k, const std::string& v) { s += fmt::format("{} = {}\n", k, v); };
    s += "[scenario]\n";
    kv("name", c.name);
    if (!c.description.empty()) kv("description", c.description);

    s += "\n[geometry]\n";
    kv("Lx", num(c.geometry.Lx));
    kv("Ly", num(c.geometry.Ly));
    kv("nx", std::to_string(c.geometry.nx));
    kv("ny", std::to_string(c.geometry.ny));

    s += "\n[solid]\n";
    kv("model", c.solid.model);
    kv("lambda", num(c.solid.lambda));
    kv("mu", num(c.solid.mu));
    kv("phi0", num(c.solid.phi0));
    kv("density", num(c.solid.density));

    s += "\n[mixture]\n";
    kv("volume_fraction", c.mixture.volume_fraction);
    kv("gravity", c.mixture.gravity ? "true" : "false");
    kv("g", num(c.mixture.g));

    for (const auto& f : c.fluids) {
        s += "\n[fluid." + f.name + "]\n";
        kv("model", f.model);
        if (f.model == "ideal_gas" || f.model == "vdw") {
            if (f.model == "vdw") {
                kv("a", num(f.a));
                kv("b", num(f.b));
                kv("c", num(f.c));
            }
            kv("R", num(f.R));
            kv("T", num(f.T));
            if (f.model == "ideal_gas") kv("xi", num(f.xi));
            kv("molar_mass", num(f.molar_mass));
        } else if (f.model == "incompressible_liquid") {
            kv("rho_tilde", num(f.rho_tilde));
        } else if (f.model == "constant_bulk") {
            kv("K_f", num(f.K_f));
            kv("rho_ref", num(f.rho_ref));
        }
        kv("phi0", num(f.phi0));
        if (f.P0) kv("P0", num(*f.P0));
        if (f.p) kv("p", num(*f.p));
        if (f.conductivity) kv("conductivity", num(*f.conductivity));
        if (f.kappa != 0.0) kv("kappa", num(f.kappa));
        if (f.viscosity != 0.0) kv("viscosity", num(f.viscosity));
    }

    for (const auto& b : c.bcs) {
        s += "\n[bc." + b.tag + "]\n";
        if (b.traction) kv("traction", num((*b.traction)[0]) + " " + num((*b.traction)[1]));
        if (b.ux) kv("ux", num(*b.ux));
        if (b.uy) kv("uy", num(*b.uy));
        if (b.tie) kv("tie", *b.tie);
        for (const auto& [f, v] : b.eta) kv("eta." + f, num(v));
        for (const auto& [f, v] : b.p) kv("p." + f, num(v));
        for (const auto& [f, v] : b.P0) kv("P0." + f, num(v));
        for (const auto& [f, v] : b.flux) kv("flux." + f, num(v));
        if (b.flux_center) kv("flux_center", num(*b.flux_center));
        if (b.flux_width) kv("flux_width", num(*b.flux_width));
    }

    s += "\n[time]\n";
    kv("t_end", num(c.time.t_end));
    kv("dt", num(c.time.dt));
    kv("dt0", num(c.time.dt0));
    kv("growth", num(c.time.growth));
    if (!c.time.plot_times.empty()) kv("plot_times", list(c.time.plot_times));

    s += "\n[output]\n";
    kv("directory", c.output.directory);
    kv("cadence", std::to_string(c.output.cadence));
    if (!c.output.probes.empty()) {
        std::string p;
        for (std::size_t i = 0; i < c.output.probes.size(); ++i) {
            const auto& q = c.output.probes[i];
            p += (i ? "; " : "") + q.name + " " + num(q.x) + " " + num(q.y);
        }
        kv("probes", p);
    }
    if (c.output.profile) {
        const auto& l = *c.output.profile;
        kv("profile", list({l[0], l[1], l[2], l[3]}));
    }
    kv("profile_points", std::to_string(c.output.profile_points));
    kv("vtk", c.output.vtk ? "true" : "false");

    s += "\n[solver]\n";
    kv("rel_tol", num(c.solver.rel_tol));
    kv("abs_tol", num(c.solver.abs_tol));
    kv("max_iter", std::to_string(c.solver.max_iter));
    kv("max_halvings", std::to_string(c.solver.max_halvings));
    kv("threads", std::to_string(c.solver.threads));
    kv("transport", c.solver.transport);
    return s;
}

void validate(const ScenarioConfig& c) {
    require(!c.name.empty() && c.name.find_first_of("#\n \t") == std::string::npos, "scenario.name",
            "must be a single word without '#'");
    require(c.description.find_first_of("#\n") == std::string::npos, "scenario.description",
            "must be one line without '#'");
    const auto& g = c.geometry;
    require(g.Lx > 0.0, "geometry.Lx", "must be positive");
    require(g.Ly > 0.0, "geometry.Ly", "must be positive");
    require(g.nx >= 1, "geometry.nx", "must be at least 1");
    require(g.ny >= 1, "geometry.ny", "must be at least 1");

    const auto& s = c.solid;
    require(s.model == "neo_hookean" || s.model == "linear_elastic", "solid.model",
            "expected neo_hookean or linear_elastic, got '" + s.model + "'");
    require(s.mu > 0.0, "solid.mu", "must be positive");
    require(s.lambda + s.mu > 0.0, "solid.lambda", "lambda + mu must be positive");
    require(s.phi0 > 0.0 && s.phi0 <= 1.0, "solid.phi0", "must lie in (0, 1]");
    require(s.density >= 0.0, "solid.density", "must be non-negative");

    const auto& m = c.mixture;
    require(m.volume_fraction == "affine_solid" || m.volume_fraction == "incompressible_solid" ||
                m.volume_fraction == "unsaturated",
            "mixture.volume_fraction", "expected affine_solid, incompressible_solid or unsaturated");
    require(m.g > 0.0, "mixture.g", "must be positive");

    double sum = s.phi0;
    std::set<std::string> names;
    int liquids = 0;
    for (const auto& f : c.fluids) {
        const std::string p = "fluid." + f.name + ".";
        require(names.insert(f.name).second, "fluid." + f.name, "duplicate fluid");
        require(model_keys.count(f.model) != 0, p + "model", "unknown fluid model '" + f.model + "'");
        if (f.model == "ideal_gas" || f.model == "vdw") {
            require(f.R > 0.0, p + "R", "must be positive");
            require(f.T > 0.0, p + "T", "must be positive");
            require(f.molar_mass > 0.0, p + "molar_mass", "must be positive");
            if (f.model == "ideal_gas") require(f.xi > 0.0, p + "xi", "must be positive");
            if (f.model == "vdw") {
                require(f.a >= 0.0, p + "a", "must be non-negative");
                require(f.b > 0.0, p + "b", "must be positive");
                require(f.c > 0.0, p + "c", "must be positive");
            }
        } else if (f.model == "incompressible_liquid") {
            require(f.rho_tilde > 0.0, p + "rho_tilde", "must be positive");
            ++liquids;
        } else {
            require(f.K_f > 0.0, p + "K_f", "must be positive");
            require(f.rho_ref > 0.0, p + "rho_ref", "must be positive");
        }
        require(f.phi0 > 0.0 && f.phi0 < 1.0, p + "phi0", "must lie in (0, 1)");
        require(f.P0.has_value() != f.p.has_value(), p + "P0", "give exactly one of P0 or p");
        if (f.P0) require(*f.P0 > 0.0, p + "P0", "must be positive");
        if (f.p && f.model != "constant_bulk") require(*f.p > 0.0, p + "p", "must be positive");
        if (f.conductivity) {
            require(*f.conductivity > 0.0, p + "conductivity", "must be positive");
            require(f.kappa == 0.0 && f.viscosity == 0.0, p + "kappa", "give conductivity or kappa + viscosity, not both");
        } else {
            require(f.kappa > 0.0, p + "kappa", "must be positive (or give conductivity)");
            require(f.viscosity > 0.0, p + "viscosity", "must be positive (or give conductivity)");
        }
        sum += f.phi0;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "phi0",
            fmt::format("initial volume fractions sum to {}, expected 1", num(sum)));
    if (!c.fluids.empty())
        require(static_cast<int>(c.fluids.size()) > liquids, "fluids", "at least one compressible fluid is needed");
    require(c.fluids.size() <= 4, "fluids", "at most 4 fluids are supported");
    if (m.volume_fraction == "unsaturated")
        require(liquids > 0, "mixture.volume_fraction", "the unsaturated model needs an incompressible liquid");

    std::set<std::string> tags;
    for (const auto& b : c.bcs) {
        const std::string p = "bc." + b.tag;
        require(known_tags.count(b.tag) != 0, p, "unknown boundary tag (expected left, right, top or bottom)");
        if (b.tie) require(*b.tie == "ux" || *b.tie == "uy", p + ".tie", "expected ux or uy");
        for (const auto* mp : {&b.eta, &b.p, &b.P0, &b.flux})
            for (const auto& [f, v] : *mp)
                require(c.fluid_index(f) >= 0, p, "unknown fluid '" + f + "'");
        for (const auto& [f, v] : b.p)
            require(v > 0.0 || c.fluids[static_cast<std::size_t>(c.fluid_index(f))].model == "constant_bulk",
                    p + ".p." + f, "must be positive");
        for (const auto& [f, v] : b.P0) require(v > 0.0, p + ".P0." + f, "must be positive");
        if (b.flux_width) require(*b.flux_width >= 0.0, p + ".flux_width", "must be non-negative");
        if (b.flux_center || b.flux_width) require(!b.flux.empty(), p + ".flux_center", "flux segment without a flux");
    }

    const auto& t = c.time;
    require(t.t_end > 0.0, "time.t_end", "must be positive");
    require(t.dt > 0.0, "time.dt", "must be positive");
    require(t.dt0 >= 0.0, "time.dt0", "must be non-negative");
    require(t.growth >= 1.0, "time.growth", "must be at least 1");
    for (double pt : t.plot_times)
        require(pt > 0.0 && pt <= t.t_end, "time.plot_times", "plot times must lie in (0, t_end]");

    const auto& o = c.output;
    require(!o.directory.empty(), "output.directory", "must not be empty");
    require(o.cadence >= 1, "output.cadence", "must be at least 1");
    require(o.profile_points >= 2, "output.profile_points", "must be at least 2");
    for (const auto& pr : o.probes)
        require(pr.x >= 0.0 && pr.x <= g.Lx && pr.y >= 0.0 && pr.y <= g.Ly, "output.probes",
                "probe '" + pr.name + "' lies outside the domain");

    const auto& sv = c.solver;
    require(sv.rel_tol > 0.0, "solver.rel_tol", "must be positive");
    require(sv.abs_tol > 0.0, "solver.abs_tol", "must be positive");
    require(sv.max_iter >= 1, "solver.max_iter", "must be at least 1");
    require(sv.max_halvings >= 0, "solver.max_halvings", "must be non-negative");
    require(sv.threads >= 1, "solver.threads", "must be at least 1");
    require(sv.transport == "galerkin" || sv.transport == "upwind", "solver.transport", "expected galerkin or upwind");
}

}  // namespace poromech::io
