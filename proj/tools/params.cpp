#include "params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dualwave::cli {
namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double parse_number(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a finite number, got '" + text + "'");
    }
    return v;
}

void add(Schema& s, const std::string& key, const std::string& def, const std::string& help)
{
    s[key] = KeySpec{def, help};
}

void add_common(Schema& s, const std::string& command)
{
    add(s, "run.command", command, "subcommand this file configures");
    add(s, "run.id", "", "free-form recipe identifier");
    add(s, "run.note", "", "free-form note");
}

void add_orbital(Schema& s, const std::string& def_E)
{
    add(s, "orbital.E", def_E, "normalized orbital energy (> 1)");
}

void add_dipole(Schema& s)
{
    add(s, "dipole.a", "3", "pole half-spacing [l_p]");
    add(s, "dipole.Q", "1", "pole charge ratio");
    add(s, "dipole.branch", "outgoing", "outgoing | incoming");
}

void add_grid(Schema& s)
{
    add(s, "grid.xmin", "-20", "[l_p]");
    add(s, "grid.xmax", "20", "[l_p]");
    add(s, "grid.ymin", "-20", "[l_p]");
    add(s, "grid.ymax", "20", "[l_p]");
    add(s, "grid.nx", "512", "samples along x (>= 16)");
    add(s, "grid.ny", "512", "samples along y (>= 16)");
    add(s, "grid.z", "0", "slice height [l_p]");
    add(s, "grid.mask_radius", "0.05", "pole mask radius [l_p]");
}

std::map<std::string, Schema> build_schemas()
{
    std::map<std::string, Schema> all;

    Schema& disp = all["dispersion"];
    add_common(disp, "dispersion");
    add(disp, "dispersion.kmin", "0.2", "smallest wavenumber [k_p]");
    add(disp, "dispersion.kmax", "4", "largest wavenumber [k_p]");
    add(disp, "dispersion.samples", "400", "number of k samples (>= 2)");
    add(disp, "dispersion.spacing", "linear", "linear | log");

    Schema& eos = all["eos"];
    add_common(eos, "eos");
    add(eos, "eos.n0_min", "1e14", "[cm^-3]");
    add(eos, "eos.n0_max", "1e24", "[cm^-3]");
    add(eos, "eos.T", "300", "temperature [K]");
    add(eos, "eos.points", "101", "log-spaced sample count (>= 2)");

    Schema& sc = all["scales"];
    add_common(sc, "scales");
    add(sc, "scales.n0", "", "single density [cm^-3]; empty = sweep");
    add(sc, "scales.n0_min", "1e14", "[cm^-3]");
    add(sc, "scales.n0_max", "1e24", "[cm^-3]");
    add(sc, "scales.points", "101", "log-spaced sample count");
    add(sc, "scales.T", "300", "temperature [K]");
    add(sc, "scales.quantity", "all", "all | l_p | E_p | k_p | omega_p | v_p");

    Schema& s1 = all["solve1d"];
    add_common(s1, "solve1d");
    add_orbital(s1, "2");
    add(s1, "bc.Phi0", "1", "potential at the origin");
    add(s1, "bc.Psi0", "1", "wavefunction at the origin");
    add(s1, "solve1d.xmin", "-30", "[l_p]");
    add(s1, "solve1d.xmax", "30", "[l_p]");
    add(s1, "solve1d.samples", "3001", "(>= 2)");

    Schema& tr = all["trajectory"];
    add_common(tr, "trajectory");
    add_orbital(tr, "2");
    add(tr, "bc.Phi0", "1", "potential at the origin");
    add(tr, "bc.Psi0", "1", "wavefunction at the origin");
    add(tr, "particle.Gamma", "1", "mass ratio");
    add(tr, "particle.Q", "1", "charge ratio");
    add(tr, "particle.x0", "0", "initial position [l_p]");
    add(tr, "particle.v0", "0.82", "initial speed(s) [v_p], comma separated");
    add(tr, "trajectory.t_end", "200", "normalized time");
    add(tr, "trajectory.h", "1e-3", "time step");
    add(tr, "trajectory.stride", "100", "store every n-th step");
    add(tr, "trajectory.window", "", "localization window [l_p]; empty = beat wavelength");

    Schema& dp = all["dipole"];
    add_common(dp, "dipole");
    add_orbital(dp, "20");
    add_dipole(dp);
    add_grid(dp);
    add(dp, "output.channels", "Psi,Phi", "Psi, Phi, n, Efield");
    add(dp, "output.components", "full", "full (modulus, re, im) | abs");

    Schema& cu = all["currents"];
    add_common(cu, "currents");
    add_orbital(cu, "20");
    add_dipole(cu);
    add_grid(cu);
    add(cu, "output.channels", "J,Jd,Jt", "J, Jd, Jt");
    add(cu, "output.components", "full", "full (x, y, modulus) | abs");
    add(cu, "output.divergence", "false", "append 3D divergence columns");

    Schema& st = all["streamlines"];
    add_common(st, "streamlines");
    add_orbital(st, "20");
    add_dipole(st);
    add_grid(st);
    add(st, "streamlines.field", "bohmian", "bohmian | J | Jd | Jt | Efield");
    add(st, "streamlines.seeds", "poles", "poles | line | points | none");
    add(st, "streamlines.ring_count", "24", "seeds per pole ring");
    add(st, "streamlines.ring_radius", "0.25", "ring radius [l_p]");
    add(st, "streamlines.line", "-20,10,20,10", "x0,y0,x1,y1 for seeds = line");
    add(st, "streamlines.line_count", "32", "seeds on the line");
    add(st, "streamlines.points", "", "x:y;x:y;... for seeds = points");
    add(st, "streamlines.max_steps", "4000", "step cap per line");
    add(st, "streamlines.max_step", "", "arc-length cap; empty = 0.25/k2");
    add(st, "streamlines.tolerance", "1e-6", "local error per step");

    return all;
}

const std::map<std::string, Schema>& schemas()
{
    static const std::map<std::string, Schema> s = build_schemas();
    return s;
}

}  // namespace

const Schema& schema_for(const std::string& command)
{
    const auto it = schemas().find(command);
    if (it == schemas().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    return it->second;
}

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : schemas()) {
            n.push_back(k);
        }
        return n;
    }();
    return names;
}

ParamSet::ParamSet(std::string command, std::map<std::string, std::string> values)
    : command_(std::move(command)), values_(std::move(values))
{
}

ParamSet ParamSet::resolve(const std::string& command, const std::map<std::string, std::string>& file_values,
                           const std::map<std::string, std::string>& overrides)
{
    const Schema& schema = schema_for(command);
    std::map<std::string, std::string> values;
    for (const auto& [key, spec] : schema) {
        values[key] = spec.default_value;
    }
    auto apply = [&](const std::map<std::string, std::string>& src, const char* origin) {
        for (const auto& [key, value] : src) {
            if (!schema.count(key)) {
                std::string known;
                for (const auto& [k, s] : schema) {
                    known += (known.empty() ? "" : ", ") + k;
                }
                throw ConfigError(std::string(origin) + ": unknown key '" + key + "' for command '" + command +
                                  "' (known keys: " + known + ")");
            }
            values[key] = trim(value);
        }
    };
    apply(file_values, "config");
    apply(overrides, "override");
    if (values["run.command"] != command) {
        throw ConfigError("run.command: file configures '" + values["run.command"] + "' but the subcommand is '" +
                          command + "'");
    }
    return ParamSet(command, std::move(values));
}

std::string ParamSet::str(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("internal: key '" + key + "' is not part of command '" + command_ + "'");
    }
    return it->second;
}

double ParamSet::num(const std::string& key) const { return parse_number(key, str(key)); }

std::size_t ParamSet::count(const std::string& key) const
{
    const double v = num(key);
    if (v < 0.0 || v != std::floor(v) || v > 1e9) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + str(key) + "'");
    }
    return static_cast<std::size_t>(v);
}

bool ParamSet::flag(const std::string& key) const
{
    const std::string v = str(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty()) {
        return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> ParamSet::nums(const std::string& key) const
{
    std::vector<double> out;
    for (const std::string& item : split(str(key), ',')) {
        out.push_back(parse_number(key, item));
    }
    return out;
}

std::vector<std::string> ParamSet::words(const std::string& key) const { return split(str(key), ','); }

std::string ParamSet::choice(const std::string& key, const std::vector<std::string>& allowed) const
{
    const std::string v = str(key);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        std::string list;
        for (const auto& a : allowed) {
            list += (list.empty() ? "" : " | ") + a;
        }
        throw ConfigError(key + ": expected one of " + list + ", got '" + v + "'");
    }
    return v;
}

std::map<std::string, std::string> read_ini(const std::string& path)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config '" + path + "': " + e.message() +
                          (e.line() ? " (line " + std::to_string(e.line()) + ")" : std::string()));
    }
    std::map<std::string, std::string> out;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError(path + ": key '" + section + "' must live inside a [section]");
        }
        for (const auto& [key, value] : body) {
            out[section + "." + key] = value.get_value<std::string>();
        }
    }
    return out;
}

std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& items)
{
    std::map<std::string, std::string> out;
    for (const std::string& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("--set expects section.key=value, got '" + item + "'");
        }
        out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

}  // namespace dualwave::cli
