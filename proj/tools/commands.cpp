#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "dualwave/constants.hpp"
#include "dualwave/dynamics.hpp"
#include "dualwave/eos.hpp"
#include "dualwave/errors.hpp"
#include "dualwave/fieldmaps.hpp"
#include "dualwave/pseudoforce.hpp"
#include "dualwave/scales.hpp"
#include "manifest.hpp"

#ifndef DUALWAVE_VERSION
#define DUALWAVE_VERSION "0.0.0"
#endif

namespace dualwave::cli {
namespace fs = std::filesystem;

namespace {

using Derived = std::vector<std::pair<std::string, std::string>>;

struct Context {
    const ParamSet& params;
    const RunOptions& options;
    RunResult result;

    void metadata(Table& t) const
    {
        t.metadata.emplace_back("artifact", std::string("dualwave ") + DUALWAVE_VERSION);
        t.metadata.emplace_back("command", params.command());
        for (const auto& [k, v] : params.values()) {
            t.metadata.emplace_back(k, v);
        }
        for (const auto& [k, v] : result.derived) {
            t.metadata.emplace_back("derived." + k, v);
        }
    }

    void emit(Table& t, const std::string& stem)
    {
        metadata(t);
        result.files.push_back(write_table(t, options.out_dir, stem, options.format));
    }

    void raster(const std::vector<double>& values, std::size_t nx, std::size_t ny, const std::string& stem)
    {
        if (options.raster) {
            result.files.push_back(write_pgm(values, nx, ny, options.out_dir, stem));
        }
    }
};

std::string num(double v) { return format_number(v); }

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw ConfigError(message);
    }
}

Orbital orbital_from(const ParamSet&, double E)
{
    try {
        return make_orbital(E);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("orbital.E: ") + e.what());
    }
}

void add_orbital_derived(Derived& d, const Orbital& o, const std::string& prefix = "")
{
    d.emplace_back(prefix + "alpha", num(o.alpha));
    d.emplace_back(prefix + "k1", num(o.k1));
    d.emplace_back(prefix + "k2", num(o.k2));
    d.emplace_back(prefix + "beat_wavelength", num(o.beat_wavelength()));
}

DipoleConfig dipole_from(const ParamSet& p)
{
    const Orbital orb = orbital_from(p, p.num("orbital.E"));
    const std::string branch = p.choice("dipole.branch", {"outgoing", "incoming"});
    try {
        return make_dipole(orb, p.num("dipole.a"), p.num("dipole.Q"),
                           branch == "outgoing" ? Branch::outgoing : Branch::incoming);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("dipole: ") + e.what());
    }
}

GridSpec grid_from(const ParamSet& p)
{
    GridSpec g;
    g.domain = Domain{p.num("grid.xmin"), p.num("grid.xmax"), p.num("grid.ymin"), p.num("grid.ymax")};
    g.nx = p.count("grid.nx");
    g.ny = p.count("grid.ny");
    g.z = p.num("grid.z");
    g.mask_radius = p.num("grid.mask_radius");
    require(g.domain.xmax > g.domain.xmin, "grid: xmax must exceed xmin (degenerate domain)");
    require(g.domain.ymax > g.domain.ymin, "grid: ymax must exceed ymin (degenerate domain)");
    require(g.nx >= 16 && g.ny >= 16, "grid.nx, grid.ny: need at least 16 samples per axis");
    require(g.nx * g.ny <= 64u * 1024u * 1024u, "grid: more than 2^26 nodes requested");
    require(g.mask_radius >= 0.0, "grid.mask_radius: must be >= 0");
    return g;
}

std::optional<Probe> probe_from(const RunOptions& o)
{
    if (o.probe.empty()) {
        return std::nullopt;
    }
    std::vector<double> v;
    std::stringstream in(o.probe);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            require(used == item.size(), "");
        } catch (const std::exception&) {
            throw ConfigError("--probe: expected x0,y0,x1,y1[,samples], got '" + o.probe + "'");
        }
    }
    require(v.size() == 4 || v.size() == 5, "--probe: expected x0,y0,x1,y1[,samples], got '" + o.probe + "'");
    Probe p{{v[0], v[1]}, {v[2], v[3]}, v.size() == 5 ? static_cast<std::size_t>(v[4]) : 512};
    require(p.samples >= 256, "--probe: need at least 256 samples");
    require(p.start.x != p.end.x || p.start.y != p.end.y, "--probe: start and end coincide");
    return p;
}

// ---- dispersion -----------------------------------------------------------

void cmd_dispersion(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const double kmin = p.num("dispersion.kmin");
    const double kmax = p.num("dispersion.kmax");
    const std::size_t samples = p.count("dispersion.samples");
    const std::string spacing = p.choice("dispersion.spacing", {"linear", "log"});
    require(kmin > 0.0 && kmax > kmin, "dispersion: need 0 < kmin < kmax");
    require(samples >= 2, "dispersion.samples: need at least 2");

    std::vector<double> ks;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
        ks.push_back(spacing == "linear" ? kmin + t * (kmax - kmin)
                                         : std::exp(std::log(kmin) + t * (std::log(kmax) - std::log(kmin))));
    }
    // The beating point is where the branches meet; always tabulate it.
    if (kmin <= 1.0 && kmax >= 1.0 && std::find(ks.begin(), ks.end(), 1.0) == ks.end()) {
        ks.insert(std::upper_bound(ks.begin(), ks.end(), 1.0), 1.0);
    }

    Table t;
    auto& k = t.add("k[k_p]");
    auto& E = t.add("E[E_p]");
    auto& free = t.add("E_free[E_p]");
    auto& branch = t.add_text("branch");
    for (double kv : ks) {
        k.numbers.push_back(kv);
        E.numbers.push_back(eval_dispersion(kv));
        free.numbers.push_back(0.5 * kv * kv);
        branch.text.push_back(kv < 1.0 ? "collective" : kv > 1.0 ? "single-electron" : "beating-point");
    }
    ctx.emit(t, "dispersion");
}

// ---- eos / scales ---------------------------------------------------------

std::vector<double> log_sweep(double lo, double hi, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        v[i] = std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)));
    }
    v.front() = lo;
    v.back() = hi;
    return v;
}

void cmd_eos(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const double lo = p.num("eos.n0_min");
    const double hi = p.num("eos.n0_max");
    const double T = p.num("eos.T");
    const std::size_t points = p.count("eos.points");
    require(lo > 0.0 && hi > lo, "eos: need 0 < n0_min < n0_max (densities must be positive)");
    require(T > 0.0, "eos.T: temperature must be positive");
    require(points >= 2, "eos.points: need at least 2");

    Table t;
    auto& n0 = t.add("n0[cm^-3]");
    auto& mu = t.add("mu[eV]");
    auto& P = t.add("P[erg/cm^3]");
    auto& Ep = t.add("E_p[eV]");
    auto& lp = t.add("l_p[nm]");
    auto& EF = t.add("E_F[eV]");
    for (double n : log_sweep(lo, hi, points)) {
        const double m = mu_of_density(n, T);
        const PhysicalScales s = derive_scales(n, T);
        n0.numbers.push_back(n);
        mu.numbers.push_back(m);
        P.numbers.push_back(pressure_of_mu(m, T));
        Ep.numbers.push_back(s.E_p);
        lp.numbers.push_back(s.l_p);
        EF.numbers.push_back(fermi_energy(n));
    }
    ctx.emit(t, "eos");
}

void cmd_scales(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const double T = p.num("scales.T");
    require(T >= 0.0, "scales.T: temperature must be >= 0");
    const std::string q = p.choice("scales.quantity", {"all", "l_p", "E_p", "k_p", "omega_p", "v_p"});

    std::vector<double> densities;
    if (!p.str("scales.n0").empty()) {
        const double n = p.num("scales.n0");
        require(n > 0.0, "scales.n0: density must be positive");
        densities.push_back(n);
    } else {
        const double lo = p.num("scales.n0_min");
        const double hi = p.num("scales.n0_max");
        const std::size_t points = p.count("scales.points");
        require(lo > 0.0 && hi > lo, "scales: need 0 < n0_min < n0_max (densities must be positive)");
        require(points >= 2, "scales.points: need at least 2");
        densities = log_sweep(lo, hi, points);
    }

    Table t;
    t.add("n0[cm^-3]");
    const std::vector<std::pair<std::string, std::string>> all = {
        {"E_p", "E_p[eV]"}, {"omega_p", "omega_p[rad/s]"}, {"k_p", "k_p[cm^-1]"}, {"l_p", "l_p[nm]"}, {"v_p", "v_p[cm/s]"}};
    std::vector<std::pair<std::string, std::size_t>> picked;
    for (const auto& [key, name] : all) {
        if (q == "all" || q == key) {
            t.add(name);
            picked.emplace_back(key, t.columns.size() - 1);
        }
    }
    for (double n : densities) {
        const PhysicalScales s = derive_scales(n, T);
        t.columns[0].numbers.push_back(n);
        for (const auto& [key, col] : picked) {
            const double v = key == "E_p" ? s.E_p : key == "omega_p" ? s.omega_p : key == "k_p" ? s.k_p
                           : key == "l_p" ? s.l_p : s.v_p;
            t.columns[col].numbers.push_back(v);
        }
    }
    ctx.emit(t, "scales");
}

// ---- solve1d / trajectory -------------------------------------------------

void cmd_solve1d(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const Orbital orb = orbital_from(p, p.num("orbital.E"));
    const BoundaryConstants bc{p.num("bc.Phi0"), p.num("bc.Psi0")};
    const double xmin = p.num("solve1d.xmin");
    const double xmax = p.num("solve1d.xmax");
    const std::size_t samples = p.count("solve1d.samples");
    require(xmax > xmin, "solve1d: xmax must exceed xmin");
    require(samples >= 2, "solve1d.samples: need at least 2");
    add_orbital_derived(ctx.result.derived, orb);

    Table t;
    auto& x = t.add("x[l_p]");
    auto& Phi = t.add("Phi[E_p]");
    auto& Psi = t.add("Psi[1]");
    auto& n = t.add("n[1]");
    auto& dPhi = t.add("dPhi_dx[E_p/l_p]");
    auto& dPsi = t.add("dPsi_dx[1/l_p]");
    for (std::size_t i = 0; i < samples; ++i) {
        const double xv = xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const RealFieldPair f = eval_1d(xv, bc, orb);
        const RealFieldPair g = eval_1d_gradient(xv, bc, orb);
        x.numbers.push_back(xv);
        Phi.numbers.push_back(f.Phi);
        Psi.numbers.push_back(f.Psi);
        n.numbers.push_back(f.Psi * f.Psi);
        dPhi.numbers.push_back(g.Phi);
        dPsi.numbers.push_back(g.Psi);
    }
    ctx.emit(t, "solve1d");
}

void cmd_trajectory(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const std::vector<double> energies = p.nums("orbital.E");
    const std::vector<double> speeds = p.nums("particle.v0");
    require(!energies.empty(), "orbital.E: at least one energy is required");
    require(!speeds.empty(), "particle.v0: at least one speed is required");
    const BoundaryConstants bc{p.num("bc.Phi0"), p.num("bc.Psi0")};
    TestParticle base{p.num("particle.Gamma"), p.num("particle.Q"), p.num("particle.x0"), 0.0};
    require(base.Gamma > 0.0, "particle.Gamma: mass ratio must be positive");
    const double t_end = p.num("trajectory.t_end");
    const double h = p.num("trajectory.h");
    const std::size_t stride = p.count("trajectory.stride");
    require(t_end > 0.0, "trajectory.t_end: must be positive");
    require(h > 0.0, "trajectory.h: must be positive");
    require(stride >= 1, "trajectory.stride: must be >= 1");
    const bool fixed_window = !p.str("trajectory.window").empty();
    const double window = fixed_window ? p.num("trajectory.window") : 0.0;
    require(!fixed_window || window > 0.0, "trajectory.window: must be positive");

    std::vector<Orbital> orbitals;
    for (double E : energies) {
        orbitals.push_back(orbital_from(p, E));
        const Orbital& o = orbitals.back();
        require(h <= 0.1 / o.k2, fmt::format("trajectory.h: step {} does not resolve k2 = {} at E = {}; use h <= {}",
                                             h, o.k2, E, 0.1 / o.k2));
    }
    for (std::size_t e = 0; e < orbitals.size(); ++e) {
        add_orbital_derived(ctx.result.derived, orbitals[e], fmt::format("E{}.", energies[e]));
    }

    Table paths;
    auto& id = paths.add("id");
    auto& Ec = paths.add("E[E_p]");
    auto& v0c = paths.add("v0[v_p]");
    auto& tc = paths.add("t[1/omega_p]");
    auto& xc = paths.add("x[l_p]");
    auto& vc = paths.add("v[v_p]");

    Table summary;
    auto& sid = summary.add("id");
    auto& sE = summary.add("E[E_p]");
    auto& sv0 = summary.add("v0[v_p]");
    auto& sdrift = summary.add("energy_drift[1]");
    auto& sxmin = summary.add("x_min[l_p]");
    auto& sxmax = summary.add("x_max[l_p]");
    auto& swin = summary.add("window[l_p]");
    auto& smotion = summary.add_text("motion");

    std::size_t next_id = 0;
    for (std::size_t e = 0; e < orbitals.size(); ++e) {
        for (double v0 : speeds) {
            TestParticle tp = base;
            tp.v0 = v0;
            const Trajectory tr = integrate_field_trajectory(tp, bc, orbitals[e], t_end, h, stride);
            const double w = fixed_window ? window : orbitals[e].beat_wavelength();
            const Motion m = classify_trajectory(tr, w);
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                id.numbers.push_back(static_cast<double>(next_id));
                Ec.numbers.push_back(energies[e]);
                v0c.numbers.push_back(v0);
                tc.numbers.push_back(tr.times[i]);
                xc.numbers.push_back(tr.positions[i]);
                vc.numbers.push_back(tr.velocities[i]);
            }
            sid.numbers.push_back(static_cast<double>(next_id));
            sE.numbers.push_back(energies[e]);
            sv0.numbers.push_back(v0);
            sdrift.numbers.push_back(tr.energy_drift);
            sxmin.numbers.push_back(tr.x_min);
            sxmax.numbers.push_back(tr.x_max);
            swin.numbers.push_back(w);
            smotion.text.push_back(to_string(m));
            ++next_id;
        }
    }
    ctx.emit(paths, "trajectory");
    ctx.emit(summary, "trajectory_summary");
}

// ---- dipole / currents ----------------------------------------------------

std::vector<ScalarChannel> parse_channels(const ParamSet& p, const std::vector<std::string>& allowed)
{
    std::vector<ScalarChannel> out;
    for (const std::string& w : p.words("output.channels")) {
        if (std::find(allowed.begin(), allowed.end(), w) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) {
                list += (list.empty() ? "" : ", ") + a;
            }
            throw ConfigError("output.channels: unknown channel '" + w + "' (allowed: " + list + ")");
        }
        static const std::map<std::string, ScalarChannel> names = {
            {"Psi", ScalarChannel::Psi}, {"Phi", ScalarChannel::Phi}, {"n", ScalarChannel::n},
            {"J", ScalarChannel::J},     {"Jd", ScalarChannel::Jd},   {"Jt", ScalarChannel::Jt},
            {"Efield", ScalarChannel::Efield}};
        out.push_back(names.at(w));
    }
    require(!out.empty(), "output.channels: at least one channel is required");
    return out;
}

void grid_axes(Table& t, const FieldGrid& g)
{
    auto& x = t.add("x[l_p]");
    auto& y = t.add("y[l_p]");
    x.numbers.reserve(g.size());
    y.numbers.reserve(g.size());
    for (std::size_t j = 0; j < g.spec.ny; ++j) {
        for (std::size_t i = 0; i < g.spec.nx; ++i) {
            x.numbers.push_back(g.x(i));
            y.numbers.push_back(g.y(j));
        }
    }
}

void probe_outputs(Context& ctx, const FieldGrid& g, const std::vector<ScalarChannel>& channels)
{
    const std::optional<Probe> probe = probe_from(ctx.options);
    if (!probe) {
        return;
    }
    Table prof;
    auto& s = prof.add("s[l_p]");
    for (std::size_t i = 0; i < probe->samples; ++i) {
        s.numbers.push_back(static_cast<double>(i) * probe->spacing());
    }
    Table spec;
    auto& name = spec.add_text("channel");
    auto& freq = spec.add("peak_frequency[k_p]");
    auto& bin = spec.add("bin_width[k_p]");
    auto& contrast = spec.add("peak_to_mean[1]");
    for (ScalarChannel c : channels) {
        std::vector<double> mag = sample_magnitude(g, c, *probe);
        const SpectrumPeak pk = fringe_spectrum(g, c, *probe);
        name.text.push_back(to_string(c));
        freq.numbers.push_back(pk.frequency);
        bin.numbers.push_back(pk.bin_width);
        contrast.numbers.push_back(fringe_contrast(mag));
        prof.add(fmt::format("abs_{}[1]", to_string(c))).numbers = std::move(mag);
    }
    ctx.emit(prof, "probe_profile");
    ctx.emit(spec, "probe_spectrum");
}

void cmd_dipole(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const DipoleConfig cfg = dipole_from(p);
    const GridSpec spec = grid_from(p);
    const auto channels = parse_channels(p, {"Psi", "Phi", "n", "Efield"});
    const bool full = p.choice("output.components", {"full", "abs"}) == "full";
    probe_from(ctx.options);
    add_orbital_derived(ctx.result.derived, cfg.orbital);

    const FieldGrid g = evaluate_grid(cfg, spec, ctx.options.threads);
    ctx.result.derived.emplace_back("masked_nodes", std::to_string(g.masked_count()));

    Table t;
    grid_axes(t, g);
    for (ScalarChannel c : channels) {
        const std::string n = to_string(c);
        if (c == ScalarChannel::n) {
            t.add("n[1]").numbers = g.n;
            continue;
        }
        t.add(fmt::format("abs_{}[1]", n)).numbers = magnitude(g, c);
        if (!full) {
            continue;
        }
        if (c == ScalarChannel::Efield) {
            for (int comp = 0; comp < 2; ++comp) {
                auto& re = t.add(fmt::format("re_E{}[E_p/l_p]", comp ? 'y' : 'x'));
                auto& im = t.add(fmt::format("im_E{}[E_p/l_p]", comp ? 'y' : 'x'));
                for (const ComplexVec2& e : g.Efield) {
                    re.numbers.push_back(e[comp].real());
                    im.numbers.push_back(e[comp].imag());
                }
            }
        } else {
            const std::vector<complex>& data = c == ScalarChannel::Psi ? g.Psi : g.Phi;
            auto& re = t.add(fmt::format("re_{}[1]", n));
            auto& im = t.add(fmt::format("im_{}[1]", n));
            for (const complex& v : data) {
                re.numbers.push_back(v.real());
                im.numbers.push_back(v.imag());
            }
        }
    }
    ctx.emit(t, "dipole");
    for (ScalarChannel c : channels) {
        ctx.raster(magnitude(g, c), spec.nx, spec.ny, fmt::format("dipole_{}", to_string(c)));
    }
    probe_outputs(ctx, g, channels);
}

void cmd_currents(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const DipoleConfig cfg = dipole_from(p);
    const GridSpec spec = grid_from(p);
    const auto channels = parse_channels(p, {"J", "Jd", "Jt"});
    const bool full = p.choice("output.components", {"full", "abs"}) == "full";
    const bool with_div = p.flag("output.divergence");
    probe_from(ctx.options);
    add_orbital_derived(ctx.result.derived, cfg.orbital);

    const FieldGrid g = evaluate_grid(cfg, spec, ctx.options.threads);
    ctx.result.derived.emplace_back("masked_nodes", std::to_string(g.masked_count()));

    Table t;
    grid_axes(t, g);
    for (ScalarChannel c : channels) {
        const std::string n = to_string(c);
        const std::vector<Vec2>& v = c == ScalarChannel::J ? g.J : c == ScalarChannel::Jd ? g.Jd : g.Jt;
        t.add(fmt::format("abs_{}[1]", n)).numbers = magnitude(g, c);
        if (full) {
            auto& x = t.add(fmt::format("{}_x[1]", n));
            auto& y = t.add(fmt::format("{}_y[1]", n));
            for (const Vec2& e : v) {
                x.numbers.push_back(e.x);
                y.numbers.push_back(e.y);
            }
        }
        if (with_div) {
            const CurrentChannel cc = c == ScalarChannel::J ? CurrentChannel::J
                                    : c == ScalarChannel::Jd ? CurrentChannel::Jd : CurrentChannel::Jt;
            t.add(fmt::format("div_{}[1/l_p]", n)).numbers = divergence(g, cc);
        }
    }
    ctx.emit(t, "currents");
    for (ScalarChannel c : channels) {
        ctx.raster(magnitude(g, c), spec.nx, spec.ny, fmt::format("currents_{}", to_string(c)));
    }
    probe_outputs(ctx, g, channels);
}

// ---- streamlines ----------------------------------------------------------

std::vector<Vec2> parse_points(const std::string& text)
{
    std::vector<Vec2> pts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const auto colon = item.find(':');
        try {
            require(colon != std::string::npos, "");
            pts.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw ConfigError("streamlines.points: expected x:y;x:y;..., got '" + item + "'");
        }
    }
    return pts;
}

void cmd_streamlines(Context& ctx)
{
    const ParamSet& p = ctx.params;
    const DipoleConfig cfg = dipole_from(p);
    const GridSpec spec = grid_from(p);
    const std::string field = p.choice("streamlines.field", {"bohmian", "J", "Jd", "Jt", "Efield"});
    const std::string mode = p.choice("streamlines.seeds", {"poles", "line", "points", "none"});
    StreamlineOptions opt = dipole_streamline_options(cfg);
    opt.max_steps = p.count("streamlines.max_steps");
    opt.tolerance = p.num("streamlines.tolerance");
    opt.pole_radius = std::max(spec.mask_radius, 1e-12);
    if (!p.str("streamlines.max_step").empty()) {
        opt.max_step = p.num("streamlines.max_step");
    }
    require(opt.max_step > opt.min_step, "streamlines.max_step: must exceed 1e-6");
    require(opt.tolerance > 0.0, "streamlines.tolerance: must be positive");
    require(opt.max_steps >= 1, "streamlines.max_steps: must be >= 1");

    std::vector<Vec2> seeds;
    if (mode == "poles") {
        const std::size_t count = p.count("streamlines.ring_count");
        const double r = p.num("streamlines.ring_radius");
        require(r > opt.pole_radius, "streamlines.ring_radius: must exceed the pole mask radius");
        for (const double px : {-cfg.a, cfg.a}) {
            for (std::size_t i = 0; i < count; ++i) {
                const double th = 2.0 * cgs::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
                seeds.push_back({px + r * std::cos(th), r * std::sin(th)});
            }
            if (cfg.a == 0.0) {
                break;
            }
        }
    } else if (mode == "line") {
        const std::vector<double> l = p.nums("streamlines.line");
        require(l.size() == 4, "streamlines.line: expected x0,y0,x1,y1");
        const std::size_t count = p.count("streamlines.line_count");
        for (std::size_t i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
            seeds.push_back({l[0] + t * (l[2] - l[0]), l[1] + t * (l[3] - l[1])});
        }
    } else if (mode == "points") {
        seeds = parse_points(p.str("streamlines.points"));
    }
    for (const Vec2& s : seeds) {
        require(spec.domain.contains(s), fmt::format("streamlines: seed ({}, {}) lies outside the grid domain", s.x, s.y));
    }
    add_orbital_derived(ctx.result.derived, cfg.orbital);
    ctx.result.derived.emplace_back("max_step", num(opt.max_step));

    VectorSampler sampler;
    if (field == "bohmian") {
        sampler = [&cfg](const Vec2& q) { return bohmian_velocity(q, cfg); };
    } else if (field == "Efield") {
        // Real part: the field at t = 0.
        sampler = [&cfg](const Vec2& q) {
            const ComplexVec2 e = electric_field({q.x, q.y, 0.0}, cfg, 0.0);
            return Vec2{e[0].real(), e[1].real()};
        };
    } else {
        sampler = [&cfg, field](const Vec2& q) {
            const Vec3 r{q.x, q.y, 0.0};
            const ComplexFieldPair f = eval_dipole(r, cfg);
            const ComplexGradientPair d = eval_dipole_gradient(r, cfg);
            const Vec3 j = probability_current(f.Psi, d.Psi);
            const Vec3 jd = probability_current(f.Phi, d.Phi);
            if (field == "J") {
                return Vec2{j.x, j.y};
            }
            if (field == "Jd") {
                return Vec2{-jd.x, -jd.y};
            }
            return Vec2{j.x - jd.x, j.y - jd.y};
        };
    }
    const std::vector<Streamline> lines = trace_streamlines(sampler, seeds, spec.domain, opt);

    Table poly;
    auto& id = poly.add("id");
    auto& s = poly.add("s[l_p]");
    auto& x = poly.add("x[l_p]");
    auto& y = poly.add("y[l_p]");
    Table summary;
    auto& sid = summary.add("id");
    auto& sx = summary.add("seed_x[l_p]");
    auto& sy = summary.add("seed_y[l_p]");
    auto& npts = summary.add("points");
    auto& len = summary.add("length[l_p]");
    auto& why = summary.add_text("terminated_by");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        double arc = 0.0;
        const auto& pts = lines[i].points;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k > 0) {
                arc += std::hypot(pts[k].x - pts[k - 1].x, pts[k].y - pts[k - 1].y);
            }
            id.numbers.push_back(static_cast<double>(i));
            s.numbers.push_back(arc);
            x.numbers.push_back(pts[k].x);
            y.numbers.push_back(pts[k].y);
        }
        sid.numbers.push_back(static_cast<double>(i));
        sx.numbers.push_back(seeds[i].x);
        sy.numbers.push_back(seeds[i].y);
        npts.numbers.push_back(static_cast<double>(pts.size()));
        len.numbers.push_back(arc);
        why.text.push_back(to_string(lines[i].terminated_by));
    }
    ctx.emit(poly, "streamlines");
    ctx.emit(summary, "streamline_summary");
}

std::map<std::string, std::string> options_record(const RunOptions& o)
{
    return {{"format", o.format == Format::json ? "json" : "csv"},
            {"raster", o.raster ? "true" : "false"},
            {"probe", o.probe}};
}

}  // namespace

RunResult run_command(const ParamSet& params, const RunOptions& options)
{
    fs::create_directories(options.out_dir);
    Context ctx{params, options, {}};
    const std::string& c = params.command();
    if (c == "dispersion") {
        cmd_dispersion(ctx);
    } else if (c == "eos") {
        cmd_eos(ctx);
    } else if (c == "scales") {
        cmd_scales(ctx);
    } else if (c == "solve1d") {
        cmd_solve1d(ctx);
    } else if (c == "trajectory") {
        cmd_trajectory(ctx);
    } else if (c == "dipole") {
        cmd_dipole(ctx);
    } else if (c == "currents") {
        cmd_currents(ctx);
    } else if (c == "streamlines") {
        cmd_streamlines(ctx);
    } else {
        throw ConfigError("unknown command '" + c + "'");
    }
    return ctx.result;
}

RunResult run_with_manifest(const ParamSet& params, const RunOptions& options)
{
    RunManifest m;
    m.version = DUALWAVE_VERSION;
    m.command = params.command();
    m.parameters = params.values();
    m.options = options_record(options);
    m.started_utc = utc_timestamp();
    RunResult r = run_command(params, options);
    m.finished_utc = utc_timestamp();
    m.derived = r.derived;
    for (const std::string& f : r.files) {
        const fs::path path = fs::path(options.out_dir) / f;
        m.outputs.push_back(OutputRecord{f, sha256_file(path.string()), fs::file_size(path)});
    }
    write_manifest(m, (fs::path(options.out_dir) / "manifest.json").string());
    return r;
}

std::vector<std::string> select_recipes(const std::string& recipe_dir, const std::string& id)
{
    if (!fs::is_directory(recipe_dir)) {
        throw ConfigError("figure recipe directory '" + recipe_dir + "' does not exist");
    }
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(recipe_dir)) {
        if (entry.path().extension() == ".cfg") {
            stems.push_back(entry.path().stem().string());
        }
    }
    std::sort(stems.begin(), stems.end());
    if (id == "all") {
        return stems;
    }
    std::vector<std::string> out;
    for (const std::string& s : stems) {
        // "fig1" selects fig1a..fig1d but not fig10.
        const bool prefix = s.rfind(id, 0) == 0 && (s.size() == id.size() || !std::isdigit(static_cast<unsigned char>(s[id.size()])));
        if (s == id || prefix) {
            out.push_back(s);
        }
    }
    if (out.empty()) {
        throw ConfigError("unknown figure id '" + id + "' (use all, fig1..fig7 or a recipe name)");
    }
    return out;
}

void run_figures(const std::string& recipe_dir, const std::string& id, const RunOptions& options)
{
    for (const std::string& stem : select_recipes(recipe_dir, id)) {
        const std::string path = (fs::path(recipe_dir) / (stem + ".cfg")).string();
        const auto values = read_ini(path);
        const auto cmd = values.find("run.command");
        if (cmd == values.end()) {
            throw ConfigError(path + ": missing run.command");
        }
        const ParamSet params = ParamSet::resolve(cmd->second, values, {});
        RunOptions o = options;
        o.out_dir = (fs::path(options.out_dir) / stem).string();
        run_with_manifest(params, o);
    }
}

}  // namespace dualwave::cli
