#include "dualwave/fieldmaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include <fftw3.h>

#include "dualwave/constants.hpp"
#include "dualwave/errors.hpp"

namespace dualwave {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// The FFTW planner is not reentrant.
std::mutex fftw_planner_mutex;

void fill_node(FieldGrid& g, std::size_t k, double x, double y)
{
    const Vec3 p{x, y, g.spec.z};
    if (distance_to_nearest_pole(p, g.cfg) < g.spec.mask_radius) {
        const complex cnan(kNaN, kNaN);
        g.mask[k] = 1;
        g.Psi[k] = g.Phi[k] = cnan;
        g.n[k] = g.dJz[k] = g.dJdz[k] = kNaN;
        g.J[k] = g.Jd[k] = g.Jt[k] = Vec2{kNaN, kNaN};
        g.Efield[k] = {cnan, cnan};
        return;
    }
    const ComplexFieldPair f = eval_dipole(p, g.cfg);
    const ComplexGradientPair d = eval_dipole_gradient(p, g.cfg);
    const ComplexFieldPair zz = eval_dipole_dzz(p, g.cfg);
    const complex psi_c = std::conj(f.Psi);
    const complex phi_c = std::conj(f.Phi);

    g.Psi[k] = f.Psi;
    g.Phi[k] = f.Phi;
    g.n[k] = std::norm(f.Psi);
    g.J[k] = {std::imag(psi_c * d.Psi[0]), std::imag(psi_c * d.Psi[1])};
    g.Jd[k] = {-std::imag(phi_c * d.Phi[0]), -std::imag(phi_c * d.Phi[1])};
    g.Jt[k] = {g.J[k].x + g.Jd[k].x, g.J[k].y + g.Jd[k].y};
    g.dJz[k] = std::imag(psi_c * zz.Psi);
    g.dJdz[k] = -std::imag(phi_c * zz.Phi);
    g.Efield[k] = {-d.Phi[0], -d.Phi[1]};
}

void require_complex_channel(ScalarChannel c, const char* who)
{
    if (c != ScalarChannel::Psi && c != ScalarChannel::Phi) {
        throw DomainError(std::string(who) + ": complex samples exist only for Psi and Phi");
    }
}

// Fractional lattice coordinate of x, clamped so that cell (i0, i0 + 1) exists.
void locate(double x, double origin, double h, std::size_t n, std::size_t& i0, double& t)
{
    const double f = (x - origin) / h;
    const double last = static_cast<double>(n - 1);
    if (f < -1e-9 || f > last + 1e-9) {
        throw DomainError("probe point lies outside the grid domain");
    }
    const double fc = std::clamp(f, 0.0, last);
    i0 = std::min(static_cast<std::size_t>(fc), n - 2);
    t = fc - static_cast<double>(i0);
}

template <class Value, class Get>
std::vector<Value> bilinear(const FieldGrid& g, const Probe& probe, Get get)
{
    std::vector<Value> out(probe.samples);
    for (std::size_t s = 0; s < probe.samples; ++s) {
        const Vec2 p = probe.point(s);
        std::size_t i0 = 0;
        std::size_t j0 = 0;
        double tx = 0.0;
        double ty = 0.0;
        locate(p.x, g.spec.domain.xmin, g.dx, g.spec.nx, i0, tx);
        locate(p.y, g.spec.domain.ymin, g.dy, g.spec.ny, j0, ty);
        const Value v00 = get(g.index(i0, j0));
        const Value v10 = get(g.index(i0 + 1, j0));
        const Value v01 = get(g.index(i0, j0 + 1));
        const Value v11 = get(g.index(i0 + 1, j0 + 1));
        out[s] = (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
    }
    return out;
}

double norm2(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }

}  // namespace

std::size_t FieldGrid::masked_count() const
{
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

const char* to_string(ScalarChannel c)
{
    switch (c) {
    case ScalarChannel::Psi: return "Psi";
    case ScalarChannel::Phi: return "Phi";
    case ScalarChannel::n: return "n";
    case ScalarChannel::J: return "J";
    case ScalarChannel::Jd: return "Jd";
    case ScalarChannel::Jt: return "Jt";
    case ScalarChannel::Efield: return "Efield";
    }
    return "unknown";
}

FieldGrid evaluate_grid(const DipoleConfig& cfg, const GridSpec& spec, unsigned threads)
{
    const Domain& d = spec.domain;
    if (!(d.width() > 0.0) || !(d.height() > 0.0) || !std::isfinite(d.width()) || !std::isfinite(d.height())) {
        throw DomainError("evaluate_grid: domain has zero area");
    }
    if (spec.nx < 16 || spec.ny < 16) {
        throw DomainError("evaluate_grid: need nx, ny >= 16, got " + std::to_string(spec.nx) + " x " +
                          std::to_string(spec.ny));
    }
    if (!(spec.mask_radius >= 0.0) || !std::isfinite(spec.z)) {
        throw DomainError("evaluate_grid: mask radius must be >= 0 and z finite");
    }

    FieldGrid g;
    g.spec = spec;
    g.cfg = cfg;
    g.dx = d.width() / static_cast<double>(spec.nx - 1);
    g.dy = d.height() / static_cast<double>(spec.ny - 1);
    const std::size_t total = spec.nx * spec.ny;
    g.Psi.resize(total);
    g.Phi.resize(total);
    g.n.resize(total);
    g.J.resize(total);
    g.Jd.resize(total);
    g.Jt.resize(total);
    g.dJz.resize(total);
    g.dJdz.resize(total);
    g.Efield.resize(total);
    g.mask.assign(total, 0);

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, spec.ny));

    auto fill_rows = [&g](std::size_t j_begin, std::size_t j_step) {
        for (std::size_t j = j_begin; j < g.spec.ny; j += j_step) {
            const double y = g.y(j);
            for (std::size_t i = 0; i < g.spec.nx; ++i) {
                fill_node(g, g.index(i, j), g.x(i), y);
            }
        }
    };
    if (threads <= 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(fill_rows, t, threads);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return g;
}

double channel_magnitude(const FieldGrid& g, ScalarChannel c, std::size_t k)
{
    switch (c) {
    case ScalarChannel::Psi: return std::abs(g.Psi[k]);
    case ScalarChannel::Phi: return std::abs(g.Phi[k]);
    case ScalarChannel::n: return g.n[k];
    case ScalarChannel::J: return norm2(g.J[k]);
    case ScalarChannel::Jd: return norm2(g.Jd[k]);
    case ScalarChannel::Jt: return norm2(g.Jt[k]);
    case ScalarChannel::Efield: return field_magnitude(g.Efield[k]);
    }
    return kNaN;
}

std::vector<double> magnitude(const FieldGrid& g, ScalarChannel c)
{
    std::vector<double> out(g.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = channel_magnitude(g, c, k);
    }
    return out;
}

std::vector<double> planar_divergence(const std::vector<Vec2>& f, std::size_t nx, std::size_t ny, double dx,
                                      double dy)
{
    if (nx < 3 || ny < 3 || f.size() != nx * ny) {
        throw DomainError("planar_divergence: need at least 3 x 3 samples matching the field size");
    }
    auto deriv = [](double fm, double f0, double fp, std::size_t i, std::size_t n, double h, auto at) {
        if (i == 0) {
            return (-3.0 * f0 + 4.0 * at(1) - at(2)) / (2.0 * h);
        }
        if (i == n - 1) {
            return (3.0 * f0 - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
        }
        return (fp - fm) / (2.0 * h);
    };
    std::vector<double> div(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = j * nx + i;
            auto fx_at = [&](std::size_t ii) { return f[j * nx + ii].x; };
            auto fy_at = [&](std::size_t jj) { return f[jj * nx + i].y; };
            const double ddx = deriv(i > 0 ? fx_at(i - 1) : 0.0, f[k].x, i + 1 < nx ? fx_at(i + 1) : 0.0, i, nx,
                                     dx, fx_at);
            const double ddy = deriv(j > 0 ? fy_at(j - 1) : 0.0, f[k].y, j + 1 < ny ? fy_at(j + 1) : 0.0, j, ny,
                                     dy, fy_at);
            // A masked centre has no derivative even if its neighbours are fine.
            div[k] = std::isnan(f[k].x) || std::isnan(f[k].y) ? kNaN : ddx + ddy;
        }
    }
    return div;
}

std::vector<double> divergence(const FieldGrid& g, CurrentChannel c)
{
    const double points_per_wavelength = 2.0 * cgs::pi / g.cfg.orbital.k2 / std::max(g.dx, g.dy);
    if (points_per_wavelength < 8.0) {
        throw ResolutionError("divergence: grid resolves 2 pi / k2 with " + std::to_string(points_per_wavelength) +
                              " points, need >= 8");
    }
    const std::vector<Vec2>& field = c == CurrentChannel::J ? g.J : c == CurrentChannel::Jd ? g.Jd : g.Jt;
    std::vector<double> div = planar_divergence(field, g.spec.nx, g.spec.ny, g.dx, g.dy);
    for (std::size_t k = 0; k < div.size(); ++k) {
        switch (c) {
        case CurrentChannel::J: div[k] += g.dJz[k]; break;
        case CurrentChannel::Jd: div[k] += g.dJdz[k]; break;
        case CurrentChannel::Jt: div[k] += g.dJz[k] + g.dJdz[k]; break;
        }
    }
    return div;
}

ComplexVec2 electric_field(const Vec3& p, const DipoleConfig& cfg, double mask_radius)
{
    if (distance_to_nearest_pole(p, cfg) < mask_radius) {
        throw SingularityError("electric_field: point inside the pole mask");
    }
    const ComplexGradientPair d = eval_dipole_gradient(p, cfg);
    return {-d.Phi[0], -d.Phi[1]};
}

double field_magnitude(const ComplexVec2& e) { return std::sqrt(std::norm(e[0]) + std::norm(e[1])); }

double Probe::spacing() const
{
    return std::hypot(end.x - start.x, end.y - start.y) / static_cast<double>(samples - 1);
}

Vec2 Probe::point(std::size_t s) const
{
    const double t = static_cast<double>(s) / static_cast<double>(samples - 1);
    return {start.x + t * (end.x - start.x), start.y + t * (end.y - start.y)};
}

std::vector<complex> sample_complex(const FieldGrid& g, ScalarChannel c, const Probe& probe)
{
    require_complex_channel(c, "sample_complex");
    if (probe.samples < 2) {
        throw DomainError("sample_complex: probe needs at least 2 samples");
    }
    const std::vector<complex>& data = c == ScalarChannel::Psi ? g.Psi : g.Phi;
    return bilinear<complex>(g, probe, [&data](std::size_t k) { return data[k]; });
}

std::vector<double> sample_magnitude(const FieldGrid& g, ScalarChannel c, const Probe& probe)
{
    if (probe.samples < 2) {
        throw DomainError("sample_magnitude: probe needs at least 2 samples");
    }
    return bilinear<double>(g, probe, [&g, c](std::size_t k) { return channel_magnitude(g, c, k); });
}

std::vector<complex> sample_complex(const DipoleConfig& cfg, ScalarChannel c, const Probe& probe, double z)
{
    require_complex_channel(c, "sample_complex");
    if (probe.samples < 2) {
        throw DomainError("sample_complex: probe needs at least 2 samples");
    }
    std::vector<complex> out(probe.samples);
    for (std::size_t s = 0; s < probe.samples; ++s) {
        const Vec2 p = probe.point(s);
        const ComplexFieldPair f = eval_dipole({p.x, p.y, z}, cfg);
        out[s] = c == ScalarChannel::Psi ? f.Psi : f.Phi;
    }
    return out;
}

SpectrumPeak fringe_spectrum(const std::vector<complex>& samples, double spacing)
{
    const std::size_t N = samples.size();
    if (N < 256) {
        throw DomainError("fringe_spectrum: need >= 256 probe samples, got " + std::to_string(N));
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw DomainError("fringe_spectrum: sample spacing must be positive");
    }
    complex mean(0.0, 0.0);
    double energy = 0.0;
    for (const complex& v : samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalError("fringe_spectrum: probe crosses masked or non-finite samples");
        }
        mean += v;
        energy += std::norm(v);
    }
    mean /= static_cast<double>(N);
    double variance = 0.0;
    for (const complex& v : samples) {
        variance += std::norm(v - mean);
    }
    if (!(variance > 1e-24 * energy) || variance == 0.0) {
        throw NoPeakError("fringe_spectrum: signal is flat along the probe");
    }

    fftw_complex* buf = fftw_alloc_complex(N);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(N), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < N; ++i) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * cgs::pi * static_cast<double>(i) / static_cast<double>(N - 1)));
        const complex v = (samples[i] - mean) * w;
        buf[i][0] = v.real();
        buf[i][1] = v.imag();
    }
    fftw_execute(plan);

    SpectrumPeak peak;
    peak.bin_width = 2.0 * cgs::pi / (static_cast<double>(N) * spacing);
    std::size_t best = 0;
    for (std::size_t m = 1; m < N; ++m) {
        const double p = buf[m][0] * buf[m][0] + buf[m][1] * buf[m][1];
        if (p > peak.power) {
            peak.power = p;
            best = m;
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);

    const double signed_bin = best <= N / 2 ? static_cast<double>(best) : static_cast<double>(best) - static_cast<double>(N);
    peak.frequency = std::abs(signed_bin) * peak.bin_width;
    return peak;
}

SpectrumPeak fringe_spectrum(const std::vector<double>& samples, double spacing)
{
    return fringe_spectrum(std::vector<complex>(samples.begin(), samples.end()), spacing);
}

SpectrumPeak fringe_spectrum(const FieldGrid& g, ScalarChannel c, const Probe& probe)
{
    if (c == ScalarChannel::Psi || c == ScalarChannel::Phi) {
        return fringe_spectrum(sample_complex(g, c, probe), probe.spacing());
    }
    return fringe_spectrum(sample_magnitude(g, c, probe), probe.spacing());
}

double fringe_contrast(const std::vector<double>& profile)
{
    double sum = 0.0;
    double peak = 0.0;
    std::size_t count = 0;
    for (double v : profile) {
        if (std::isnan(v)) {
            continue;
        }
        sum += v;
        peak = std::max(peak, v);
        ++count;
    }
    if (count == 0 || !(sum > 0.0)) {
        throw InsufficientDataError("fringe_contrast: profile has no positive samples");
    }
    return peak / (sum / static_cast<double>(count));
}

std::vector<double> grid_row(const FieldGrid& g, ScalarChannel c, std::size_t j)
{
    if (j >= g.spec.ny) {
        throw DomainError("grid_row: row index out of range");
    }
    std::vector<double> row(g.spec.nx);
    for (std::size_t i = 0; i < g.spec.nx; ++i) {
        row[i] = channel_magnitude(g, c, g.index(i, j));
    }
    return row;
}

double pixel_visibility(const DipoleConfig& cfg, ScalarChannel c, double y, double xmin, double xmax,
                        std::size_t pixels)
{
    require_complex_channel(c, "pixel_visibility");
    if (pixels < 2 || !(xmax > xmin)) {
        throw DomainError("pixel_visibility: need >= 2 pixels on a positive-length row");
    }
    const bool psi = c == ScalarChannel::Psi;
    const double w = (xmax - xmin) / static_cast<double>(pixels);
    const auto sub = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(8.0 * cfg.orbital.k2 * w)));
    const BoundaryConstants unit_bc{};

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t px = 0; px < pixels; ++px) {
        double acc = 0.0;
        std::size_t used = 0;
        for (std::size_t s = 0; s < sub; ++s) {
            const double x = xmin + w * (static_cast<double>(px) + (static_cast<double>(s) + 0.5) / static_cast<double>(sub));
            const Vec3 p{x, y, 0.0};
            const double r1 = std::hypot(x - cfg.a, y);
            const double r2 = std::hypot(x + cfg.a, y);
            if (std::min(r1, r2) < 0.05) {
                continue;
            }
            const ComplexFieldPair f = eval_dipole(p, cfg);
            const ComplexFieldPair m1 = eval_monopole(r1, cfg.orbital, unit_bc, cfg.Q, cfg.branch);
            const ComplexFieldPair m2 = eval_monopole(r2, cfg.orbital, unit_bc, cfg.Q, cfg.branch);
            const double env = psi ? std::sqrt(std::norm(m1.Psi) + std::norm(m2.Psi))
                                   : std::sqrt(std::norm(m1.Phi) + std::norm(m2.Phi));
            acc += std::abs(psi ? f.Psi : f.Phi) / env;
            ++used;
        }
        if (used == 0) {
            continue;
        }
        const double v = acc / static_cast<double>(used);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi / lo;
}

ConservationReport conservation_check(const DipoleConfig& cfg, const GridSpec& spec, double exclusion_radius,
                                      unsigned threads)
{
    GridSpec fine_spec = spec;
    fine_spec.nx = 2 * spec.nx - 1;
    fine_spec.ny = 2 * spec.ny - 1;

    ConservationReport rep;
    rep.exclusion_radius = exclusion_radius;

    std::vector<double> dJ;
    std::vector<double> dJt;
    std::vector<double> source;
    std::vector<std::uint8_t> use;
    std::size_t nx = spec.nx;
    {
        const FieldGrid coarse = evaluate_grid(cfg, spec, threads);
        dJ = divergence(coarse, CurrentChannel::J);
        dJt = divergence(coarse, CurrentChannel::Jt);
        source.resize(coarse.size());
        use.assign(coarse.size(), 0);
        for (std::size_t j = 0; j < spec.ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t k = coarse.index(i, j);
                source[k] = std::imag(std::conj(coarse.Psi[k]) * coarse.Phi[k]);
                const double dist = distance_to_nearest_pole({coarse.x(i), coarse.y(j), spec.z}, cfg);
                use[k] = dist >= exclusion_radius && std::isfinite(dJt[k]) && std::isfinite(dJ[k]);
            }
        }
    }
    const FieldGrid fine = evaluate_grid(cfg, fine_spec, threads);
    const std::vector<double> dJt_fine = divergence(fine, CurrentChannel::Jt);

    for (std::size_t j = 0; j < spec.ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = j * nx + i;
            const double f = dJt_fine[fine.index(2 * i, 2 * j)];
            if (!use[k] || !std::isfinite(f)) {
                continue;
            }
            ++rep.nodes_used;
            rep.max_div_Jt = std::max(rep.max_div_Jt, std::abs(dJt[k]));
            rep.max_div_J = std::max(rep.max_div_J, std::abs(dJ[k]));
            rep.max_div_Jt_fine = std::max(rep.max_div_Jt_fine, std::abs(f));
            rep.discretization_estimate = std::max(rep.discretization_estimate, 4.0 / 3.0 * std::abs(dJt[k] - f));
            rep.max_source = std::max(rep.max_source, std::abs(source[k]));
            rep.max_identity_error = std::max(rep.max_identity_error, std::abs(dJ[k] + source[k]));
        }
    }
    return rep;
}

}  // namespace dualwave
