#include "dualwave/pseudoforce.hpp"

#include <cmath>
#include <string>

#include "dualwave/constants.hpp"
#include "dualwave/errors.hpp"

namespace dualwave {
namespace {

// Closer than this to a pole the field is treated as singular.
constexpr double kPoleTolerance = 1e-12;

double branch_sign(Branch b) { return b == Branch::outgoing ? 1.0 : -1.0; }

// One pole term c_slow e^{i s k1 r}/r + c_fast e^{i s k2 r}/r and its first two
// radial derivatives.
struct RadialTerm {
    complex value;
    complex d1;
    complex d2;
};

RadialTerm radial_term(double r, double c_slow, double c_fast, double k1, double k2, double sign)
{
    RadialTerm t;
    const double r2 = r * r;
    const double r3 = r2 * r;
    for (const auto& [c, k] : {std::pair{c_slow, sign * k1}, std::pair{c_fast, sign * k2}}) {
        const complex e = std::polar(c, k * r);
        const complex ikr(0.0, k * r);
        t.value += e / r;
        t.d1 += e * (ikr - 1.0) / r2;
        t.d2 += e * (-k * k * r2 - 2.0 * ikr + 2.0) / r3;
    }
    return t;
}

struct PoleGeometry {
    double dx, dy, dz, r;
};

PoleGeometry pole_geometry(const Vec3& p, double pole_x)
{
    PoleGeometry g{p.x - pole_x, p.y, p.z, 0.0};
    g.r = std::sqrt(g.dx * g.dx + g.dy * g.dy + g.dz * g.dz);
    if (!(g.r > kPoleTolerance)) {
        throw SingularityError("dipole field evaluated at the pole x = " + std::to_string(pole_x));
    }
    return g;
}

}  // namespace

double Orbital::beat_wavelength() const { return 2.0 * cgs::pi / (k2 - k1); }

double eval_dispersion(double k)
{
    if (!std::isfinite(k) || k <= 0.0) {
        throw DomainError("eval_dispersion: wavenumber must be positive, got " + std::to_string(k));
    }
    return 0.5 * k * k + 0.5 / (k * k);
}

Orbital make_orbital(double E)
{
    if (!std::isfinite(E)) {
        throw DomainError("make_orbital: energy must be finite");
    }
    if (E < 1.0) {
        throw DomainError("make_orbital: E = " + std::to_string(E) +
                          " lies below the dispersion minimum E = 1 (evanescent regime, unsupported)");
    }
    if (E == 1.0) {
        throw DomainError("make_orbital: E = 1 is the degenerate beating point (alpha = 0)");
    }
    Orbital o;
    o.E = E;
    o.alpha = std::sqrt((E - 1.0) * (E + 1.0));
    o.k2 = std::sqrt(E + o.alpha);
    // E - alpha = 1/(E + alpha); this form keeps k1 accurate when E >> 1.
    o.k1 = 1.0 / o.k2;
    return o;
}

DipoleConfig make_dipole(const Orbital& orb, double a, double Q, Branch branch)
{
    if (!std::isfinite(a) || a < 0.0) {
        throw DomainError("dipole half-spacing a must be >= 0, got " + std::to_string(a));
    }
    if (!std::isfinite(Q) || Q == 0.0) {
        throw DomainError("dipole pole charge Q must be finite and non-zero");
    }
    return DipoleConfig{orb, a, Q, branch};
}

ModeAmplitudes mode_amplitudes(const Orbital& orb, const BoundaryConstants& bc)
{
    const double k1s = orb.k1 * orb.k1;
    const double k2s = orb.k2 * orb.k2;
    const double inv = 1.0 / (2.0 * orb.alpha);
    return ModeAmplitudes{
        (bc.Psi0 + k2s * bc.Phi0) * inv,
        -(bc.Psi0 + k1s * bc.Phi0) * inv,
        -(bc.Phi0 + k1s * bc.Psi0) * inv,
        (bc.Phi0 + k2s * bc.Psi0) * inv,
    };
}

complex eval_time_phase(double eps, double t) { return std::polar(1.0, eps * t); }

RealFieldPair eval_1d(double x, const BoundaryConstants& bc, const Orbital& orb)
{
    const ModeAmplitudes m = mode_amplitudes(orb, bc);
    const double c1 = std::cos(orb.k1 * x);
    const double c2 = std::cos(orb.k2 * x);
    return {m.phi_slow * c1 + m.phi_fast * c2, m.psi_slow * c1 + m.psi_fast * c2};
}

RealFieldPair eval_1d_gradient(double x, const BoundaryConstants& bc, const Orbital& orb)
{
    const ModeAmplitudes m = mode_amplitudes(orb, bc);
    const double s1 = -orb.k1 * std::sin(orb.k1 * x);
    const double s2 = -orb.k2 * std::sin(orb.k2 * x);
    return {m.phi_slow * s1 + m.phi_fast * s2, m.psi_slow * s1 + m.psi_fast * s2};
}

RealFieldPair eval_1d_curvature(double x, const BoundaryConstants& bc, const Orbital& orb)
{
    const ModeAmplitudes m = mode_amplitudes(orb, bc);
    const double c1 = -orb.k1 * orb.k1 * std::cos(orb.k1 * x);
    const double c2 = -orb.k2 * orb.k2 * std::cos(orb.k2 * x);
    return {m.phi_slow * c1 + m.phi_fast * c2, m.psi_slow * c1 + m.psi_fast * c2};
}

ComplexFieldPair eval_monopole(double r, const Orbital& orb, const BoundaryConstants& bc, double Q,
                               Branch branch)
{
    if (r == 0.0) {
        throw SingularityError("eval_monopole: r = 0 is the pole");
    }
    if (!(r > 0.0)) {
        throw DomainError("eval_monopole: radius must be positive");
    }
    const ModeAmplitudes m = mode_amplitudes(orb, bc);
    const double s = branch_sign(branch);
    const RadialTerm phi = radial_term(r, m.phi_slow, m.phi_fast, orb.k1, orb.k2, s);
    const RadialTerm psi = radial_term(r, m.psi_slow, m.psi_fast, orb.k1, orb.k2, s);
    return {Q * phi.value, Q * psi.value};
}

ComplexFieldPair eval_monopole_radial_derivative(double r, const Orbital& orb, const BoundaryConstants& bc,
                                                 double Q, Branch branch)
{
    if (r == 0.0) {
        throw SingularityError("eval_monopole_radial_derivative: r = 0 is the pole");
    }
    if (!(r > 0.0)) {
        throw DomainError("eval_monopole_radial_derivative: radius must be positive");
    }
    const ModeAmplitudes m = mode_amplitudes(orb, bc);
    const double s = branch_sign(branch);
    const RadialTerm phi = radial_term(r, m.phi_slow, m.phi_fast, orb.k1, orb.k2, s);
    const RadialTerm psi = radial_term(r, m.psi_slow, m.psi_fast, orb.k1, orb.k2, s);
    return {Q * phi.d1, Q * psi.d1};
}

ComplexFieldPair eval_dipole(const Vec3& p, const DipoleConfig& cfg)
{
    const ModeAmplitudes m = mode_amplitudes(cfg.orbital, BoundaryConstants{});
    const double s = branch_sign(cfg.branch);
    ComplexFieldPair out;
    for (const double pole_x : {cfg.a, -cfg.a}) {
        const PoleGeometry g = pole_geometry(p, pole_x);
        out.Phi += radial_term(g.r, m.phi_slow, m.phi_fast, cfg.orbital.k1, cfg.orbital.k2, s).value;
        out.Psi += radial_term(g.r, m.psi_slow, m.psi_fast, cfg.orbital.k1, cfg.orbital.k2, s).value;
    }
    out.Phi *= cfg.Q;
    out.Psi *= cfg.Q;
    return out;
}

ComplexGradientPair eval_dipole_gradient(const Vec3& p, const DipoleConfig& cfg)
{
    const ModeAmplitudes m = mode_amplitudes(cfg.orbital, BoundaryConstants{});
    const double s = branch_sign(cfg.branch);
    ComplexGradientPair out;
    for (const double pole_x : {cfg.a, -cfg.a}) {
        const PoleGeometry g = pole_geometry(p, pole_x);
        const complex dphi = cfg.Q * radial_term(g.r, m.phi_slow, m.phi_fast, cfg.orbital.k1, cfg.orbital.k2, s).d1;
        const complex dpsi = cfg.Q * radial_term(g.r, m.psi_slow, m.psi_fast, cfg.orbital.k1, cfg.orbital.k2, s).d1;
        const double unit[3] = {g.dx / g.r, g.dy / g.r, g.dz / g.r};
        for (int i = 0; i < 3; ++i) {
            out.Phi[i] += dphi * unit[i];
            out.Psi[i] += dpsi * unit[i];
        }
    }
    return out;
}

ComplexFieldPair eval_dipole_dzz(const Vec3& p, const DipoleConfig& cfg)
{
    const ModeAmplitudes m = mode_amplitudes(cfg.orbital, BoundaryConstants{});
    const double s = branch_sign(cfg.branch);
    ComplexFieldPair out;
    for (const double pole_x : {cfg.a, -cfg.a}) {
        const PoleGeometry g = pole_geometry(p, pole_x);
        // d^2 f(r)/dz^2 = f'' (z/r)^2 + f' (1/r - z^2/r^3)
        const double cz = g.dz / g.r;
        const double w1 = (1.0 - cz * cz) / g.r;
        const RadialTerm phi = radial_term(g.r, m.phi_slow, m.phi_fast, cfg.orbital.k1, cfg.orbital.k2, s);
        const RadialTerm psi = radial_term(g.r, m.psi_slow, m.psi_fast, cfg.orbital.k1, cfg.orbital.k2, s);
        out.Phi += phi.d2 * (cz * cz) + phi.d1 * w1;
        out.Psi += psi.d2 * (cz * cz) + psi.d1 * w1;
    }
    out.Phi *= cfg.Q;
    out.Psi *= cfg.Q;
    return out;
}

double distance_to_nearest_pole(const Vec3& p, const DipoleConfig& cfg)
{
    auto dist = [&p](double px) {
        const double dx = p.x - px;
        return std::sqrt(dx * dx + p.y * p.y + p.z * p.z);
    };
    return std::min(dist(cfg.a), dist(-cfg.a));
}

}  // namespace dualwave
