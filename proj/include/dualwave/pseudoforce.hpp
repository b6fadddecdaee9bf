#pragma once

#include <array>
#include <complex>

namespace dualwave {

using complex = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

using ComplexVec3 = std::array<complex, 3>;

// Quasiparticle orbital at normalized energy E > 1 and its two de Broglie
// wavenumbers. k1 (collective) and k2 (single-electron) satisfy k1 * k2 = 1.
struct Orbital {
    double E = 0.0;
    double alpha = 0.0;  // sqrt(E^2 - 1)
    double k1 = 0.0;     // sqrt(E - alpha)
    double k2 = 0.0;     // sqrt(E + alpha)

    double beat_wavelength() const;  // 2 pi / (k2 - k1)
};

// Values at the origin; the slopes there are zero by construction.
struct BoundaryConstants {
    double Phi0 = 1.0;
    double Psi0 = 1.0;
};

// Sign of the radial exponent e^{+-ikr}. Outgoing (+) is the default.
enum class Branch { outgoing, incoming };

// Two point poles of charge Q at (+-a, 0, 0) with Phi0 = Psi0 = 1.
struct DipoleConfig {
    Orbital orbital;
    double a = 0.0;
    double Q = 1.0;
    Branch branch = Branch::outgoing;
};

// Amplitudes multiplying cos(k1 x)/cos(k2 x) in 1D and e^{ik1 r}/r, e^{ik2 r}/r in 3D.
// The 1/(2 alpha) factor is included.
struct ModeAmplitudes {
    double phi_slow = 0.0;
    double phi_fast = 0.0;
    double psi_slow = 0.0;
    double psi_fast = 0.0;
};

struct RealFieldPair {
    double Phi = 0.0;
    double Psi = 0.0;
};

struct ComplexFieldPair {
    complex Phi;
    complex Psi;
};

struct ComplexGradientPair {
    ComplexVec3 Phi{};
    ComplexVec3 Psi{};
};

// E(k) = k^2/2 + 1/(2k^2). Throws DomainError for k <= 0.
double eval_dispersion(double k);

// Throws DomainError for E <= 1 (degenerate or evanescent) and non-finite E.
Orbital make_orbital(double E);

// Validating constructor: a >= 0, Q != 0 (both finite).
DipoleConfig make_dipole(const Orbital& orb, double a, double Q = 1.0, Branch branch = Branch::outgoing);

ModeAmplitudes mode_amplitudes(const Orbital& orb, const BoundaryConstants& bc);

// exp(i eps t), eps and t in plasmon units.
complex eval_time_phase(double eps, double t);

// Closed-form 1D solution and its first and second derivatives in x.
RealFieldPair eval_1d(double x, const BoundaryConstants& bc, const Orbital& orb);
RealFieldPair eval_1d_gradient(double x, const BoundaryConstants& bc, const Orbital& orb);
RealFieldPair eval_1d_curvature(double x, const BoundaryConstants& bc, const Orbital& orb);

// Spherical solution of pole charge Q at radius r. Throws SingularityError for r == 0,
// DomainError for r < 0.
ComplexFieldPair eval_monopole(double r, const Orbital& orb, const BoundaryConstants& bc, double Q,
                               Branch branch = Branch::outgoing);
// d/dr of eval_monopole.
ComplexFieldPair eval_monopole_radial_derivative(double r, const Orbital& orb, const BoundaryConstants& bc,
                                                 double Q, Branch branch = Branch::outgoing);

// Two-pole field and its analytic gradient. Throw SingularityError at a pole.
ComplexFieldPair eval_dipole(const Vec3& p, const DipoleConfig& cfg);
ComplexGradientPair eval_dipole_gradient(const Vec3& p, const DipoleConfig& cfg);
// Second derivatives d^2/dz^2 of Phi and Psi (used for the out-of-plane flux
// of currents evaluated on a z slice).
ComplexFieldPair eval_dipole_dzz(const Vec3& p, const DipoleConfig& cfg);

// Distance from p to the nearer pole.
double distance_to_nearest_pole(const Vec3& p, const DipoleConfig& cfg);

}  // namespace dualwave
