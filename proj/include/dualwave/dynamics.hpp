#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dualwave/pseudoforce.hpp"

namespace dualwave {

// Axis-aligned rectangle in plasmon lengths.
struct Domain {
    double xmin = -1.0;
    double xmax = 1.0;
    double ymin = -1.0;
    double ymax = 1.0;

    bool contains(const Vec2& p) const;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

// Test charge for the field guiding law Gamma x'' + Q Phi'(x) = 0.
struct TestParticle {
    double Gamma = 1.0;  // mass / electron mass
    double Q = 1.0;      // charge / electron charge
    double x0 = 0.0;
    double v0 = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> velocities;
    double energy_drift = 0.0;  // max |H - H0| / |H0| over every step, recorded or not
    double x_min = 0.0;         // extremes over every step
    double x_max = 0.0;
    double fast_period = 0.0;   // 2 pi / k2
};

enum class Motion { localized, propagating };

// H = Gamma v^2 / 2 + Q Phi(x) for the 1D solution.
double field_energy(const TestParticle& p, const BoundaryConstants& bc, const Orbital& orb, double x, double v);

// Velocity Verlet on the analytic 1D field. Samples are stored every `stride`
// steps (the final step is always stored).
// Throws DomainError for Gamma <= 0, h <= 0, t_end <= 0 and StepSizeError when
// h > 0.1 / k2.
Trajectory integrate_field_trajectory(const TestParticle& particle, const BoundaryConstants& bc,
                                      const Orbital& orb, double t_end, double h, std::size_t stride = 1);

// localized iff x_max - x_min < window. Needs at least 10 fast periods of data
// (InsufficientDataError otherwise).
Motion classify_trajectory(const Trajectory& traj, double window);

const char* to_string(Motion m);

// Probability current Im(conj(Psi) grad Psi) and the Bohmian velocity
// Im(grad Psi / Psi). The latter throws NodeStagnation when |Psi|^2 < 1e-12.
Vec3 probability_current(complex psi, const ComplexVec3& grad);
Vec3 guiding_velocity(complex psi, const ComplexVec3& grad);

// In-plane Bohmian velocity J/n of the dipole wavefunction at (x, y, z).
Vec2 bohmian_velocity(const Vec2& p, const DipoleConfig& cfg, double z = 0.0);

enum class Termination { domain_exit, node_stagnation, step_limit, pole_proximity };

const char* to_string(Termination t);

struct Streamline {
    std::vector<Vec2> points;
    Termination terminated_by = Termination::step_limit;
};

// A pure 2D vector field. Samplers may throw SingularityError (treated as pole
// proximity) or NodeStagnation.
using VectorSampler = std::function<Vec2(const Vec2&)>;

struct StreamlineOptions {
    double max_step = 0.05;          // arc length; dipole callers use 0.25 / k2
    double min_step = 1e-6;
    double tolerance = 1e-7;         // local error per step (step doubling)
    std::size_t max_steps = 20000;
    double stagnation = 1e-12;       // |F| below this stops the line
    std::vector<Vec2> poles;
    double pole_radius = 0.05;
};

// Adaptive RK4 along the unit direction field F/|F|. Deterministic; seeds outside
// the domain produce a single-point line terminated by domain_exit.
std::vector<Streamline> trace_streamlines(const VectorSampler& field, const std::vector<Vec2>& seeds,
                                          const Domain& domain, const StreamlineOptions& options);

// Paths of the Bohmian velocity field of the dipole. They depend on the
// wavefunction only, so there is no particle mass or charge to pass.
std::vector<Streamline> trace_bohmian_paths(const DipoleConfig& cfg, const std::vector<Vec2>& seeds,
                                            const Domain& domain, StreamlineOptions options);

// Option defaults matched to a dipole: max step 0.25/k2, poles at (+-a, 0).
StreamlineOptions dipole_streamline_options(const DipoleConfig& cfg);

}  // namespace dualwave
