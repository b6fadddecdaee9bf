#include "dualwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualwave/constants.hpp"
#include "dualwave/errors.hpp"

namespace dualwave {

bool Domain::contains(const Vec2& p) const
{
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
}

double field_energy(const TestParticle& p, const BoundaryConstants& bc, const Orbital& orb, double x, double v)
{
    return 0.5 * p.Gamma * v * v + p.Q * eval_1d(x, bc, orb).Phi;
}

Trajectory integrate_field_trajectory(const TestParticle& particle, const BoundaryConstants& bc,
                                      const Orbital& orb, double t_end, double h, std::size_t stride)
{
    if (!std::isfinite(particle.Gamma) || particle.Gamma <= 0.0) {
        throw DomainError("trajectory: mass ratio Gamma must be positive");
    }
    if (!std::isfinite(h) || h <= 0.0) {
        throw DomainError("trajectory: step h must be positive");
    }
    if (!std::isfinite(t_end) || t_end <= 0.0) {
        throw DomainError("trajectory: t_end must be positive");
    }
    const double h_max = 0.1 / orb.k2;
    if (h > h_max) {
        throw StepSizeError("trajectory: step h = " + std::to_string(h) + " does not resolve the k2 = " +
                            std::to_string(orb.k2) + " oscillation; use h <= " + std::to_string(h_max));
    }
    if (stride == 0) {
        stride = 1;
    }

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    const double accel_scale = -particle.Q / particle.Gamma;
    auto accel = [&](double x) { return accel_scale * eval_1d_gradient(x, bc, orb).Phi; };

    Trajectory traj;
    traj.fast_period = 2.0 * cgs::pi / orb.k2;
    const std::size_t stored = steps / stride + 2;
    traj.times.reserve(stored);
    traj.positions.reserve(stored);
    traj.velocities.reserve(stored);

    double x = particle.x0;
    double v = particle.v0;
    double a = accel(x);
    const double H0 = field_energy(particle, bc, orb, x, v);
    const double scale = std::abs(H0) > 1e-300 ? std::abs(H0) : 1.0;
    double drift = 0.0;
    traj.x_min = traj.x_max = x;
    traj.times.push_back(0.0);
    traj.positions.push_back(x);
    traj.velocities.push_back(v);

    for (std::size_t i = 1; i <= steps; ++i) {
        v += 0.5 * h * a;
        x += h * v;
        a = accel(x);
        v += 0.5 * h * a;

        drift = std::max(drift, std::abs(field_energy(particle, bc, orb, x, v) - H0));
        traj.x_min = std::min(traj.x_min, x);
        traj.x_max = std::max(traj.x_max, x);
        if (i % stride == 0 || i == steps) {
            // i*h rather than accumulated sums keeps the time axis exact.
            traj.times.push_back(static_cast<double>(i) * h);
            traj.positions.push_back(x);
            traj.velocities.push_back(v);
        }
    }
    traj.energy_drift = drift / scale;
    return traj;
}

Motion classify_trajectory(const Trajectory& traj, double window)
{
    if (!(window > 0.0)) {
        throw DomainError("classify_trajectory: window must be positive");
    }
    if (traj.times.size() < 2 || traj.fast_period <= 0.0) {
        throw InsufficientDataError("classify_trajectory: trajectory has fewer than two samples");
    }
    const double duration = traj.times.back() - traj.times.front();
    if (duration < 10.0 * traj.fast_period) {
        throw InsufficientDataError("classify_trajectory: trajectory spans " + std::to_string(duration) +
                                    " time units, need at least 10 fast periods (" +
                                    std::to_string(10.0 * traj.fast_period) + ")");
    }
    double lo = traj.x_min;
    double hi = traj.x_max;
    for (double x : traj.positions) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi - lo < window ? Motion::localized : Motion::propagating;
}

const char* to_string(Motion m) { return m == Motion::localized ? "localized" : "propagating"; }

Vec3 probability_current(complex psi, const ComplexVec3& grad)
{
    const complex c = std::conj(psi);
    return {std::imag(c * grad[0]), std::imag(c * grad[1]), std::imag(c * grad[2])};
}

Vec3 guiding_velocity(complex psi, const ComplexVec3& grad)
{
    if (std::norm(psi) < 1e-12) {
        throw NodeStagnation("Bohmian velocity undefined at a node of Psi (|Psi|^2 < 1e-12)");
    }
    return {std::imag(grad[0] / psi), std::imag(grad[1] / psi), std::imag(grad[2] / psi)};
}

Vec2 bohmian_velocity(const Vec2& p, const DipoleConfig& cfg, double z)
{
    const Vec3 q{p.x, p.y, z};
    const complex psi = eval_dipole(q, cfg).Psi;
    const Vec3 v = guiding_velocity(psi, eval_dipole_gradient(q, cfg).Psi);
    return {v.x, v.y};
}

const char* to_string(Termination t)
{
    switch (t) {
    case Termination::domain_exit: return "domain-exit";
    case Termination::node_stagnation: return "node-stagnation";
    case Termination::step_limit: return "step-limit";
    case Termination::pole_proximity: return "pole-proximity";
    }
    return "unknown";
}

namespace {

struct Stop {
    Termination reason;
};

class DirectionField {
public:
    DirectionField(const VectorSampler& f, const StreamlineOptions& opt) : f_(f), opt_(opt) {}

    // Unit direction at p, or throws Stop.
    Vec2 operator()(const Vec2& p) const
    {
        for (const Vec2& pole : opt_.poles) {
            if (std::hypot(p.x - pole.x, p.y - pole.y) < opt_.pole_radius) {
                throw Stop{Termination::pole_proximity};
            }
        }
        Vec2 v;
        try {
            v = f_(p);
        } catch (const SingularityError&) {
            throw Stop{Termination::pole_proximity};
        } catch (const NodeStagnation&) {
            throw Stop{Termination::node_stagnation};
        }
        const double m = std::hypot(v.x, v.y);
        if (!(m >= opt_.stagnation)) {
            throw Stop{Termination::node_stagnation};
        }
        return {v.x / m, v.y / m};
    }

private:
    const VectorSampler& f_;
    const StreamlineOptions& opt_;
};

Vec2 rk4_step(const DirectionField& d, const Vec2& p, double s, const Vec2& k1)
{
    const Vec2 k2 = d({p.x + 0.5 * s * k1.x, p.y + 0.5 * s * k1.y});
    const Vec2 k3 = d({p.x + 0.5 * s * k2.x, p.y + 0.5 * s * k2.y});
    const Vec2 k4 = d({p.x + s * k3.x, p.y + s * k3.y});
    return {p.x + s / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            p.y + s / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
}

// Point where the segment a -> b leaves the domain.
Vec2 clip_to_boundary(const Vec2& a, const Vec2& b, const Domain& dom)
{
    double t = 1.0;
    auto limit = [&t](double from, double to, double bound) {
        if (to != from) {
            const double u = (bound - from) / (to - from);
            if (u >= 0.0 && u < t) {
                t = u;
            }
        }
    };
    if (b.x < dom.xmin) limit(a.x, b.x, dom.xmin);
    if (b.x > dom.xmax) limit(a.x, b.x, dom.xmax);
    if (b.y < dom.ymin) limit(a.y, b.y, dom.ymin);
    if (b.y > dom.ymax) limit(a.y, b.y, dom.ymax);
    Vec2 c{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    c.x = std::clamp(c.x, dom.xmin, dom.xmax);
    c.y = std::clamp(c.y, dom.ymin, dom.ymax);
    return c;
}

Streamline trace_one(const DirectionField& dir, const Vec2& seed, const Domain& dom, const StreamlineOptions& opt)
{
    Streamline line;
    line.points.push_back(seed);
    if (!dom.contains(seed)) {
        line.terminated_by = Termination::domain_exit;
        return line;
    }
    Vec2 p = seed;
    double s = opt.max_step;
    try {
        for (std::size_t step = 0; step < opt.max_steps; ++step) {
            const Vec2 k1 = dir(p);
            Vec2 next;
            for (;;) {
                const Vec2 full = rk4_step(dir, p, s, k1);
                const Vec2 half = rk4_step(dir, p, 0.5 * s, k1);
                const Vec2 twice = rk4_step(dir, half, 0.5 * s, dir(half));
                const double err = std::hypot(twice.x - full.x, twice.y - full.y) / 15.0;
                if (err <= opt.tolerance || s <= opt.min_step) {
                    // Richardson-corrected two-half-step result.
                    next = {twice.x + (twice.x - full.x) / 15.0, twice.y + (twice.y - full.y) / 15.0};
                    const double grow = err > 0.0 ? 0.9 * std::pow(opt.tolerance / err, 0.2) : 2.0;
                    s = std::min(opt.max_step, s * std::clamp(grow, 1.0, 2.0));
                    break;
                }
                s = std::max(opt.min_step, s * std::clamp(0.9 * std::pow(opt.tolerance / err, 0.2), 0.2, 0.9));
            }
            // Correction term can stretch the step slightly; keep the stated bound.
            const double len = std::hypot(next.x - p.x, next.y - p.y);
            if (len > opt.max_step) {
                next = {p.x + (next.x - p.x) * opt.max_step / len, p.y + (next.y - p.y) * opt.max_step / len};
            }
            if (!dom.contains(next)) {
                line.points.push_back(clip_to_boundary(p, next, dom));
                line.terminated_by = Termination::domain_exit;
                return line;
            }
            line.points.push_back(next);
            p = next;
        }
        line.terminated_by = Termination::step_limit;
    } catch (const Stop& stop) {
        line.terminated_by = stop.reason;
    }
    return line;
}

}  // namespace

std::vector<Streamline> trace_streamlines(const VectorSampler& field, const std::vector<Vec2>& seeds,
                                          const Domain& domain, const StreamlineOptions& options)
{
    if (!(options.max_step > 0.0) || !(options.min_step > 0.0) || options.min_step > options.max_step ||
        !(options.tolerance > 0.0)) {
        throw DomainError("trace_streamlines: need 0 < min_step <= max_step and tolerance > 0");
    }
    std::vector<Streamline> out;
    out.reserve(seeds.size());
    const DirectionField dir(field, options);
    for (const Vec2& seed : seeds) {
        out.push_back(trace_one(dir, seed, domain, options));
    }
    return out;
}

StreamlineOptions dipole_streamline_options(const DipoleConfig& cfg)
{
    StreamlineOptions opt;
    opt.max_step = 0.25 / cfg.orbital.k2;
    opt.poles = {{cfg.a, 0.0}, {-cfg.a, 0.0}};
    return opt;
}

std::vector<Streamline> trace_bohmian_paths(const DipoleConfig& cfg, const std::vector<Vec2>& seeds,
                                            const Domain& domain, StreamlineOptions options)
{
    const VectorSampler v = [&cfg](const Vec2& p) { return bohmian_velocity(p, cfg); };
    return trace_streamlines(v, seeds, domain, options);
}

}  // namespace dualwave
