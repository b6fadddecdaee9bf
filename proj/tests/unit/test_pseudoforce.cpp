#include "doctest.h"

#include <cmath>
#include <random>

#include "dualwave/errors.hpp"
#include "dualwave/pseudoforce.hpp"
#include "oracles.hpp"

using namespace dualwave;

TEST_CASE("dispersion")
{
    CHECK(eval_dispersion(1.0) == 1.0);
    CHECK(std::abs(eval_dispersion(100.0) / 5000.0 - 1.0) < 1e-4);
    CHECK_THROWS_AS(eval_dispersion(0.0), DomainError);
    CHECK_THROWS_AS(eval_dispersion(-2.0), DomainError);

    // Minimum at k = 1 with a sign change of the slope.
    for (double k = 0.05; k < 5.0; k += 0.01) {
        CHECK(eval_dispersion(k) >= 1.0);
        if (std::abs(k - 1.0) > 1e-9) {
            CHECK(eval_dispersion(k) > 1.0);
        }
        const double slope = oracle::central_difference([](double q) { return eval_dispersion(q); }, k, 1e-6);
        if (k < 0.999) {
            CHECK(slope < 0.0);
        } else if (k > 1.001) {
            CHECK(slope > 0.0);
        }
    }
}

TEST_CASE("orbital wavenumbers")
{
    const Orbital o2 = make_orbital(2.0);
    CHECK(o2.alpha == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(o2.k1 == doctest::Approx(0.5176381).epsilon(1e-7));
    CHECK(o2.k2 == doctest::Approx(1.9318517).epsilon(1e-7));
    CHECK(eval_dispersion(o2.k1) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(eval_dispersion(o2.k2) == doctest::Approx(2.0).epsilon(1e-9));

    const Orbital o20 = make_orbital(20.0);
    CHECK(o20.k1 == doctest::Approx(0.1581633).epsilon(1e-6));
    CHECK(o20.k2 == doctest::Approx(6.3225774).epsilon(1e-7));

    // Direct evaluation of sqrt(E -+ alpha) as an independent check.
    for (double E : {1.01, 1.5, 3.0, 12.0, 80.0}) {
        const Orbital o = make_orbital(E);
        const double a = std::sqrt(E * E - 1.0);
        CHECK(o.k1 == doctest::Approx(std::sqrt(E - a)).epsilon(1e-9));
        CHECK(o.k2 == doctest::Approx(std::sqrt(E + a)).epsilon(1e-12));
    }
}

TEST_CASE("complementarity over the orbital range")
{
    for (int i = 0; i <= 2000; ++i) {
        const double E = 1.0 + 1e-6 * std::pow(1e10, i / 2000.0);
        const Orbital o = make_orbital(std::min(E, 1e4));
        CHECK(std::abs(o.k1 * o.k2 - 1.0) < 1e-9);
        CHECK(std::abs((o.k2 * o.k2 - o.k1 * o.k1) / (2.0 * o.alpha) - 1.0) < 1e-9);
        CHECK(std::abs(eval_dispersion(o.k1) - o.E) < 1e-9 * o.E);
        CHECK(std::abs(eval_dispersion(o.k2) - o.E) < 1e-9 * o.E);
    }
}

TEST_CASE("orbital domain")
{
    CHECK_THROWS_AS(make_orbital(1.0), DomainError);
    CHECK_THROWS_AS(make_orbital(0.5), DomainError);
    CHECK_THROWS_AS(make_orbital(std::nan("")), DomainError);
    CHECK_THROWS_AS(make_orbital(INFINITY), DomainError);
    const Orbital o = make_orbital(1.0 + 1e-12);
    CHECK(o.k1 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(o.k2 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("time phase")
{
    CHECK(eval_time_phase(3.0, 0.0) == complex(1.0, 0.0));
    const complex m = eval_time_phase(1.0, oracle::pi);
    CHECK(std::abs(m - complex(-1.0, 0.0)) < 1e-12);
    for (double t : {0.1, 2.3, 17.0}) {
        CHECK(std::abs(std::abs(eval_time_phase(2.7, t)) - 1.0) < 1e-15);
        const complex sum = eval_time_phase(2.7, t) * eval_time_phase(2.7, 0.4);
        CHECK(std::abs(sum - eval_time_phase(2.7, t + 0.4)) < 1e-12);
    }
}

TEST_CASE("1D solution: boundary data, parity, residuals")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> Ed(1.05, 30.0);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    std::uniform_real_distribution<double> xd(-40.0, 40.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Orbital o = make_orbital(Ed(rng));
        const BoundaryConstants bc{cd(rng), cd(rng)};
        const RealFieldPair f0 = eval_1d(0.0, bc, o);
        CHECK(f0.Phi == doctest::Approx(bc.Phi0).epsilon(1e-14));
        CHECK(f0.Psi == doctest::Approx(bc.Psi0).epsilon(1e-14));
        const RealFieldPair g0 = eval_1d_gradient(0.0, bc, o);
        CHECK(g0.Phi == 0.0);
        CHECK(g0.Psi == 0.0);
        for (int i = 0; i < 100; ++i) {
            const double x = xd(rng);
            const RealFieldPair f = eval_1d(x, bc, o);
            const RealFieldPair fm = eval_1d(-x, bc, o);
            CHECK(f.Phi == doctest::Approx(fm.Phi).epsilon(1e-14));
            CHECK(f.Psi == doctest::Approx(fm.Psi).epsilon(1e-14));
            const RealFieldPair c = eval_1d_curvature(x, bc, o);
            CHECK(std::abs(c.Psi + f.Phi + 2.0 * o.E * f.Psi) < 1e-10 * std::max(1.0, o.E));
            CHECK(std::abs(c.Phi - f.Psi) < 1e-10);
        }
    }
}

TEST_CASE("1D gradient matches central differences and is odd")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xd(-20.0, 20.0);
    const Orbital o = make_orbital(2.0);
    const BoundaryConstants bc{1.0, 1.0};
    for (int i = 0; i < 100; ++i) {
        const double x = xd(rng);
        const RealFieldPair g = eval_1d_gradient(x, bc, o);
        const double fd_phi = oracle::central_difference([&](double q) { return eval_1d(q, bc, o).Phi; }, x, 1e-5);
        const double fd_psi = oracle::central_difference([&](double q) { return eval_1d(q, bc, o).Psi; }, x, 1e-5);
        CHECK(std::abs(g.Phi - fd_phi) < 1e-8);
        CHECK(std::abs(g.Psi - fd_psi) < 1e-8);
        const RealFieldPair gm = eval_1d_gradient(-x, bc, o);
        CHECK(gm.Phi == doctest::Approx(-g.Phi).epsilon(1e-13));
        CHECK(gm.Psi == doctest::Approx(-g.Psi).epsilon(1e-13));
    }
}

TEST_CASE("1D solution agrees with numerical integration")
{
    const Orbital o = make_orbital(2.0);
    const BoundaryConstants bc{1.0, 1.0};
    double worst = 0.0;
    for (const auto& s : oracle::integrate_pseudoforce(2.0, 1.0, 1.0, 50.0, 1e-3, 0.05)) {
        const RealFieldPair f = eval_1d(s.x, bc, o);
        worst = std::max({worst, std::abs(f.Phi - s.Phi), std::abs(f.Psi - s.Psi)});
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("monopole")
{
    const Orbital o = make_orbital(20.0);
    const BoundaryConstants bc{};
    CHECK_THROWS_AS(eval_monopole(0.0, o, bc, 1.0), SingularityError);
    CHECK_THROWS_AS(eval_monopole(-1.0, o, bc, 1.0), DomainError);

    // 1/r envelope: r |field| stays within the two-mode amplitude bounds.
    const double a = 1.0 / (2.0 * o.alpha);
    const double hi_phi = (std::abs(1.0 + o.k2 * o.k2) + std::abs(1.0 + o.k1 * o.k1)) * a;
    const double lo_phi = (std::abs(1.0 + o.k2 * o.k2) - std::abs(1.0 + o.k1 * o.k1)) * a;
    for (double r : {0.3, 1.7, 12.0, 300.0}) {
        for (double rr : {r, 2.0 * r}) {
            const double m = rr * std::abs(eval_monopole(rr, o, bc, 1.0).Phi);
            CHECK(m <= hi_phi * (1 + 1e-12));
            CHECK(m >= lo_phi * (1 - 1e-12));
        }
    }

    // Branch flip conjugates; radial derivative matches central differences.
    for (double r : {0.5, 3.3, 9.0}) {
        const ComplexFieldPair out = eval_monopole(r, o, bc, 1.0, Branch::outgoing);
        const ComplexFieldPair in = eval_monopole(r, o, bc, 1.0, Branch::incoming);
        CHECK(std::abs(out.Phi - std::conj(in.Phi)) < 1e-14);
        CHECK(std::abs(out.Psi - std::conj(in.Psi)) < 1e-14);
        const ComplexFieldPair d = eval_monopole_radial_derivative(r, o, bc, 1.0);
        const complex fd = oracle::central_difference_c([&](double q) { return eval_monopole(q, o, bc, 1.0).Psi; }, r, 1e-6);
        CHECK(std::abs(d.Psi - fd) < 1e-6 * std::max(1.0, std::abs(d.Psi)));
    }
}

TEST_CASE("monopole matches one term of the dipole")
{
    const Orbital o = make_orbital(20.0);
    const DipoleConfig single = make_dipole(o, 0.0, 1.0);
    for (const Vec3 p : {Vec3{1.0, 2.0, 0.5}, Vec3{-4.0, 0.1, 0.0}, Vec3{0.0, 7.0, -3.0}}) {
        const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
        const ComplexFieldPair m = eval_monopole(r, o, BoundaryConstants{}, 1.0);
        const ComplexFieldPair d = eval_dipole(p, single);
        // a = 0 stacks both poles on the origin.
        CHECK(std::abs(d.Phi - 2.0 * m.Phi) < 1e-12 * std::abs(d.Phi));
        CHECK(std::abs(d.Psi - 2.0 * m.Psi) < 1e-12 * std::abs(d.Psi));
    }
    // With a > 0: the pole at +a alone equals the monopole at displacement (x - a, y, z).
    const DipoleConfig cfg = make_dipole(o, 3.0, 1.0);
    const Vec3 p{4.0, 1.5, 0.0};
    const double r1 = std::hypot(p.x - 3.0, p.y);
    const double r2 = std::hypot(p.x + 3.0, p.y);
    const ComplexFieldPair sum = eval_dipole(p, cfg);
    const ComplexFieldPair m1 = eval_monopole(r1, o, BoundaryConstants{}, 1.0);
    const ComplexFieldPair m2 = eval_monopole(r2, o, BoundaryConstants{}, 1.0);
    CHECK(std::abs(sum.Psi - m1.Psi - m2.Psi) < 1e-13);
    CHECK(std::abs(sum.Phi - m1.Phi - m2.Phi) < 1e-13);
}

TEST_CASE("dipole symmetry, linearity and far field")
{
    const Orbital o = make_orbital(20.0);
    const DipoleConfig cfg = make_dipole(o, 3.0, 1.0);
    const DipoleConfig cfg2 = make_dipole(o, 3.0, 2.0);
    CHECK_THROWS_AS(eval_dipole({3.0, 0.0, 0.0}, cfg), SingularityError);
    CHECK_THROWS_AS(make_dipole(o, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_dipole(o, 1.0, 0.0), DomainError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    for (int i = 0; i < 200; ++i) {
        const Vec3 p{u(rng), u(rng), 0.2 * u(rng)};
        const ComplexFieldPair f = eval_dipole(p, cfg);
        const ComplexFieldPair m = eval_dipole({-p.x, p.y, p.z}, cfg);
        CHECK(std::abs(f.Phi - m.Phi) < 1e-12 * std::abs(f.Phi) + 1e-15);
        CHECK(std::abs(f.Psi - m.Psi) < 1e-12 * std::abs(f.Psi) + 1e-15);
        const ComplexFieldPair f2 = eval_dipole(p, cfg2);
        CHECK(std::abs(f2.Phi - 2.0 * f.Phi) < 1e-13 * std::abs(f.Phi) + 1e-15);
        CHECK(std::abs(f2.Psi - 2.0 * f.Psi) < 1e-13 * std::abs(f.Psi) + 1e-15);
    }

    // Midplane: each pole contributes the monopole value at sqrt(a^2 + y^2).
    for (double y : {0.5, 4.0, 11.0}) {
        const ComplexFieldPair f = eval_dipole({0.0, y, 0.0}, cfg);
        const ComplexFieldPair m = eval_monopole(std::hypot(3.0, y), o, BoundaryConstants{}, 1.0);
        CHECK(std::abs(f.Psi - 2.0 * m.Psi) < 1e-13);
    }

    // Envelope: on the y axis the two path lengths coincide, so r |Psi| tends
    // to a constant. Compare the upper envelope over one slow period at two radii.
    auto envelope = [&](double r0) {
        double best = 0.0;
        const double span = 2.0 * oracle::pi / o.k1;
        for (int i = 0; i <= 4000; ++i) {
            const double r = r0 + span * i / 4000.0;
            best = std::max(best, std::hypot(3.0, r) * std::abs(eval_dipole({0.0, r, 0.0}, cfg).Psi));
        }
        return best;
    };
    CHECK(envelope(200.0) / envelope(2000.0) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dipole gradient and dzz against finite differences")
{
    const Orbital o = make_orbital(20.0);
    const DipoleConfig cfg = make_dipole(o, 3.0, 1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    int tested = 0;
    while (tested < 100) {
        const Vec3 p{u(rng), u(rng), 0.3 * u(rng)};
        if (distance_to_nearest_pole(p, cfg) < 1.0) {
            continue;
        }
        ++tested;
        const ComplexGradientPair g = eval_dipole_gradient(p, cfg);
        const double h = 1e-5;
        for (int axis = 0; axis < 3; ++axis) {
            auto at = [&](double s) {
                Vec3 q = p;
                (axis == 0 ? q.x : axis == 1 ? q.y : q.z) += s;
                return eval_dipole(q, cfg);
            };
            const complex fd_phi = (at(h).Phi - at(-h).Phi) / (2.0 * h);
            const complex fd_psi = (at(h).Psi - at(-h).Psi) / (2.0 * h);
            CHECK(std::abs(g.Phi[axis] - fd_phi) < 1e-7 * std::max(1.0, std::abs(fd_phi)));
            CHECK(std::abs(g.Psi[axis] - fd_psi) < 1e-7 * std::max(1.0, std::abs(fd_psi)));
        }
        const double hz = 1e-4;
        auto zat = [&](double s) { return eval_dipole({p.x, p.y, p.z + s}, cfg); };
        const complex fd2 = (zat(hz).Psi - 2.0 * zat(0.0).Psi + zat(-hz).Psi) / (hz * hz);
        CHECK(std::abs(eval_dipole_dzz(p, cfg).Psi - fd2) < 1e-4 * std::max(1.0, std::abs(fd2)));
    }

    // Midplane symmetry and the radial single-pole gradient.
    const ComplexGradientPair mid = eval_dipole_gradient({0.0, 2.5, 0.0}, cfg);
    CHECK(std::abs(mid.Phi[0]) < 1e-14);
    CHECK(std::abs(mid.Psi[0]) < 1e-14);
    const DipoleConfig single = make_dipole(o, 0.0, 1.0);
    const Vec3 p{1.2, -0.7, 2.0};
    const ComplexGradientPair gs = eval_dipole_gradient(p, single);
    const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    const complex radial = gs.Psi[0] * (p.x / r) + gs.Psi[1] * (p.y / r) + gs.Psi[2] * (p.z / r);
    CHECK(std::abs(gs.Psi[0] - radial * (p.x / r)) < 1e-12);
    CHECK(std::abs(gs.Psi[1] - radial * (p.y / r)) < 1e-12);
    CHECK(std::abs(gs.Psi[2] - radial * (p.z / r)) < 1e-12);
}

TEST_CASE("dipole satisfies the coupled Helmholtz system away from the poles")
{
    const Orbital o = make_orbital(20.0);
    const DipoleConfig cfg = make_dipole(o, 3.0, 1.0);
    const double h = 1e-3;
    for (const Vec3 p : {Vec3{1.0, 2.0, 0.0}, Vec3{-6.5, 3.0, 1.0}, Vec3{0.0, -9.0, 0.5}}) {
        auto f = [&](double dx, double dy, double dz) { return eval_dipole({p.x + dx, p.y + dy, p.z + dz}, cfg); };
        const ComplexFieldPair c = f(0, 0, 0);
        auto lap = [&](bool psi) {
            auto v = [&](double a, double b, double d) { return psi ? f(a, b, d).Psi : f(a, b, d).Phi; };
            const complex c0 = psi ? c.Psi : c.Phi;
            return (v(h, 0, 0) + v(-h, 0, 0) + v(0, h, 0) + v(0, -h, 0) + v(0, 0, h) + v(0, 0, -h) - 6.0 * c0) / (h * h);
        };
        const double scale = std::abs(c.Psi) * o.E + std::abs(c.Phi);
        CHECK(std::abs(lap(true) + c.Phi + 2.0 * o.E * c.Psi) < 1e-3 * scale);
        CHECK(std::abs(lap(false) - c.Psi) < 1e-3 * scale);
    }
}
