#include "doctest.h"

#include <cmath>
#include <cstring>

#include "dualwave/errors.hpp"
#include "dualwave/fieldmaps.hpp"
#include "oracles.hpp"

using namespace dualwave;

namespace {

DipoleConfig fig3_config(double Q = 1.0) { return make_dipole(make_orbital(20.0), 3.0, Q); }

GridSpec small_grid(double half = 10.0, std::size_t n = 129)
{
    GridSpec s;
    s.domain = {-half, half, -half, half};
    s.nx = n;
    s.ny = n;
    return s;
}

bool same_bits(const void* a, const void* b, std::size_t bytes) { return std::memcmp(a, b, bytes) == 0; }

}  // namespace

TEST_CASE("grid channels are consistent with the point evaluators")
{
    const DipoleConfig cfg = fig3_config();
    const FieldGrid g = evaluate_grid(cfg, small_grid(), 1);
    REQUIRE(g.size() == 129u * 129u);
    CHECK(g.dx == doctest::Approx(20.0 / 128.0));
    std::size_t masked = 0;
    for (std::size_t j = 0; j < g.spec.ny; j += 7) {
        for (std::size_t i = 0; i < g.spec.nx; i += 5) {
            const std::size_t k = g.index(i, j);
            const Vec3 p{g.x(i), g.y(j), 0.0};
            if (g.mask[k]) {
                ++masked;
                CHECK(std::isnan(g.n[k]));
                CHECK(distance_to_nearest_pole(p, cfg) < g.spec.mask_radius);
                continue;
            }
            const ComplexFieldPair f = eval_dipole(p, cfg);
            CHECK(g.Psi[k] == f.Psi);
            CHECK(g.Phi[k] == f.Phi);
            CHECK(g.n[k] == doctest::Approx(std::norm(f.Psi)).epsilon(1e-14));
            // Jt is the plain sum of the two currents.
            CHECK(g.Jt[k].x == g.J[k].x + g.Jd[k].x);
            CHECK(g.Jt[k].y == g.J[k].y + g.Jd[k].y);
            const ComplexGradientPair grad = eval_dipole_gradient(p, cfg);
            CHECK(g.J[k].x == doctest::Approx(std::imag(std::conj(f.Psi) * grad.Psi[0])).epsilon(1e-12));
            CHECK(g.Jd[k].y == doctest::Approx(-std::imag(std::conj(f.Phi) * grad.Phi[1])).epsilon(1e-12));
            CHECK(std::abs(g.Efield[k][0] + grad.Phi[0]) <= 1e-14 * std::abs(grad.Phi[0]));
        }
    }
    CHECK(masked <= g.masked_count());
}

TEST_CASE("mirror antisymmetry of the x currents and Q scaling")
{
    const FieldGrid g = evaluate_grid(fig3_config(), small_grid(), 1);
    const FieldGrid g2 = evaluate_grid(fig3_config(2.0), small_grid(), 1);
    const std::size_t nx = g.spec.nx;
    for (std::size_t j = 0; j < g.spec.ny; j += 3) {
        for (std::size_t i = 0; i < nx; i += 3) {
            const std::size_t k = g.index(i, j);
            const std::size_t m = g.index(nx - 1 - i, j);
            if (g.mask[k]) {
                continue;
            }
            const double scale = std::abs(g.J[k].x) + std::abs(g.J[k].y) + 1e-12;
            CHECK(std::abs(g.J[k].x + g.J[m].x) < 1e-9 * scale);
            CHECK(std::abs(g.J[k].y - g.J[m].y) < 1e-9 * scale);
            CHECK(std::abs(g.n[k] - g.n[m]) < 1e-9 * g.n[k]);
            CHECK(g2.Psi[k] == 2.0 * g.Psi[k]);
            CHECK(g2.n[k] == doctest::Approx(4.0 * g.n[k]).epsilon(1e-14));
            CHECK(g2.J[k].x == doctest::Approx(4.0 * g.J[k].x).epsilon(1e-13));
        }
    }
}

TEST_CASE("result does not depend on the thread count")
{
    const DipoleConfig cfg = fig3_config();
    const FieldGrid a = evaluate_grid(cfg, small_grid(), 1);
    const FieldGrid b = evaluate_grid(cfg, small_grid(), 3);
    CHECK(same_bits(a.Psi.data(), b.Psi.data(), a.Psi.size() * sizeof(complex)));
    CHECK(same_bits(a.Jt.data(), b.Jt.data(), a.Jt.size() * sizeof(Vec2)));
    CHECK(same_bits(a.dJz.data(), b.dJz.data(), a.dJz.size() * sizeof(double)));
    CHECK(same_bits(a.Efield.data(), b.Efield.data(), a.Efield.size() * sizeof(ComplexVec2)));
}

TEST_CASE("grid errors")
{
    const DipoleConfig cfg = fig3_config();
    GridSpec flat = small_grid();
    flat.domain.xmax = flat.domain.xmin;
    CHECK_THROWS_AS(evaluate_grid(cfg, flat, 1), DomainError);
    GridSpec tiny = small_grid(10.0, 8);
    CHECK_THROWS_AS(evaluate_grid(cfg, tiny, 1), DomainError);

    // 2 pi / k2 is about one plasmon length; 64 nodes over 40 lengths is too coarse.
    const FieldGrid coarse = evaluate_grid(cfg, small_grid(20.0, 64), 1);
    CHECK_THROWS_AS(divergence(coarse, CurrentChannel::J), ResolutionError);
    CHECK_THROWS_AS(electric_field({3.0, 0.01, 0.0}, cfg), SingularityError);
}

TEST_CASE("planar divergence stencils")
{
    const std::size_t nx = 21;
    const std::size_t ny = 17;
    const double dx = 0.1;
    const double dy = 0.2;
    std::vector<Vec2> constant(nx * ny, Vec2{3.0, -1.0});
    for (double d : planar_divergence(constant, nx, ny, dx, dy)) {
        CHECK(d == 0.0);
    }
    // Quadratic field: the second-order stencils are exact, boundaries included.
    std::vector<Vec2> quad(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = i * dx;
            const double y = j * dy;
            quad[j * nx + i] = {x * x, 3.0 * y - y * y};
        }
    }
    const auto div = planar_divergence(quad, nx, ny, dx, dy);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            CHECK(div[j * nx + i] == doctest::Approx(2.0 * i * dx + 3.0 - 2.0 * j * dy).epsilon(1e-9));
        }
    }
    quad[5 * nx + 5].x = std::nan("");
    const auto holed = planar_divergence(quad, nx, ny, dx, dy);
    CHECK(std::isnan(holed[5 * nx + 6]));
    CHECK(std::isfinite(holed[5 * nx + 8]));
}

TEST_CASE("electric field matches the gradient of Phi")
{
    const DipoleConfig cfg = fig3_config();
    for (const Vec3 p : {Vec3{1.0, 2.0, 0.0}, Vec3{-5.0, -0.7, 0.0}, Vec3{8.0, 8.0, 0.0}}) {
        const ComplexVec2 e = electric_field(p, cfg);
        const double h = 1e-5;
        const complex fx = (eval_dipole({p.x + h, p.y, 0.0}, cfg).Phi - eval_dipole({p.x - h, p.y, 0.0}, cfg).Phi) / (2 * h);
        const complex fy = (eval_dipole({p.x, p.y + h, 0.0}, cfg).Phi - eval_dipole({p.x, p.y - h, 0.0}, cfg).Phi) / (2 * h);
        CHECK(std::abs(e[0] + fx) < 1e-7 * std::max(1.0, std::abs(fx)));
        CHECK(std::abs(e[1] + fy) < 1e-7 * std::max(1.0, std::abs(fy)));
        CHECK(field_magnitude(e) == doctest::Approx(std::sqrt(std::norm(fx) + std::norm(fy))).epsilon(1e-6));
    }
    // Phi is even in x, so Ex vanishes on the midplane.
    for (double y : {0.5, 3.0, 12.0}) {
        CHECK(std::abs(electric_field({0.0, y, 0.0}, cfg)[0]) < 1e-14);
    }
}

TEST_CASE("spectrum of synthetic signals")
{
    const std::size_t N = 1024;
    const double dx = 0.05;
    const double bin = 2.0 * oracle::pi / (N * dx);
    std::vector<complex> wave(N);
    std::vector<double> cosine(N);
    for (std::size_t i = 0; i < N; ++i) {
        wave[i] = std::polar(1.0, 3.0 * i * dx);
        cosine[i] = 2.0 + std::cos(7.5 * i * dx);
    }
    const SpectrumPeak a = fringe_spectrum(wave, dx);
    CHECK(a.bin_width == doctest::Approx(bin));
    CHECK(std::abs(a.frequency - 3.0) <= bin);
    const SpectrumPeak b = fringe_spectrum(cosine, dx);
    CHECK(std::abs(b.frequency - 7.5) <= bin);

    CHECK_THROWS_AS(fringe_spectrum(std::vector<double>(N, 4.0), dx), NoPeakError);
    CHECK_THROWS_AS(fringe_spectrum(std::vector<double>(100, 1.0), dx), DomainError);
    CHECK_THROWS_AS(fringe_spectrum(cosine, 0.0), DomainError);
}

TEST_CASE("probe samples of the grid")
{
    const DipoleConfig cfg = fig3_config();
    const FieldGrid g = evaluate_grid(cfg, small_grid(), 1);
    // Probe through a row of nodes: bilinear samples reduce to the node values.
    const std::size_t j = 100;
    const Probe row{{g.x(0), g.y(j)}, {g.x(g.spec.nx - 1), g.y(j)}, g.spec.nx};
    const auto s = sample_complex(g, ScalarChannel::Psi, row);
    const auto exact = sample_complex(cfg, ScalarChannel::Psi, row);
    for (std::size_t i = 0; i < g.spec.nx; ++i) {
        CHECK(std::abs(s[i] - g.Psi[g.index(i, j)]) < 1e-10 * std::abs(g.Psi[g.index(i, j)]));
        CHECK(std::abs(exact[i] - g.Psi[g.index(i, j)]) < 1e-10 * std::abs(g.Psi[g.index(i, j)]));
    }
    const auto mags = grid_row(g, ScalarChannel::Psi, j);
    const auto sm = sample_magnitude(g, ScalarChannel::Psi, row);
    for (std::size_t i = 0; i < g.spec.nx; ++i) {
        CHECK(sm[i] == doctest::Approx(mags[i]).epsilon(1e-10));
    }
    CHECK(row.spacing() == doctest::Approx(g.dx));
    CHECK_THROWS_AS(sample_complex(g, ScalarChannel::Psi, Probe{{0.0, 0.0}, {30.0, 0.0}, 300}), DomainError);
    CHECK_THROWS_AS(sample_complex(g, ScalarChannel::n, row), DomainError);
}

TEST_CASE("dominant probe frequencies recover both wavenumbers")
{
    for (double E : {12.0, 20.0, 50.0, 80.0}) {
        const DipoleConfig cfg = make_dipole(make_orbital(E), 3.0, 1.0);
        const Orbital& o = cfg.orbital;
        // Long enough that one bin is a quarter of k1, fine enough to resolve k2.
        const double L = 8.0 * oracle::pi / o.k1;
        const auto N = static_cast<std::size_t>(std::max(1024.0, std::ceil(4.0 * L * o.k2 / oracle::pi)));
        const Probe probe{{4.0, 0.0}, {4.0 + L, 0.0}, N};
        const SpectrumPeak psi = fringe_spectrum(sample_complex(cfg, ScalarChannel::Psi, probe), probe.spacing());
        const SpectrumPeak phi = fringe_spectrum(sample_complex(cfg, ScalarChannel::Phi, probe), probe.spacing());
        CAPTURE(E);
        CHECK(std::abs(psi.frequency - o.k2) <= psi.bin_width);
        CHECK(std::abs(phi.frequency - o.k1) <= phi.bin_width);
        const double tol = phi.frequency * psi.bin_width + psi.frequency * phi.bin_width;
        CHECK(std::abs(psi.frequency * phi.frequency - 1.0) <= tol);
    }
}

TEST_CASE("contrast measures")
{
    CHECK(fringe_contrast({1.0, 1.0, 1.0, 5.0}) == doctest::Approx(2.5));
    CHECK(fringe_contrast({2.0, std::nan(""), 2.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(fringe_contrast({0.0, 0.0}), InsufficientDataError);

    // Coincident poles add coherently everywhere: the normalized profile is flat.
    const DipoleConfig stacked = make_dipole(make_orbital(20.0), 0.0, 1.0);
    CHECK(pixel_visibility(stacked, ScalarChannel::Psi, 2.0, -5.0, 5.0, 64) == doctest::Approx(1.0).epsilon(1e-12));
    // Separated poles interfere: the k2 fringes are visible at fine pixels.
    const DipoleConfig cfg = fig3_config();
    CHECK(pixel_visibility(cfg, ScalarChannel::Psi, 6.0, -10.0, 10.0, 400) > 2.0);
    CHECK_THROWS_AS(pixel_visibility(cfg, ScalarChannel::n, 6.0, -10.0, 10.0, 400), DomainError);
}

TEST_CASE("conservation structure on a refined grid")
{
    const DipoleConfig cfg = fig3_config();
    const double exclusion = 2.0 * oracle::pi / cfg.orbital.k2;
    const ConservationReport r = conservation_check(cfg, small_grid(10.0, 257), exclusion, 1);
    CHECK(r.nodes_used > 50000u);
    // The total current is conserved up to discretization error; J alone is not.
    CHECK(r.max_div_Jt < 10.0 * r.discretization_estimate);
    CHECK(r.max_div_J > r.max_div_Jt);

    // On a resolved patch div J converges to the source -Im(Psi* Phi) at
    // second order, and div Jt to zero.
    GridSpec patch;
    patch.domain = {4.0, 8.0, 1.0, 5.0};
    patch.nx = 201;
    patch.ny = 201;
    const ConservationReport p1 = conservation_check(cfg, patch, exclusion, 1);
    patch.nx = patch.ny = 401;
    const ConservationReport p2 = conservation_check(cfg, patch, exclusion, 1);
    CHECK(p2.max_identity_error < 0.5 * p2.max_source);
    CHECK(p2.max_div_J == doctest::Approx(p2.max_source).epsilon(0.05));
    const double id_drop = p1.max_identity_error / p2.max_identity_error;
    CHECK(id_drop > 3.0);
    CHECK(id_drop < 5.0);
    CHECK(p2.max_div_Jt < 0.5 * p1.max_div_Jt);
    const double drop = r.max_div_Jt / r.max_div_Jt_fine;
    CHECK(drop > 3.0);
    CHECK(drop < 5.0);
}
