#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "dualwave/eos.hpp"
#include "dualwave/errors.hpp"
#include "oracles.hpp"

using namespace dualwave;

namespace {
double beta_mu_to_ev(double eta, double T) { return eta * oracle::k_B * T / oracle::eV; }
}  // namespace

TEST_CASE("classical point matches Maxwell-Boltzmann")
{
    const double T = 300.0;
    const double mu = beta_mu_to_ev(-10.0, T);
    const double n = density_of_mu(mu, T);
    CHECK(n / oracle::classical_density(mu, T) == doctest::Approx(1.0).epsilon(1e-3));
    const double P = pressure_of_mu(mu, T);
    CHECK(P / (n * oracle::k_B * T) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("degenerate point matches the T = 0 forms")
{
    const double T = 300.0;
    const double mu = beta_mu_to_ev(1e3, T);
    const double n = density_of_mu(mu, T);
    CHECK(n / oracle::degenerate_density(mu) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(pressure_of_mu(mu, T) / (0.4 * n * mu * oracle::eV) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("empty band")
{
    const double ninf = -std::numeric_limits<double>::infinity();
    CHECK(density_of_mu(ninf, 300.0) == 0.0);
    CHECK(pressure_of_mu(ninf, 300.0) == 0.0);
    CHECK(density_of_mu(-50.0, 300.0) < 1e-300);
}

TEST_CASE("quadrature agrees with a brute-force trapezoid oracle")
{
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> eta_dist(-30.0, 200.0);
    for (int i = 0; i < 20; ++i) {
        const double eta = eta_dist(rng);
        CHECK(fermi_dirac_half(eta) / oracle::trapezoid_fermi_dirac(0.5, eta) == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(fermi_dirac_three_halves(eta) / oracle::trapezoid_fermi_dirac(1.5, eta) ==
              doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("chemical potential limits and round trip")
{
    const double T = 300.0;
    const double mu_low = mu_of_density(1e14, T);
    CHECK(mu_low < 0.0);
    CHECK(mu_low / oracle::classical_mu(1e14, T) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(mu_of_density(1e22, T) / oracle::fermi_energy(1e22) == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(mu_of_density(1e23, T) / oracle::fermi_energy(1e23) == doctest::Approx(1.0).epsilon(2e-2));
    for (double n0 : {1e10, 1e14, 1e18, 1e20, 1e22, 1e24, 1e26}) {
        const double mu = mu_of_density(n0, T);
        CHECK(std::abs(density_of_mu(mu, T) / n0 - 1.0) < 1e-8);
    }
}

TEST_CASE("monotone density and chemical potential")
{
    double last_mu = -1e300;
    for (int i = 0; i <= 50; ++i) {
        const double mu = mu_of_density(std::pow(10.0, 14.0 + 0.2 * i), 300.0);
        CHECK(mu > last_mu);
        last_mu = mu;
    }
    double last_n = 0.0;
    for (double mu = -1.0; mu <= 10.0; mu += 0.25) {
        const double n = density_of_mu(mu, 300.0);
        CHECK(n > last_n);
        last_n = n;
    }
}

TEST_CASE("Gibbs-Duhem: dP/dmu = n")
{
    const double T = 300.0;
    for (double mu : {-0.3, -0.05, 0.0, 0.04, 1.0, 5.0}) {
        const double h = 1e-4 * std::max(1.0, std::abs(mu));
        const double dP = (pressure_of_mu(mu + h, T) - pressure_of_mu(mu - h, T)) / (2.0 * h * oracle::eV);
        CHECK(dP / density_of_mu(mu, T) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(density_of_mu(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(pressure_of_mu(0.0, -3.0), DomainError);
    CHECK_THROWS_AS(mu_of_density(-1.0, 300.0), DomainError);
    CHECK_THROWS_AS(mu_of_density(1e20, 0.0), DomainError);
    CHECK_THROWS_AS(fermi_dirac_half(std::nan("")), DomainError);
}
