#include "doctest.h"

#include <cmath>

#include "dualwave/errors.hpp"
#include "dualwave/scales.hpp"
#include "oracles.hpp"

using namespace dualwave;

TEST_CASE("plasmon energy of a metallic density is a few eV")
{
    const PhysicalScales s = derive_scales(1e22, 300.0);
    const double omega = std::sqrt(4.0 * oracle::pi * 1e22 * oracle::e_charge * oracle::e_charge / oracle::m_e);
    CHECK(s.omega_p == doctest::Approx(omega).epsilon(1e-9));
    CHECK(s.E_p == doctest::Approx(oracle::hbar * omega / oracle::eV).epsilon(1e-9));
    CHECK(s.E_p == doctest::Approx(3.7).epsilon(0.02));
}

TEST_CASE("unit relations hold to 1e-12")
{
    for (double n0 : {1e14, 1e17, 1e20, 1e22, 1e24}) {
        const PhysicalScales s = derive_scales(n0, 300.0);
        const double k = std::sqrt(2.0 * oracle::m_e * s.E_p * oracle::eV) / oracle::hbar;
        CHECK(std::abs(s.k_p / k - 1.0) < 1e-12);
        CHECK(std::abs(s.l_p * 1e-7 * s.k_p - 1.0) < 1e-12);
        CHECK(std::abs(s.v_p / (oracle::hbar / oracle::m_e * s.k_p) - 1.0) < 1e-12);
    }
}

TEST_CASE("plasmon length near 1e17 cm^-3")
{
    // Frozen value from the CODATA constants; the nominal 10 nm scale holds within a decade.
    const PhysicalScales s = derive_scales(1e17, 300.0);
    CHECK(s.l_p == doctest::Approx(1.80129).epsilon(1e-5));
    CHECK(s.l_p > 1.0);
    CHECK(s.l_p < 100.0);
}

TEST_CASE("energy scales as sqrt(n0)")
{
    CHECK(derive_scales(4e22, 300.0).E_p / derive_scales(1e22, 300.0).E_p == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("monotone in density")
{
    double last_E = 0.0;
    double last_l = 1e300;
    for (int i = 0; i <= 100; ++i) {
        const PhysicalScales s = derive_scales(std::pow(10.0, 14.0 + 0.1 * i), 300.0);
        CHECK(s.E_p > last_E);
        CHECK(s.l_p < last_l);
        last_E = s.E_p;
        last_l = s.l_p;
    }
}

TEST_CASE("conversions round trip")
{
    const PhysicalScales s = derive_scales(3e21, 77.0);
    CHECK(length_to_normalized(s.l_p, s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(energy_to_normalized(s.E_p, s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(length_to_normalized(0.0, s) == 0.0);
    for (double v : {1e-3, 0.7, 42.0, 1e5}) {
        CHECK(std::abs(length_from_normalized(length_to_normalized(v, s), s) / v - 1.0) < 1e-12);
        CHECK(std::abs(energy_from_normalized(energy_to_normalized(v, s), s) / v - 1.0) < 1e-12);
        CHECK(std::abs(time_from_normalized(time_to_normalized(v, s), s) / v - 1.0) < 1e-12);
        CHECK(std::abs(speed_from_normalized(speed_to_normalized(v, s), s) / v - 1.0) < 1e-12);
    }
}

TEST_CASE("invalid inputs")
{
    CHECK_THROWS_AS(derive_scales(0.0, 300.0), DomainError);
    CHECK_THROWS_AS(derive_scales(-1e20, 300.0), DomainError);
    CHECK_THROWS_AS(derive_scales(1e20, -1.0), DomainError);
    CHECK_NOTHROW(derive_scales(1e20, 0.0));
}
