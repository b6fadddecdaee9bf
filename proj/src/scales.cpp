#include "dualwave/scales.hpp"

#include <cmath>
#include <string>

#include "dualwave/constants.hpp"
#include "dualwave/errors.hpp"

namespace dualwave {

PhysicalScales derive_scales(double n0, double T)
{
    if (!std::isfinite(n0) || n0 <= 0.0) {
        throw DomainError("derive_scales: density must be positive, got " + std::to_string(n0));
    }
    if (!std::isfinite(T) || T < 0.0) {
        throw DomainError("derive_scales: temperature must be non-negative, got " + std::to_string(T));
    }
    using namespace cgs;
    PhysicalScales s;
    s.n0 = n0;
    s.T = T;
    s.omega_p = std::sqrt(4.0 * pi * n0 * elementary_charge * elementary_charge / electron_mass);
    const double energy_erg = hbar * s.omega_p;
    s.E_p = energy_erg / erg_per_ev;
    s.k_p = std::sqrt(2.0 * electron_mass * energy_erg) / hbar;
    s.l_p = nm_per_cm / s.k_p;
    s.v_p = hbar / electron_mass * s.k_p;
    return s;
}

double length_to_normalized(double x_nm, const PhysicalScales& s) { return x_nm / s.l_p; }
double length_from_normalized(double x, const PhysicalScales& s) { return x * s.l_p; }
double energy_to_normalized(double e_ev, const PhysicalScales& s) { return e_ev / s.E_p; }
double energy_from_normalized(double e, const PhysicalScales& s) { return e * s.E_p; }
double time_to_normalized(double t_s, const PhysicalScales& s) { return t_s * s.omega_p; }
double time_from_normalized(double t, const PhysicalScales& s) { return t / s.omega_p; }
double speed_to_normalized(double v_cm_s, const PhysicalScales& s) { return v_cm_s / s.v_p; }
double speed_from_normalized(double v, const PhysicalScales& s) { return v * s.v_p; }

}  // namespace dualwave
