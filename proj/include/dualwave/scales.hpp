#pragma once

namespace dualwave {

// Laboratory inputs and the plasmon unit system derived from them.
// Energies are in eV, lengths in nm, wavenumbers in 1/cm, speeds in cm/s.
struct PhysicalScales {
    double n0 = 0.0;       // equilibrium electron density [cm^-3]
    double T = 0.0;        // temperature [K]
    double E_p = 0.0;      // plasmon energy hbar*omega_p [eV]
    double omega_p = 0.0;  // plasmon frequency [rad/s]
    double k_p = 0.0;      // plasmon wavenumber sqrt(2 m E_p)/hbar [1/cm]
    double l_p = 0.0;      // plasmon length 1/k_p [nm]
    double v_p = 0.0;      // plasmon speed (hbar/m) k_p [cm/s]
};

// Throws DomainError for n0 <= 0, T < 0 or non-finite input.
PhysicalScales derive_scales(double n0, double T);

// Conversions between laboratory units and plasmon units.
double length_to_normalized(double x_nm, const PhysicalScales& s);
double length_from_normalized(double x, const PhysicalScales& s);
double energy_to_normalized(double e_ev, const PhysicalScales& s);
double energy_from_normalized(double e, const PhysicalScales& s);
double time_to_normalized(double t_s, const PhysicalScales& s);
double time_from_normalized(double t, const PhysicalScales& s);
double speed_to_normalized(double v_cm_s, const PhysicalScales& s);
double speed_from_normalized(double v, const PhysicalScales& s);

}  // namespace dualwave
