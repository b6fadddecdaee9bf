#pragma once

namespace dualwave {

// Isothermal ideal Fermi gas (spin 1/2) at arbitrary degeneracy.
// mu in eV, T in K, densities in cm^-3, pressures in erg/cm^3.
struct EosPoint {
    double mu = 0.0;
    double T = 0.0;
    double n_e = 0.0;
    double P_e = 0.0;
};

// Complete Fermi-Dirac integral without the 1/Gamma(j+1) normalization:
//   I_j(eta) = int_0^inf x^j / (exp(x - eta) + 1) dx,   j in {1/2, 3/2}.
// Relative accuracy ~1e-12.
double fermi_dirac_half(double eta);
double fermi_dirac_three_halves(double eta);

// n_e(mu, T) and P_e(mu, T). Throw DomainError for T <= 0.
double density_of_mu(double mu, double T);
double pressure_of_mu(double mu, double T);
EosPoint eos_point(double mu, double T);

// Inverts density_of_mu at fixed T. |n(mu) - n0| / n0 <= 1e-8.
// Throws DomainError for bad inputs and ConvergenceError when the bracket
// cannot be established or the iteration stalls.
double mu_of_density(double n0, double T);

// Limits used to seed the root bracket.
double classical_density(double mu, double T);  // 2 (m kT / 2 pi hbar^2)^{3/2} e^{mu/kT}
double classical_mu(double n0, double T);
double degenerate_density(double mu);           // (2 m mu)^{3/2} / (3 pi^2 hbar^3), 0 for mu <= 0
double fermi_energy(double n0);                 // (hbar^2 / 2m) (3 pi^2 n0)^{2/3}

}  // namespace dualwave
