#pragma once

// Physical constants in Gaussian CGS units (CODATA 2018). Exact SI-defined
// values are reproduced in full; the electron mass carries its published
// 11 significant digits.
namespace dualwave::cgs {

inline constexpr double pi = 3.141592653589793238462643383279502884;

inline constexpr double hbar = 1.054571817646156e-27;      // erg s
inline constexpr double electron_mass = 9.1093837015e-28;  // g
inline constexpr double elementary_charge = 4.803204712570263e-10;  // statC
inline constexpr double boltzmann = 1.380649e-16;          // erg / K
inline constexpr double erg_per_ev = 1.602176634e-12;      // erg / eV
inline constexpr double nm_per_cm = 1.0e7;

}  // namespace dualwave::cgs
