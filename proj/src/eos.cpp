#include "dualwave/eos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dualwave/constants.hpp"
#include "dualwave/errors.hpp"

namespace dualwave {
namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;

// Occupancy beyond which the finite part is cut (in units of kT above the knee).
constexpr double kTailOffset = 40.0;
constexpr double kQuadratureTol = 1e-12;
constexpr unsigned kMaxDepth = 15;

// Integrates 2 u^power * g(u) where x = u^2 and power = 2j+1. The substitution
// removes the sqrt(x) branch point at the origin.
template <class Weight>
double integrate_in_u(int power, double knee, Weight weight)
{
    auto integrand = [power, &weight](double u) {
        // exp_sinh probes u far enough out that u^power overflows; the weight is zero there.
        const double w = weight(u);
        return w == 0.0 ? 0.0 : 2.0 * std::pow(u, power) * w;
    };
    const double u_knee = std::sqrt(knee);
    const double u_cut = std::sqrt(knee + kTailOffset);

    double total = 0.0;
    if (u_knee > 0.0) {
        total += gauss_kronrod<double, 31>::integrate(integrand, 0.0, u_knee, kMaxDepth, kQuadratureTol);
    }
    total += gauss_kronrod<double, 31>::integrate(integrand, u_knee, u_cut, kMaxDepth, kQuadratureTol);

    // Building the abscissa tables is costly and integrate() may extend them, so
    // keep one integrator per thread.
    thread_local exp_sinh<double> tail;
    total += tail.integrate(integrand, u_cut, std::numeric_limits<double>::infinity());
    return total;
}

double fermi_dirac(int power, double eta)
{
    if (std::isnan(eta)) {
        throw DomainError("fermi_dirac: eta is NaN");
    }
    if (eta == -std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (eta < 0.0) {
        // Factor e^eta out so deep classical points neither underflow the
        // integrand nor lose relative accuracy.
        const double scaled = integrate_in_u(power, 0.0, [eta](double u) {
            const double x = u * u;
            return std::exp(-x) / (1.0 + std::exp(eta - x));
        });
        return std::exp(eta) * scaled;
    }
    return integrate_in_u(power, eta, [eta](double u) {
        const double t = u * u - eta;
        if (t > 0.0) {
            const double e = std::exp(-t);
            return e / (1.0 + e);
        }
        return 1.0 / (1.0 + std::exp(t));
    });
}

double thermal_energy_erg(double T) { return cgs::boltzmann * T; }

// sqrt(2) m^{3/2} / (pi^2 hbar^3) in CGS.
double density_prefactor()
{
    using namespace cgs;
    return std::sqrt(2.0) * std::pow(electron_mass, 1.5) / (pi * pi * hbar * hbar * hbar);
}

void require_temperature(double T, const char* who)
{
    if (!std::isfinite(T) || T <= 0.0) {
        throw DomainError(std::string(who) + ": temperature must be positive, got " + std::to_string(T));
    }
}

}  // namespace

double fermi_dirac_half(double eta) { return fermi_dirac(2, eta); }
double fermi_dirac_three_halves(double eta) { return fermi_dirac(4, eta); }

double density_of_mu(double mu, double T)
{
    require_temperature(T, "density_of_mu");
    const double kT = thermal_energy_erg(T);
    const double eta = mu * cgs::erg_per_ev / kT;
    return density_prefactor() * std::pow(kT, 1.5) * fermi_dirac_half(eta);
}

double pressure_of_mu(double mu, double T)
{
    require_temperature(T, "pressure_of_mu");
    const double kT = thermal_energy_erg(T);
    const double eta = mu * cgs::erg_per_ev / kT;
    // 2^{3/2} m^{3/2} / (3 pi^2 hbar^3) = (2/3) * density prefactor
    return (2.0 / 3.0) * density_prefactor() * std::pow(kT, 2.5) * fermi_dirac_three_halves(eta);
}

EosPoint eos_point(double mu, double T)
{
    return EosPoint{mu, T, density_of_mu(mu, T), pressure_of_mu(mu, T)};
}

double classical_density(double mu, double T)
{
    require_temperature(T, "classical_density");
    using namespace cgs;
    const double kT = thermal_energy_erg(T);
    const double quantum = std::pow(electron_mass * kT / (2.0 * pi * hbar * hbar), 1.5);
    return 2.0 * quantum * std::exp(mu * erg_per_ev / kT);
}

double classical_mu(double n0, double T)
{
    require_temperature(T, "classical_mu");
    if (!(n0 > 0.0)) {
        throw DomainError("classical_mu: density must be positive");
    }
    using namespace cgs;
    const double kT = thermal_energy_erg(T);
    const double quantum = std::pow(2.0 * pi * hbar * hbar / (electron_mass * kT), 1.5);
    return kT * std::log(0.5 * n0 * quantum) / erg_per_ev;
}

double degenerate_density(double mu)
{
    if (!(mu > 0.0)) {
        return 0.0;
    }
    using namespace cgs;
    const double e = mu * erg_per_ev;
    return std::pow(2.0 * electron_mass * e, 1.5) / (3.0 * pi * pi * hbar * hbar * hbar);
}

double fermi_energy(double n0)
{
    if (!(n0 > 0.0) || !std::isfinite(n0)) {
        throw DomainError("fermi_energy: density must be positive");
    }
    using namespace cgs;
    const double e = hbar * hbar / (2.0 * electron_mass) * std::pow(3.0 * pi * pi * n0, 2.0 / 3.0);
    return e / erg_per_ev;
}

double mu_of_density(double n0, double T)
{
    if (!std::isfinite(n0) || n0 <= 0.0) {
        throw DomainError("mu_of_density: density must be positive, got " + std::to_string(n0));
    }
    require_temperature(T, "mu_of_density");

    const double kT = thermal_energy_erg(T);
    const double target = n0 / (density_prefactor() * std::pow(kT, 1.5));
    const double log_target = std::log(target);
    auto to_ev = [kT](double eta) { return eta * kT / cgs::erg_per_ev; };
    // log I_{1/2}(eta) - log target: monotone, close to linear in both limits.
    auto residual = [log_target](double eta) { return std::log(fermi_dirac_half(eta)) - log_target; };

    // I_{1/2}(eta) < Gamma(3/2) e^eta everywhere, so the classical guess is a lower bound;
    // I_{1/2}(eta) >= (2/3) eta^{3/2} for eta > 0, so the T = 0 guess bounds from above.
    const double gamma_three_halves = 0.5 * std::sqrt(cgs::pi);
    double lo = std::log(target / gamma_three_halves);
    double hi = std::max(std::pow(1.5 * target, 2.0 / 3.0), lo + 1.0);
    double r_lo = residual(lo);
    double r_hi = residual(hi);

    for (int i = 0; r_lo > 0.0; ++i) {
        if (i == 64) {
            throw ConvergenceError("mu_of_density: could not bracket the root from below", to_ev(lo), to_ev(hi));
        }
        hi = lo;
        r_hi = r_lo;
        lo -= std::max(1.0, std::abs(lo));
        r_lo = residual(lo);
    }
    for (int i = 0; r_hi < 0.0; ++i) {
        if (i == 64) {
            throw ConvergenceError("mu_of_density: could not bracket the root from above", to_ev(lo), to_ev(hi));
        }
        lo = hi;
        r_lo = r_hi;
        hi += std::max(1.0, std::abs(hi));
        r_hi = residual(hi);
    }

    constexpr double kResidualTol = 1e-12;

    // Bisection down to a 1e-3 bracket.
    while (hi - lo > 1e-3 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        const double r = residual(mid);
        if (std::abs(r) <= kResidualTol) {
            return to_ev(mid);
        }
        (r < 0.0 ? lo : hi) = mid;
        (r < 0.0 ? r_lo : r_hi) = r;
    }

    // Secant on the bracket, falling back to bisection whenever the step leaves it.
    double x_prev = lo;
    double r_prev = r_lo;
    double x = hi;
    double r = r_hi;
    for (int iter = 0; iter < 200; ++iter) {
        double next = x - r * (x - x_prev) / (r - r_prev);
        if (!std::isfinite(next) || next <= lo || next >= hi) {
            next = 0.5 * (lo + hi);
        }
        const double r_next = residual(next);
        if (std::abs(r_next) <= kResidualTol) {
            return to_ev(next);
        }
        (r_next < 0.0 ? lo : hi) = next;
        x_prev = x;
        r_prev = r;
        x = next;
        r = r_next;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            return to_ev(x);
        }
    }
    throw ConvergenceError("mu_of_density: secant iteration did not converge", to_ev(lo), to_ev(hi));
}

}  // namespace dualwave
