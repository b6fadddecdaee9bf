#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dualwave/dynamics.hpp"
#include "dualwave/pseudoforce.hpp"

namespace dualwave {

using ComplexVec2 = std::array<complex, 2>;

// Uniform lattice on a z slice. Node (i, j) sits at
// (xmin + i dx, ymin + j dy) with dx = width / (nx - 1).
struct GridSpec {
    Domain domain{-20.0, 20.0, -20.0, 20.0};
    std::size_t nx = 512;
    std::size_t ny = 512;
    double z = 0.0;
    double mask_radius = 0.05;  // nodes closer than this to a pole are masked
};

// Channels are stored row-major (index j * nx + i). Masked nodes hold NaN in
// every channel.
struct FieldGrid {
    GridSpec spec;
    DipoleConfig cfg;
    double dx = 0.0;
    double dy = 0.0;

    std::vector<complex> Psi;
    std::vector<complex> Phi;
    std::vector<double> n;      // |Psi|^2
    std::vector<Vec2> J;        // Im(Psi* grad Psi)
    std::vector<Vec2> Jd;       // -Im(Phi* grad Phi)
    std::vector<Vec2> Jt;       // J + Jd
    std::vector<double> dJz;    // d/dz of the out-of-plane component of J
    std::vector<double> dJdz;   // same for Jd
    std::vector<ComplexVec2> Efield;  // -grad Phi (in-plane)
    std::vector<std::uint8_t> mask;   // 1 = masked

    std::size_t size() const { return spec.nx * spec.ny; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * spec.nx + i; }
    double x(std::size_t i) const { return spec.domain.xmin + static_cast<double>(i) * dx; }
    double y(std::size_t j) const { return spec.domain.ymin + static_cast<double>(j) * dy; }
    std::size_t masked_count() const;
};

enum class ScalarChannel { Psi, Phi, n, J, Jd, Jt, Efield };
enum class CurrentChannel { J, Jd, Jt };

const char* to_string(ScalarChannel c);

// Fills every channel from analytic fields and gradients. Rows are distributed
// over `threads` workers (0 = hardware concurrency); the result does not depend
// on the thread count. Throws DomainError for a zero-area domain or nx, ny < 16.
FieldGrid evaluate_grid(const DipoleConfig& cfg, const GridSpec& spec, unsigned threads = 0);

// Modulus reading of a channel: |Psi|, |Phi|, n, Euclidean norm of J/Jd/Jt and
// sqrt(|Ex|^2 + |Ey|^2) for the complex E field.
double channel_magnitude(const FieldGrid& g, ScalarChannel c, std::size_t k);
std::vector<double> magnitude(const FieldGrid& g, ScalarChannel c);

// Central-difference divergence of an in-plane field; second-order one-sided
// stencils on the boundary. NaN inputs propagate to every stencil touching them.
std::vector<double> planar_divergence(const std::vector<Vec2>& f, std::size_t nx, std::size_t ny, double dx,
                                      double dy);

// Full 3D divergence of a current on the slice: planar stencil plus the
// analytic d/dz flux term. Throws ResolutionError when 2 pi / k2 spans fewer
// than 8 grid spacings.
std::vector<double> divergence(const FieldGrid& g, CurrentChannel c);

// -grad Phi in the plane. Throws SingularityError within mask_radius of a pole.
ComplexVec2 electric_field(const Vec3& p, const DipoleConfig& cfg, double mask_radius = 0.05);
double field_magnitude(const ComplexVec2& e);

// Straight probe with `samples` equally spaced points, ends included.
struct Probe {
    Vec2 start;
    Vec2 end;
    std::size_t samples = 512;

    double spacing() const;
    Vec2 point(std::size_t s) const;
};

// Bilinear samples of the grid along a probe. Complex sampling is only
// defined for Psi and Phi. Throws DomainError when the probe leaves the grid.
std::vector<complex> sample_complex(const FieldGrid& g, ScalarChannel c, const Probe& probe);
std::vector<double> sample_magnitude(const FieldGrid& g, ScalarChannel c, const Probe& probe);
// Exact samples straight from the field solution.
std::vector<complex> sample_complex(const DipoleConfig& cfg, ScalarChannel c, const Probe& probe, double z = 0.0);

struct SpectrumPeak {
    double frequency = 0.0;  // angular spatial frequency [1 / plasmon length]
    double bin_width = 0.0;  // 2 pi / (N spacing)
    double power = 0.0;
};

// Mean-removed, Hann-windowed DFT; peak over the non-DC bins. Throws
// DomainError for fewer than 256 samples and NoPeakError for a flat signal.
SpectrumPeak fringe_spectrum(const std::vector<complex>& samples, double spacing);
SpectrumPeak fringe_spectrum(const std::vector<double>& samples, double spacing);
// Psi and Phi are analysed as complex samples, the other channels by modulus.
SpectrumPeak fringe_spectrum(const FieldGrid& g, ScalarChannel c, const Probe& probe);

// Peak-to-mean ratio of a non-negative profile (NaN entries skipped).
double fringe_contrast(const std::vector<double>& profile);

// Point samples of a channel's magnitude along grid row j.
std::vector<double> grid_row(const FieldGrid& g, ScalarChannel c, std::size_t j);

// Fringe visibility seen by finite pixels: |channel| divided by the incoherent
// two-pole envelope, averaged over each pixel along the row y, then max / min.
// Only Psi and Phi are supported.
double pixel_visibility(const DipoleConfig& cfg, ScalarChannel c, double y, double xmin, double xmax,
                        std::size_t pixels);

// Conservation check of the two currents on a grid and its 2n-1 refinement.
struct ConservationReport {
    double exclusion_radius = 0.0;   // only nodes at least this far from a pole count
    std::size_t nodes_used = 0;
    double max_div_Jt = 0.0;         // coarse grid
    double max_div_J = 0.0;          // coarse grid
    double max_div_Jt_fine = 0.0;    // refined grid, same nodes
    double discretization_estimate = 0.0;  // max (4/3)|D_h - D_h/2| of div Jt at coincident nodes
    double max_source = 0.0;         // max |Im(Psi* Phi)|
    double max_identity_error = 0.0; // max |div J + Im(Psi* Phi)| on the coarse grid
};

ConservationReport conservation_check(const DipoleConfig& cfg, const GridSpec& spec, double exclusion_radius,
                                      unsigned threads = 0);

}  // namespace dualwave
