#pragma once

#include "etwist/quadrature.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace etwist {

using cplx = std::complex<double>;

// l-resolved radial functions f_l(k_r) on a shared radial grid.
//
// Coefficients produced by azimuthal_decompose follow
//   f_l(k_r) = int_0^{2 pi} f(k_r, phi) e^{-i l phi} dphi
// with no 1/(2 pi) prefactor. Everything downstream renormalizes mode weights
// to probabilities, so the extra 2 pi never reaches a reported number.
// Spectra built directly from a model (rings, profiles) store plain
// expansion coefficients f = sum_l f_l e^{i l phi}.
struct AzimuthalSpectrum {
  int ell_min = 0;
  int ell_max = 0;
  RadialGrid grid;
  std::vector<std::vector<cplx>> coeffs; // [ell - ell_min][radial node]
  // Fraction of sum_l int |f_l|^2 k dk lying outside [ell_min, ell_max];
  // zero for spectra not obtained by decomposition.
  double truncated_fraction = 0.0;

  static AzimuthalSpectrum zeros(int ell_min, int ell_max, RadialGrid grid);

  bool contains(int ell) const { return ell >= ell_min && ell <= ell_max; }
  int window_size() const { return ell_max - ell_min + 1; }
  std::span<cplx> mode(int ell);
  std::span<const cplx> mode(int ell) const;
  int max_abs_ell() const;

  void validate() const;
};

struct SpinorSpectrum {
  AzimuthalSpectrum up;
  AzimuthalSpectrum down;
};

// Complex samples f(k_r, phi_j) with phi_j = 2 pi j / n_phi.
struct PolarSamples {
  RadialGrid radial;
  int n_phi = 0;
  std::vector<cplx> values; // [radial * n_phi + j]

  static PolarSamples sample(RadialGrid radial, int n_phi,
                             const std::function<cplx(double, double)>& f);

  double phi(int j) const;
  cplx& at(std::size_t i, int j) { return values[i * n_phi + j]; }
  cplx at(std::size_t i, int j) const { return values[i * n_phi + j]; }
};

// Real-space polar grid; theta_j = 2 pi j / n_theta.
struct PolarGrid {
  RadialGrid radial;
  int n_theta = 0;
  double theta(int j) const;
};

// Two views of the same data: psi(r_i, theta_j) stored radius-major.
struct RealSpaceField {
  PolarGrid grid;
  std::vector<cplx> values; // [radial * n_theta + j]

  cplx at(std::size_t i, int j) const { return values[i * grid.n_theta + j]; }
};

// Discrete phi-sum of the azimuthal transform. Exact for fields
// band-limited to the sampling. Throws AliasingError unless
// n_phi >= 2 (max|l| + 1).
AzimuthalSpectrum azimuthal_decompose(const PolarSamples& field, int ell_min,
                                      int ell_max);

// Symmetric window grown from [-start, start] until the truncated mass falls
// below tail_tolerance. Throws AliasingError if the phi sampling runs out
// first.
AzimuthalSpectrum azimuthal_decompose_auto(const PolarSamples& field,
                                           double tail_tolerance = 1e-10,
                                           int start = 8);

// Radial part of one OAM component in real space:
//   psi_l(r) = i^{-l} int f_l(k) J_l(k r) k dk.
std::vector<cplx> hankel_component(const AzimuthalSpectrum& spec, int ell,
                                   std::span<const double> r);

// psi(r, theta) = sum_l i^{-l} e^{i l theta} int f_l(k) J_l(k r) k dk.
// Throws AliasingError for too few theta samples and ResolutionError when the
// radial sampling cannot carry the spectral bandwidth (mean node spacing
// times K_max must stay below pi/2, twice the Nyquist requirement).
RealSpaceField hankel_synthesize(const AzimuthalSpectrum& spec,
                                 const PolarGrid& target);

// Exact inverse of hankel_synthesize onto the given k grid.
AzimuthalSpectrum hankel_analyze(const RealSpaceField& field, int ell_min,
                                 int ell_max, const RadialGrid& k_grid);

// int |f_l(k)|^2 k dk. Zero for l outside the window.
double parseval_mode_norm(const AzimuthalSpectrum& spec, int ell);

// Sum of parseval_mode_norm over the window.
double total_norm(const AzimuthalSpectrum& spec);

// int |psi_l(r)|^2 r dr with psi_l the 1/(2 pi) theta coefficient.
double real_space_mode_norm(const RealSpaceField& field, int ell);

} // namespace etwist
