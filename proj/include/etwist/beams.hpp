#pragma once

#include "etwist/quadrature.hpp"
#include "etwist/transforms.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <optional>
#include <vector>

namespace etwist {

// Bessel beam b_(+-) J_0(k_rho r) e^{-i k_z z}, carrying no OAM.
struct BesselBeamSpec {
  double k_rho = 0.0;
  double k_z = 1.0;
  cplx b_plus{1.0, 0.0};
  cplx b_minus{0.0, 0.0};

  void validate() const;
  // |b+|^2 + |b-|^2 = 1. Throws DomainError for a zero spinor.
  BesselBeamSpec normalized() const;
};

// a(k_x, k_y) = exp(-(k_y - k_y')^2 / sigma_y^2) exp(-k_x^2 / (R sigma_y)^2)
struct GaussianPacketSpec {
  double k_y_mean = 1.0;
  double sigma_y = 0.1;
  double R = 1.0;

  void validate() const;
};

cplx gaussian_spectral_amplitude(const GaussianPacketSpec& spec, double k_x,
                                 double k_y);

// int int |a|^2 dk_x dk_y over the plane = pi R sigma_y^2 / 2.
double gaussian_l2_norm(const GaussianPacketSpec& spec);

// Circular aperture, or an annulus when inner > 0.
struct Aperture {
  double inner = 0.0;
  double outer = 1.0;
};

enum class CollimatorKind { two_pinholes, exit_and_pinhole, annulus_and_pinhole };

struct CollimatorGeometry {
  CollimatorKind kind = CollimatorKind::two_pinholes;
  Aperture first;
  Aperture second;
  double separation = 1.0;
  double k_z = 1.0;

  static CollimatorGeometry two_pinholes(double radius, double separation,
                                         double k_z);
  static CollimatorGeometry exit_and_pinhole(double exit_radius,
                                             double pinhole_radius,
                                             double separation, double k_z);
  static CollimatorGeometry annulus_and_pinhole(double inner, double outer,
                                                double pinhole_radius,
                                                double separation, double k_z);

  void validate() const;
  // Largest transverse wavenumber any straight ray can carry.
  double k_max() const;
};

// Intersection area of two disks of radii a, b with centres d apart.
double disk_overlap_area(double a, double b, double d);

// Intersection area of two (possibly annular) apertures with centres d apart.
double aperture_overlap_area(const Aperture& p, const Aperture& q, double d);

// Transverse-wavenumber density |f|^2(k_r), normalized so that
// int |f|^2 k_r dk_r = 1 on its grid.
struct DivergenceProfile {
  RadialGrid grid;
  std::vector<double> density;
  std::optional<CollimatorGeometry> geometry;
  double normalization = 1.0; // overlap-area integral the density is divided by

  // Analytic density at any k (collimator profiles only).
  double density_at(double k) const;

  double norm() const;
  // int_0^k |f|^2 k' dk'; collimator profiles use piecewise quadrature between
  // the kinks and are normalized so that cdf(k_max) = 1.
  double cdf(double k) const;
  double mean_k() const;
  double variance_k() const;

  void validate() const;

  // Single ring at k0 carrying all the weight (Bessel-beam limit).
  static DivergenceProfile delta_ring(double k0);
};

// Angular acceptance of the two apertures: the density of ray directions is
// the overlap area of the apertures shifted by D * angle, mapped to
// k_r = k_z * angle (small angles). Panels are aligned with the kinks of the
// overlap function; panels_per_segment sets the resolution.
DivergenceProfile divergence_profile(const CollimatorGeometry& geom,
                                     int panels_per_segment = 8, int order = 16);

// Straight rays through uniformly sampled points of both apertures; returns
// the fraction of rays with k_r <= k for each requested k. Work is split into
// fixed substreams seeded from `seed`, so the result does not depend on the
// thread count.
std::vector<double> monte_carlo_cdf(const CollimatorGeometry& geom,
                                    std::span<const double> k, std::uint64_t rays,
                                    std::uint64_t seed);

// l = 0 ring f_0 = b delta(k - k_rho) / k, regularized as a normalized
// Gaussian of the given width (int g k dk = 1).
SpinorSpectrum bessel_spectrum(const BesselBeamSpec& spec, double width,
                               int panels = 32, int order = 16);

} // namespace etwist
