#pragma once

#include "etwist/beams.hpp"
#include "etwist/oam.hpp"
#include "etwist/scattering.hpp"
#include "etwist/transforms.hpp"
#include "etwist/units.hpp"

#include <optional>
#include <span>
#include <vector>

namespace etwist {

// Uniform rectangular grid, x fastest: index = j * nx + i.
struct CartesianGrid {
  double x_min = -1.0, x_max = 1.0;
  int nx = 2;
  double y_min = -1.0, y_max = 1.0;
  int ny = 2;

  static CartesianGrid centered(double cx, double half_x, int nx, double cy,
                                double half_y, int ny);

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return x_min + i * dx(); }
  double y(int j) const { return y_min + j * dy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  void validate() const;
};

// Spinor amplitudes a_(+-)(k_x, k_y) on a k-space grid (one k_z slice).
struct SpectralPacket {
  CartesianGrid grid;
  std::vector<cplx> up;
  std::vector<cplx> down;
  std::optional<GaussianPacketSpec> source;

  // sum (|a_+|^2 + |a_-|^2) dk_x dk_y
  double norm2() const;
  void validate() const;
};

SpectralPacket gaussian_packet(const GaussianPacketSpec& spec,
                               const CartesianGrid& k_grid, Spin spin);

// Grid covering the Gaussian out to `sigmas` standard widths.
CartesianGrid gaussian_k_grid(const GaussianPacketSpec& spec, int n,
                              double sigmas = 6.0);

// Pointwise solution of the time-dependent spectral equation:
//   psi_(+-) = e^{i eps t}[a_(+-) cos(C k_r t) +- a_(-+) sin(C k_r t) e^{-+i phi}]
// with eps = k_r^2.
Spinor evolve_point(const Spinor& a, double k_x, double k_y, double C, double t);

SpectralPacket evolve(const SpectralPacket& packet, double C, double t);

// Relabels every coefficient l -> l + 1 (window shifts with it).
AzimuthalSpectrum ideal_raise(const AzimuthalSpectrum& spec);
AzimuthalSpectrum ideal_lower(const AzimuthalSpectrum& spec);

// The same relabeling in Cartesian k-space: multiply by e^{i phi}.
SpectralPacket ideal_raise(const SpectralPacket& packet);

struct GaussianSpectrumOptions {
  int order = 16;
  double panel_width = 0.25; // in units of min(sigma_y, R sigma_y)
  double extent = 7.0;       // radial coverage in widths around k_y'
  double tail_tolerance = 1e-10;
  int min_phi_samples = 64;
  int max_phi_samples = 1 << 16;
};

// Azimuthal spectrum (about k = 0) of the Gaussian packet amplitude, window
// widened until the truncated mass is below tail_tolerance.
AzimuthalSpectrum gaussian_azimuthal_spectrum(const GaussianPacketSpec& spec,
                                              const GaussianSpectrumOptions& opts = {});

enum class TwistModel { ideal, exact };

struct Fig3Options {
  TwistModel model = TwistModel::ideal;
  // exact model only: rotation angle C k_y' t at the packet centre
  double rotation = kPi / 2.0;
  GaussianSpectrumOptions spectrum;
};

// A^1 and sigma_l of a twisted Gaussian packet over a (sigma_y, R) grid.
struct Fig3Surfaces {
  std::vector<double> sigma_y;
  std::vector<double> R;
  std::vector<double> A1;        // [i_sigma * R.size() + i_R]
  std::vector<double> sigma_ell; // same layout

  double a1(std::size_t i_sigma, std::size_t i_r) const { return A1[i_sigma * R.size() + i_r]; }
  double bandwidth(std::size_t i_sigma, std::size_t i_r) const {
    return sigma_ell[i_sigma * R.size() + i_r];
  }
};

// OAM distribution of one twisted Gaussian packet.
OAMDistribution twisted_gaussian_distribution(const GaussianPacketSpec& spec,
                                              const Fig3Options& opts = {});

Fig3Surfaces fig3_surfaces(std::span<const double> sigma_y,
                           std::span<const double> R, double k_y_mean = 1.0,
                           const Fig3Options& opts = {});

struct CartesianField {
  CartesianGrid grid;
  std::vector<cplx> up;
  std::vector<cplx> down;
};

// psi(x, y) = (1 / 2 pi) sum a(k) e^{i (k_x x + k_y y)} dk_x dk_y, optionally
// after ideal_raise. Throws ResolutionError if the target spacing exceeds
// pi / (2 k_max) or the target extent exceeds the k-grid period 2 pi / dk.
CartesianField synthesize_real_space(const SpectralPacket& packet,
                                     const CartesianGrid& target, bool raised);

// Same synthesis at one point.
Spinor synthesize_point(const SpectralPacket& packet, bool raised, double x, double y);

struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

// |psi|^2-weighted centre of the field.
Centroid field_centroid(const CartesianField& field);

} // namespace etwist
