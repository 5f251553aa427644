#pragma once

#include "etwist/beams.hpp"
#include "etwist/scattering.hpp"
#include "etwist/transforms.hpp"

#include <map>
#include <span>
#include <vector>

namespace etwist {

// Normalized OAM mode weights with first two moments (hbar units).
struct OAMDistribution {
  std::map<int, double> weights;
  double mean_Lz = 0.0;
  double sigma_ell = 0.0;

  double weight(int ell) const;

  // Normalizes to unit sum. Throws UndefinedDistributionError for zero mass.
  static OAMDistribution from_weights(std::map<int, double> raw);
};

// A^m = int |f_m|^2 k dk over the window, normalized.
OAMDistribution mode_amplitudes(const AzimuthalSpectrum& spec);

// Spin-summed weights A^m = A^m_+ + A^m_-.
OAMDistribution mode_amplitudes(const SpinorSpectrum& spec);

// Conversion curves for a profile entering the field region with one spin.
// For spin-up incidence the converted channel is (spin down, l = +1); for
// spin-down incidence it is (spin up, l = -1).
struct DepthCurves {
  Spin incident = Spin::up;
  int converted_ell = 1;
  std::vector<double> z;
  std::vector<double> converted;   // normalized A of the flipped channel
  std::vector<double> unconverted; // normalized A of the incident channel, l = 0
  std::vector<double> total;       // unnormalized sum of all channel weights
};

// Feeds every radial sample of the profile, amplitude sqrt(|f|^2), through the
// interface at fixed k_z (eps = k_z^2 + k_r^2) and integrates |psi^m|^2 k dk
// at each depth.
DepthCurves oam_vs_depth(const DivergenceProfile& profile, double C, double k_z,
                         std::span<const double> z, Spin incident = Spin::up);

// (max - min) / (max + min) of a curve segment; 0 for a flat or empty one.
double envelope_contrast(std::span<const double> values);

} // namespace etwist
