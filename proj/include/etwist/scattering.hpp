#pragma once

#include "etwist/beams.hpp"
#include "etwist/transforms.hpp"
#include "etwist/units.hpp"

#include <span>
#include <vector>

namespace etwist {

enum class Spin { up, down };

struct Spinor {
  cplx up;
  cplx down;
};

// One transverse Fourier mode of an incident spinor, k_x +- i k_y = k_r e^{+-i phi}.
// Incident waves propagate as e^{-i k_z z}; the field occupies z > 0.
struct SpectralMode {
  double k_r = 0.0;
  double phi = 0.0;
  double k_z = 1.0;
  double eps = 1.0; // k_z^2 + k_r^2
  cplx f_plus;
  cplx f_minus;

  // eps is derived, phi is wrapped into [0, 2 pi).
  static SpectralMode make(double k_z, double k_r, double phi, cplx f_plus,
                           cplx f_minus);
  void validate() const;
};

struct LongitudinalWavenumbers {
  cplx k_plus;
  cplx k_minus;
};

// sqrt for radicand >= 0, -i sqrt(|radicand|) otherwise, so that e^{-i k z}
// decays into the field region.
cplx branch_sqrt(double radicand);

// k_(+-) = sqrt(eps - k_r^2 +- C k_r) on the decaying branch.
LongitudinalWavenumbers longitudinal_wavenumbers(double eps, double k_r, double C);

struct ScatteringCoefficients {
  cplx t2;      // transmitted amplitude on the k_+ eigenchannel
  cplx t4;      // transmitted amplitude on the k_- eigenchannel
  cplx r_plus;  // reflected spin-up amplitude
  cplx r_minus; // reflected spin-down amplitude
  cplx k_plus;
  cplx k_minus;
  double k_z = 1.0;
};

// Closed-form solution of the interface boundary-value problem. Throws
// SingularityError if k_z + k_(+-) vanishes (impossible for a valid mode).
ScatteringCoefficients scatter_mode(const SpectralMode& mode, double C);

// Transmitted spinor at depth z >= 0:
//   psi_+ = i e^{-i phi} [t2 e^{-i k_+ z} - t4 e^{-i k_- z}]
//   psi_- =               t2 e^{-i k_+ z} + t4 e^{-i k_- z}
Spinor transmitted_spinor(const ScatteringCoefficients& coefs, double phi, double z);

// d/dz of transmitted_spinor.
Spinor transmitted_spinor_dz(const ScatteringCoefficients& coefs, double phi, double z);

// z-flux bookkeeping: incident = reflected + transmitted for every mode.
struct FluxBudget {
  double incident = 0.0;
  double reflected = 0.0;
  double transmitted_plus = 0.0;  // 2 Re(k_+) |t2|^2
  double transmitted_minus = 0.0; // 2 Re(k_-) |t4|^2

  double imbalance() const {
    return incident - reflected - transmitted_plus - transmitted_minus;
  }
};

FluxBudget flux_budget(const SpectralMode& mode, const ScatteringCoefficients& coefs);

struct ReflectionProbabilities {
  double spin_flip = 0.0;
  double non_flip = 0.0;
};

// Grazing-incidence reflection off the field boundary, flux normalized.
// k = 2 pi / lambda, k_z = k sin(theta), k_r = k cos(theta).
ReflectionProbabilities reflection_probability(const PhysicsContext& ctx,
                                               double theta, double lambda,
                                               double field, Spin incident);

struct ReflectionScan {
  std::vector<double> theta;
  std::vector<ReflectionProbabilities> probabilities;
  std::size_t peak_index = 0; // argmax of the spin-flip probability
};

ReflectionScan reflection_scan(const PhysicsContext& ctx,
                               std::span<const double> theta, double lambda,
                               double field, Spin incident);

// OAM-free and OAM-carrying amplitudes of a transmitted Bessel beam:
//   psi_(+-) = psi0_(+-) J_0(k_rho r) + e^{-+i theta} psi1_(+-) J_1(k_rho r)
struct BesselTransmission {
  cplx psi0_plus;
  cplx psi0_minus;
  cplx psi1_plus;
  cplx psi1_minus;
  double k_rho = 0.0;

  Spinor at(double r, double theta) const;
};

BesselTransmission bessel_beam_transmission(const BesselBeamSpec& beam, double C,
                                            double z);

// Small C k_rho limit: amplitudes b cos(C alpha z / 2) and
// +-b sin(C alpha z / 2) times e^{-i k_z z}.
BesselTransmission linearized_bessel_transmission(const BesselBeamSpec& beam,
                                                  const PhysicsContext& ctx,
                                                  double field, double alpha,
                                                  double z);

// l-resolved transmitted spinor spectrum at depth z for an incident spectrum
// at fixed longitudinal wavenumber k_z (eps = k_z^2 + k_r^2 per node):
//   psi_+^l = k_z[(f_+^l + i f_-^{l+1}) e_+/(k_z+k_+) + (f_+^l - i f_-^{l+1}) e_-/(k_z+k_-)]
//   psi_-^l = k_z[(f_-^l - i f_+^{l-1}) e_+/(k_z+k_+) + (f_-^l + i f_+^{l-1}) e_-/(k_z+k_-)]
// Both components must share a radial grid.
SpinorSpectrum transmit_spectrum(const SpinorSpectrum& incident, double C,
                                 double k_z, double z);

} // namespace etwist
