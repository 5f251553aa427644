#include "etwist/scattering.hpp"

#include "etwist/bessel.hpp"
#include "etwist/errors.hpp"

#include <algorithm>
#include <cmath>

namespace etwist {

namespace {

constexpr cplx I{0.0, 1.0};

LongitudinalWavenumbers wavenumbers_from_kz(double k_z, double k_r, double C) {
  // eps - k_r^2 == k_z^2 exactly; avoids cancellation at grazing incidence
  const double base = k_z * k_z;
  return {branch_sqrt(base + C * k_r), branch_sqrt(base - C * k_r)};
}

} // namespace

SpectralMode SpectralMode::make(double k_z, double k_r, double phi, cplx f_plus,
                                cplx f_minus) {
  SpectralMode m;
  m.k_z = k_z;
  m.k_r = k_r;
  m.phi = std::fmod(phi, 2.0 * kPi);
  if (m.phi < 0.0) m.phi += 2.0 * kPi;
  m.eps = k_z * k_z + k_r * k_r;
  m.f_plus = f_plus;
  m.f_minus = f_minus;
  m.validate();
  return m;
}

void SpectralMode::validate() const {
  if (!(k_z > 0.0)) throw DomainError("SpectralMode: k_z must be > 0");
  if (!(k_r >= 0.0)) throw DomainError("SpectralMode: k_r must be >= 0");
  if (!(phi >= 0.0 && phi < 2.0 * kPi)) throw DomainError("SpectralMode: phi outside [0, 2 pi)");
  const double expect = k_z * k_z + k_r * k_r;
  if (std::abs(eps - expect) > 8.0 * 2.2e-16 * expect)
    throw DomainError("SpectralMode: eps != k_z^2 + k_r^2");
}

cplx branch_sqrt(double radicand) {
  if (radicand >= 0.0) return {std::sqrt(radicand), 0.0};
  return {0.0, -std::sqrt(-radicand)};
}

LongitudinalWavenumbers longitudinal_wavenumbers(double eps, double k_r, double C) {
  if (!(eps >= 0.0) || !(k_r >= 0.0))
    throw DomainError("longitudinal_wavenumbers: need eps >= 0 and k_r >= 0");
  const double base = eps - k_r * k_r;
  return {branch_sqrt(base + C * k_r), branch_sqrt(base - C * k_r)};
}

ScatteringCoefficients scatter_mode(const SpectralMode& mode, double C) {
  mode.validate();
  const auto [kp, km] = wavenumbers_from_kz(mode.k_z, mode.k_r, C);
  const double kz = mode.k_z;
  const cplx a = kz + kp;
  const cplx b = kz + km;
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0)
    throw SingularityError("scatter_mode: k_z + k_(+-) vanished");

  const cplx e_phi = std::polar(1.0, mode.phi);
  const cplx fp = mode.f_plus;
  const cplx fm = mode.f_minus;

  ScatteringCoefficients c;
  c.k_plus = kp;
  c.k_minus = km;
  c.k_z = kz;
  c.t2 = (-I * kz * fp * e_phi + kz * fm) / a;
  c.t4 = (I * kz * fp * e_phi + kz * fm) / b;
  const cplx denom = a * b;
  const cplx diag = kz * kz - kp * km;
  const cplx cross = I * kz * (kp - km);
  c.r_plus = (diag * fp - cross * std::conj(e_phi) * fm) / denom;
  c.r_minus = (diag * fm + cross * e_phi * fp) / denom;
  return c;
}

Spinor transmitted_spinor(const ScatteringCoefficients& c, double phi, double z) {
  if (!(z >= 0.0)) throw DomainError("transmitted_spinor: z must be >= 0");
  const cplx ep = std::exp(-I * c.k_plus * z);
  const cplx em = std::exp(-I * c.k_minus * z);
  const cplx u = c.t2 * ep;
  const cplx v = c.t4 * em;
  return {I * std::polar(1.0, -phi) * (u - v), u + v};
}

Spinor transmitted_spinor_dz(const ScatteringCoefficients& c, double phi, double z) {
  const cplx ep = std::exp(-I * c.k_plus * z);
  const cplx em = std::exp(-I * c.k_minus * z);
  const cplx u = -I * c.k_plus * c.t2 * ep;
  const cplx v = -I * c.k_minus * c.t4 * em;
  return {I * std::polar(1.0, -phi) * (u - v), u + v};
}

FluxBudget flux_budget(const SpectralMode& mode, const ScatteringCoefficients& c) {
  FluxBudget f;
  f.incident = mode.k_z * (std::norm(mode.f_plus) + std::norm(mode.f_minus));
  f.reflected = mode.k_z * (std::norm(c.r_plus) + std::norm(c.r_minus));
  // eigen-spinors (+-i e^{-i phi}, 1) have squared norm 2
  f.transmitted_plus = 2.0 * c.k_plus.real() * std::norm(c.t2);
  f.transmitted_minus = 2.0 * c.k_minus.real() * std::norm(c.t4);
  return f;
}

ReflectionProbabilities reflection_probability(const PhysicsContext& ctx,
                                               double theta, double lambda,
                                               double field, Spin incident) {
  if (!(theta > 0.0 && theta <= kPi / 2.0))
    throw DomainError("reflection_probability: theta must lie in (0, pi/2]");
  if (!(lambda > 0.0)) throw DomainError("reflection_probability: lambda must be > 0");
  const double k = 2.0 * kPi / lambda;
  const double C = coupling_constant(ctx, field).value;
  const bool up = incident == Spin::up;
  const auto mode = SpectralMode::make(k * std::sin(theta), k * std::cos(theta), 0.0,
                                       up ? 1.0 : 0.0, up ? 0.0 : 1.0);
  const auto c = scatter_mode(mode, C);
  const double rp = std::norm(c.r_plus);
  const double rm = std::norm(c.r_minus);
  return up ? ReflectionProbabilities{rm, rp} : ReflectionProbabilities{rp, rm};
}

ReflectionScan reflection_scan(const PhysicsContext& ctx,
                               std::span<const double> theta, double lambda,
                               double field, Spin incident) {
  if (theta.empty()) throw DomainError("reflection_scan: empty angle grid");
  ReflectionScan scan;
  scan.theta.assign(theta.begin(), theta.end());
  scan.probabilities.reserve(theta.size());
  for (double t : theta)
    scan.probabilities.push_back(reflection_probability(ctx, t, lambda, field, incident));
  for (std::size_t i = 1; i < theta.size(); ++i)
    if (scan.probabilities[i].spin_flip > scan.probabilities[scan.peak_index].spin_flip)
      scan.peak_index = i;
  return scan;
}

Spinor BesselTransmission::at(double r, double theta) const {
  const double j0 = bessel_j(0, k_rho * r);
  const double j1 = bessel_j(1, k_rho * r);
  return {psi0_plus * j0 + std::polar(1.0, -theta) * psi1_plus * j1,
          psi0_minus * j0 + std::polar(1.0, theta) * psi1_minus * j1};
}

BesselTransmission bessel_beam_transmission(const BesselBeamSpec& beam, double C,
                                            double z) {
  beam.validate();
  if (!(z >= 0.0)) throw DomainError("bessel_beam_transmission: z must be >= 0");
  const double kz = beam.k_z;
  const auto [kp, km] = wavenumbers_from_kz(kz, beam.k_rho, C);
  const cplx p = std::exp(-I * kp * z) / (kz + kp);
  const cplx m = std::exp(-I * km * z) / (kz + km);
  BesselTransmission t;
  t.k_rho = beam.k_rho;
  t.psi0_plus = kz * beam.b_plus * (p + m);
  t.psi0_minus = kz * beam.b_minus * (p + m);
  t.psi1_plus = kz * beam.b_minus * (p - m);
  t.psi1_minus = -kz * beam.b_plus * (p - m);
  return t;
}

BesselTransmission linearized_bessel_transmission(const BesselBeamSpec& beam,
                                                  const PhysicsContext& ctx,
                                                  double field, double alpha,
                                                  double z) {
  beam.validate();
  const double C = coupling_constant(ctx, field).value;
  const double angle = C * alpha * z / 2.0;
  const cplx carrier = std::exp(-I * beam.k_z * z);
  BesselTransmission t;
  t.k_rho = beam.k_rho;
  t.psi0_plus = beam.b_plus * std::cos(angle) * carrier;
  t.psi0_minus = beam.b_minus * std::cos(angle) * carrier;
  t.psi1_plus = beam.b_minus * std::sin(angle) * carrier;
  t.psi1_minus = -beam.b_plus * std::sin(angle) * carrier;
  return t;
}

SpinorSpectrum transmit_spectrum(const SpinorSpectrum& incident, double C,
                                 double k_z, double z) {
  const auto& fu = incident.up;
  const auto& fd = incident.down;
  fu.validate();
  fd.validate();
  if (fu.grid.size() != fd.grid.size())
    throw DomainError("transmit_spectrum: spin components on different grids");
  if (!(k_z > 0.0)) throw DomainError("transmit_spectrum: k_z must be > 0");
  if (!(z >= 0.0)) throw DomainError("transmit_spectrum: z must be >= 0");

  const int up_min = std::min(fu.ell_min, fd.ell_min - 1);
  const int up_max = std::max(fu.ell_max, fd.ell_max - 1);
  const int dn_min = std::min(fd.ell_min, fu.ell_min + 1);
  const int dn_max = std::max(fd.ell_max, fu.ell_max + 1);
  SpinorSpectrum out{AzimuthalSpectrum::zeros(up_min, up_max, fu.grid),
                     AzimuthalSpectrum::zeros(dn_min, dn_max, fu.grid)};

  auto coef = [](const AzimuthalSpectrum& s, int ell, std::size_t i) -> cplx {
    return s.contains(ell) ? s.coeffs[ell - s.ell_min][i] : cplx{};
  };

  const auto k = fu.grid.nodes();
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto [kp, km] = wavenumbers_from_kz(k_z, k[i], C);
    const cplx p = k_z * std::exp(-I * kp * z) / (k_z + kp);
    const cplx m = k_z * std::exp(-I * km * z) / (k_z + km);
    for (int ell = up_min; ell <= up_max; ++ell) {
      const cplx a = coef(fu, ell, i);
      const cplx b = I * coef(fd, ell + 1, i);
      out.up.coeffs[ell - up_min][i] = (a + b) * p + (a - b) * m;
    }
    for (int ell = dn_min; ell <= dn_max; ++ell) {
      const cplx a = coef(fd, ell, i);
      const cplx b = I * coef(fu, ell - 1, i);
      out.down.coeffs[ell - dn_min][i] = (a - b) * p + (a + b) * m;
    }
  }
  return out;
}

} // namespace etwist
