#include "etwist/oam.hpp"

#include "etwist/errors.hpp"

#include <algorithm>
#include <cmath>

namespace etwist {

double OAMDistribution::weight(int ell) const {
  const auto it = weights.find(ell);
  return it == weights.end() ? 0.0 : it->second;
}

OAMDistribution OAMDistribution::from_weights(std::map<int, double> raw) {
  double total = 0.0;
  for (const auto& [ell, w] : raw) {
    if (!(w >= 0.0)) throw UndefinedDistributionError("OAM weight is negative or NaN");
    total += w;
  }
  if (!(total > 0.0)) throw UndefinedDistributionError("OAM weights sum to zero");
  OAMDistribution d;
  double m1 = 0.0;
  double m2 = 0.0;
  for (auto& [ell, w] : raw) {
    w /= total;
    m1 += ell * w;
    m2 += static_cast<double>(ell) * ell * w;
  }
  d.weights = std::move(raw);
  d.mean_Lz = m1;
  d.sigma_ell = std::sqrt(std::max(0.0, m2 - m1 * m1));
  return d;
}

OAMDistribution mode_amplitudes(const AzimuthalSpectrum& spec) {
  spec.validate();
  std::map<int, double> raw;
  for (int ell = spec.ell_min; ell <= spec.ell_max; ++ell)
    raw[ell] = parseval_mode_norm(spec, ell);
  return OAMDistribution::from_weights(std::move(raw));
}

OAMDistribution mode_amplitudes(const SpinorSpectrum& spec) {
  std::map<int, double> raw;
  for (const auto* s : {&spec.up, &spec.down}) {
    s->validate();
    for (int ell = s->ell_min; ell <= s->ell_max; ++ell)
      raw[ell] += parseval_mode_norm(*s, ell);
  }
  return OAMDistribution::from_weights(std::move(raw));
}

DepthCurves oam_vs_depth(const DivergenceProfile& profile, double C, double k_z,
                         std::span<const double> z, Spin incident) {
  if (profile.grid.size() == 0 || z.empty())
    throw DomainError("oam_vs_depth: empty profile or depth grid");
  profile.validate();

  SpinorSpectrum in{AzimuthalSpectrum::zeros(0, 0, profile.grid),
                    AzimuthalSpectrum::zeros(0, 0, profile.grid)};
  auto& occupied = incident == Spin::up ? in.up : in.down;
  for (std::size_t i = 0; i < profile.grid.size(); ++i)
    occupied.coeffs[0][i] = std::sqrt(profile.density[i]);

  DepthCurves out;
  out.incident = incident;
  out.converted_ell = incident == Spin::up ? 1 : -1;
  out.z.assign(z.begin(), z.end());
  for (double depth : z) {
    const auto t = transmit_spectrum(in, C, k_z, depth);
    const auto& same = incident == Spin::up ? t.up : t.down;
    const auto& flipped = incident == Spin::up ? t.down : t.up;
    const double a_conv = parseval_mode_norm(flipped, out.converted_ell);
    const double a_same = parseval_mode_norm(same, 0);
    const double total = total_norm(t.up) + total_norm(t.down);
    if (!(total > 0.0)) throw UndefinedDistributionError("oam_vs_depth: no transmitted weight");
    out.converted.push_back(a_conv / total);
    out.unconverted.push_back(a_same / total);
    out.total.push_back(total);
  }
  return out;
}

double envelope_contrast(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double s = *hi + *lo;
  return s > 0.0 ? (*hi - *lo) / s : 0.0;
}

} // namespace etwist
