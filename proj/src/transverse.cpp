#include "etwist/transverse.hpp"

#include "etwist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace etwist {

namespace {

constexpr cplx I{0.0, 1.0};

// e^{i phi} of the in-plane wavevector; zero at the origin.
cplx azimuth_phase(double k_x, double k_y) {
  const double k = std::hypot(k_x, k_y);
  return k > 0.0 ? cplx{k_x / k, k_y / k} : cplx{};
}

} // namespace

CartesianGrid CartesianGrid::centered(double cx, double half_x, int nx, double cy,
                                      double half_y, int ny) {
  CartesianGrid g{cx - half_x, cx + half_x, nx, cy - half_y, cy + half_y, ny};
  g.validate();
  return g;
}

void CartesianGrid::validate() const {
  if (nx < 2 || ny < 2 || !(x_max > x_min) || !(y_max > y_min))
    throw DomainError("CartesianGrid: need >= 2 samples and positive extent per axis");
}

double SpectralPacket::norm2() const {
  double s = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i) s += std::norm(up[i]) + std::norm(down[i]);
  return s * grid.dx() * grid.dy();
}

void SpectralPacket::validate() const {
  grid.validate();
  if (up.size() != grid.size() || down.size() != grid.size())
    throw DomainError("SpectralPacket: component size does not match grid");
}

SpectralPacket gaussian_packet(const GaussianPacketSpec& spec,
                               const CartesianGrid& k_grid, Spin spin) {
  spec.validate();
  k_grid.validate();
  SpectralPacket p;
  p.grid = k_grid;
  p.source = spec;
  p.up.assign(k_grid.size(), 0.0);
  p.down.assign(k_grid.size(), 0.0);
  auto& occupied = spin == Spin::up ? p.up : p.down;
  for (int j = 0; j < k_grid.ny; ++j)
    for (int i = 0; i < k_grid.nx; ++i)
      occupied[j * k_grid.nx + i] = gaussian_spectral_amplitude(spec, k_grid.x(i), k_grid.y(j));
  return p;
}

CartesianGrid gaussian_k_grid(const GaussianPacketSpec& spec, int n, double sigmas) {
  spec.validate();
  return CartesianGrid::centered(0.0, sigmas * spec.R * spec.sigma_y, n, spec.k_y_mean,
                                 sigmas * spec.sigma_y, n);
}

Spinor evolve_point(const Spinor& a, double k_x, double k_y, double C, double t) {
  const double k_r = std::hypot(k_x, k_y);
  const double eps = k_r * k_r;
  const double c = std::cos(C * k_r * t);
  const double s = std::sin(C * k_r * t);
  const cplx e = azimuth_phase(k_x, k_y);
  const cplx global = std::polar(1.0, eps * t);
  return {global * (a.up * c + a.down * s * std::conj(e)),
          global * (a.down * c - a.up * s * e)};
}

SpectralPacket evolve(const SpectralPacket& packet, double C, double t) {
  packet.validate();
  if (!(t >= 0.0)) throw DomainError("evolve: t must be >= 0");
  auto out = packet;
  const auto& g = packet.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
      const auto s = evolve_point({packet.up[idx], packet.down[idx]}, g.x(i), g.y(j), C, t);
      out.up[idx] = s.up;
      out.down[idx] = s.down;
    }
  return out;
}

AzimuthalSpectrum ideal_raise(const AzimuthalSpectrum& spec) {
  auto out = spec;
  ++out.ell_min;
  ++out.ell_max;
  return out;
}

AzimuthalSpectrum ideal_lower(const AzimuthalSpectrum& spec) {
  auto out = spec;
  --out.ell_min;
  --out.ell_max;
  return out;
}

SpectralPacket ideal_raise(const SpectralPacket& packet) {
  packet.validate();
  auto out = packet;
  const auto& g = packet.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
      const cplx e = azimuth_phase(g.x(i), g.y(j));
      out.up[idx] *= e;
      out.down[idx] *= e;
    }
  return out;
}

namespace {

template <class Sampler>
AzimuthalSpectrum decompose_gaussian(const GaussianPacketSpec& spec,
                                     const GaussianSpectrumOptions& opts,
                                     Sampler&& sample) {
  spec.validate();
  const double narrow = spec.sigma_y * std::min(1.0, spec.R);
  const double wide = spec.sigma_y * std::max(1.0, spec.R);
  const double centre = std::abs(spec.k_y_mean);
  const double lo = std::max(0.0, centre - opts.extent * wide);
  const double hi = centre + opts.extent * wide;
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (opts.panel_width * narrow))));
  const auto radial = RadialGrid::uniform_panels(lo, hi, panels, opts.order);

  for (int n_phi = opts.min_phi_samples; n_phi <= opts.max_phi_samples; n_phi *= 2) {
    const auto samples = PolarSamples::sample(radial, n_phi, sample);
    try {
      auto spec_l = azimuthal_decompose_auto(samples, opts.tail_tolerance, 0);
      // keep the window inside the lower half of the band so aliased
      // images of the tail stay below tolerance as well
      if (spec_l.max_abs_ell() <= n_phi / 4) return spec_l;
    } catch (const AliasingError&) {
    }
  }
  throw AliasingError("gaussian_azimuthal_spectrum: azimuthal sampling exhausted at " +
                      std::to_string(opts.max_phi_samples) + " samples");
}

} // namespace

AzimuthalSpectrum gaussian_azimuthal_spectrum(const GaussianPacketSpec& spec,
                                              const GaussianSpectrumOptions& opts) {
  return decompose_gaussian(spec, opts, [&](double k, double phi) {
    return gaussian_spectral_amplitude(spec, k * std::cos(phi), k * std::sin(phi));
  });
}

OAMDistribution twisted_gaussian_distribution(const GaussianPacketSpec& spec,
                                              const Fig3Options& opts) {
  if (opts.model == TwistModel::ideal)
    return mode_amplitudes(ideal_raise(gaussian_azimuthal_spectrum(spec, opts.spectrum)));

  // Exact evolution of a spin-up packet; the flipped (spin-down) component
  // carries the raised OAM. Only C t matters: C t k_y' = rotation.
  if (spec.k_y_mean == 0.0) throw DomainError("exact twist model needs k_y' != 0");
  const double ct = opts.rotation / std::abs(spec.k_y_mean);
  const auto flipped = decompose_gaussian(spec, opts.spectrum, [&](double k, double phi) {
    const double kx = k * std::cos(phi);
    const double ky = k * std::sin(phi);
    return evolve_point({gaussian_spectral_amplitude(spec, kx, ky), 0.0}, kx, ky, ct, 1.0).down;
  });
  return mode_amplitudes(flipped);
}

Fig3Surfaces fig3_surfaces(std::span<const double> sigma_y, std::span<const double> R,
                           double k_y_mean, const Fig3Options& opts) {
  if (sigma_y.empty() || R.empty()) throw DomainError("fig3_surfaces: empty parameter range");
  Fig3Surfaces s;
  s.sigma_y.assign(sigma_y.begin(), sigma_y.end());
  s.R.assign(R.begin(), R.end());
  for (double sy : sigma_y)
    for (double r : R) {
      const auto d = twisted_gaussian_distribution({k_y_mean, sy, r}, opts);
      s.A1.push_back(d.weight(1));
      s.sigma_ell.push_back(d.sigma_ell);
    }
  return s;
}

namespace {

void check_synthesis_grid(const CartesianGrid& k, const CartesianGrid& target) {
  const double kx = std::max(std::abs(k.x_min), std::abs(k.x_max));
  const double ky = std::max(std::abs(k.y_min), std::abs(k.y_max));
  if (target.dx() * kx > kPi / 2.0 || target.dy() * ky > kPi / 2.0)
    throw ResolutionError("synthesize_real_space: target spacing too coarse for k_max");
  if (target.x_max - target.x_min >= 2.0 * kPi / k.dx() ||
      target.y_max - target.y_min >= 2.0 * kPi / k.dy())
    throw ResolutionError("synthesize_real_space: target extent exceeds the k-grid period");
}

} // namespace

CartesianField synthesize_real_space(const SpectralPacket& packet,
                                     const CartesianGrid& target, bool raised) {
  packet.validate();
  target.validate();
  check_synthesis_grid(packet.grid, target);
  const auto src = raised ? ideal_raise(packet) : packet;
  const auto& k = src.grid;

  std::vector<cplx> ex(static_cast<std::size_t>(target.nx) * k.nx);
  for (int a = 0; a < target.nx; ++a)
    for (int i = 0; i < k.nx; ++i) ex[a * k.nx + i] = std::polar(1.0, k.x(i) * target.x(a));
  std::vector<cplx> ey(static_cast<std::size_t>(target.ny) * k.ny);
  for (int b = 0; b < target.ny; ++b)
    for (int j = 0; j < k.ny; ++j) ey[b * k.ny + j] = std::polar(1.0, k.y(j) * target.y(b));

  const double scale = k.dx() * k.dy() / (2.0 * kPi);
  auto transform = [&](const std::vector<cplx>& a) {
    // partial[j][x_a] = sum_i a[j][i] e^{i kx_i x_a}
    std::vector<cplx> partial(static_cast<std::size_t>(k.ny) * target.nx);
    for (int j = 0; j < k.ny; ++j)
      for (int xa = 0; xa < target.nx; ++xa) {
        cplx acc = 0.0;
        for (int i = 0; i < k.nx; ++i) acc += a[j * k.nx + i] * ex[xa * k.nx + i];
        partial[j * target.nx + xa] = acc;
      }
    std::vector<cplx> out(target.size());
    for (int yb = 0; yb < target.ny; ++yb)
      for (int xa = 0; xa < target.nx; ++xa) {
        cplx acc = 0.0;
        for (int j = 0; j < k.ny; ++j) acc += ey[yb * k.ny + j] * partial[j * target.nx + xa];
        out[yb * target.nx + xa] = scale * acc;
      }
    return out;
  };

  CartesianField f;
  f.grid = target;
  f.up = transform(src.up);
  f.down = transform(src.down);
  return f;
}

Spinor synthesize_point(const SpectralPacket& packet, bool raised, double x, double y) {
  packet.validate();
  const auto& g = packet.grid;
  Spinor s{};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
      cplx e = std::polar(1.0, g.x(i) * x + g.y(j) * y);
      if (raised) e *= azimuth_phase(g.x(i), g.y(j));
      s.up += packet.up[idx] * e;
      s.down += packet.down[idx] * e;
    }
  const double scale = g.dx() * g.dy() / (2.0 * kPi);
  return {s.up * scale, s.down * scale};
}

Centroid field_centroid(const CartesianField& field) {
  const auto& g = field.grid;
  double w = 0.0, sx = 0.0, sy = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
      const double m = std::norm(field.up[idx]) + std::norm(field.down[idx]);
      w += m;
      sx += m * g.x(i);
      sy += m * g.y(j);
    }
  if (!(w > 0.0)) throw UndefinedDistributionError("field_centroid: zero field");
  return {sx / w, sy / w};
}

} // namespace etwist
