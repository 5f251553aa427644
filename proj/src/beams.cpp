#include "etwist/beams.hpp"

#include "etwist/errors.hpp"
#include "etwist/units.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace etwist {

void BesselBeamSpec::validate() const {
  if (!(k_rho >= 0.0)) throw DomainError("BesselBeamSpec: k_rho must be >= 0");
  if (!(k_z > 0.0)) throw DomainError("BesselBeamSpec: k_z must be > 0");
}

BesselBeamSpec BesselBeamSpec::normalized() const {
  validate();
  const double n = std::sqrt(std::norm(b_plus) + std::norm(b_minus));
  if (!(n > 0.0)) throw DomainError("BesselBeamSpec: zero spinor");
  auto out = *this;
  out.b_plus /= n;
  out.b_minus /= n;
  return out;
}

void GaussianPacketSpec::validate() const {
  if (!(sigma_y > 0.0)) throw DomainError("GaussianPacketSpec: sigma_y must be > 0");
  if (!(R > 0.0)) throw DomainError("GaussianPacketSpec: R must be > 0");
}

cplx gaussian_spectral_amplitude(const GaussianPacketSpec& spec, double k_x,
                                 double k_y) {
  const double dy = (k_y - spec.k_y_mean) / spec.sigma_y;
  const double dx = k_x / (spec.R * spec.sigma_y);
  return std::exp(-dy * dy - dx * dx);
}

double gaussian_l2_norm(const GaussianPacketSpec& spec) {
  spec.validate();
  return kPi * spec.R * spec.sigma_y * spec.sigma_y / 2.0;
}

CollimatorGeometry CollimatorGeometry::two_pinholes(double radius,
                                                    double separation,
                                                    double k_z) {
  CollimatorGeometry g{CollimatorKind::two_pinholes, {0.0, radius}, {0.0, radius},
                       separation, k_z};
  g.validate();
  return g;
}

CollimatorGeometry CollimatorGeometry::exit_and_pinhole(double exit_radius,
                                                        double pinhole_radius,
                                                        double separation,
                                                        double k_z) {
  CollimatorGeometry g{CollimatorKind::exit_and_pinhole, {0.0, exit_radius},
                       {0.0, pinhole_radius}, separation, k_z};
  g.validate();
  return g;
}

CollimatorGeometry CollimatorGeometry::annulus_and_pinhole(double inner,
                                                           double outer,
                                                           double pinhole_radius,
                                                           double separation,
                                                           double k_z) {
  CollimatorGeometry g{CollimatorKind::annulus_and_pinhole, {inner, outer},
                       {0.0, pinhole_radius}, separation, k_z};
  g.validate();
  return g;
}

void CollimatorGeometry::validate() const {
  for (const auto& a : {first, second}) {
    if (!(a.outer > 0.0) || a.inner < 0.0)
      throw DomainError("CollimatorGeometry: aperture radii must be positive");
    if (!(a.inner < a.outer))
      throw DomainError("CollimatorGeometry: annulus inner radius must be < outer");
  }
  if (!(separation > 0.0)) throw DomainError("CollimatorGeometry: separation must be > 0");
  if (!(k_z > 0.0)) throw DomainError("CollimatorGeometry: k_z must be > 0");
}

double CollimatorGeometry::k_max() const {
  return k_z * (first.outer + second.outer) / separation;
}

double disk_overlap_area(double a, double b, double d) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  d = std::abs(d);
  if (d >= a + b) return 0.0;
  if (d <= std::abs(a - b)) {
    const double m = std::min(a, b);
    return kPi * m * m;
  }
  const double ca = std::clamp((d * d + a * a - b * b) / (2.0 * d * a), -1.0, 1.0);
  const double cb = std::clamp((d * d + b * b - a * a) / (2.0 * d * b), -1.0, 1.0);
  const double tri = (-d + a + b) * (d + a - b) * (d - a + b) * (d + a + b);
  return a * a * std::acos(ca) + b * b * std::acos(cb) -
         0.5 * std::sqrt(std::max(0.0, tri));
}

double aperture_overlap_area(const Aperture& p, const Aperture& q, double d) {
  return disk_overlap_area(p.outer, q.outer, d) - disk_overlap_area(p.inner, q.outer, d) -
         disk_overlap_area(p.outer, q.inner, d) + disk_overlap_area(p.inner, q.inner, d);
}

double DivergenceProfile::density_at(double k) const {
  if (!geometry) throw DomainError("DivergenceProfile: no analytic form");
  const auto& g = *geometry;
  if (k < 0.0) return 0.0;
  return aperture_overlap_area(g.first, g.second, g.separation * k / g.k_z) /
         normalization;
}

double DivergenceProfile::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    s += grid.weights()[i] * grid.nodes()[i] * density[i];
  return s;
}

namespace {

std::vector<double> kink_points(const CollimatorGeometry& geom) {
  const double to_k = geom.k_z / geom.separation;
  std::vector<double> bp{0.0};
  for (double a : {geom.first.inner, geom.first.outer})
    for (double b : {geom.second.inner, geom.second.outer}) {
      if (a <= 0.0 || b <= 0.0) continue;
      bp.push_back(std::abs(a - b) * to_k);
      bp.push_back((a + b) * to_k);
    }
  bp.push_back(geom.k_max());
  return bp;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

double DivergenceProfile::cdf(double k) const {
  if (k <= 0.0) return 0.0;
  if (!geometry) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size() && grid.nodes()[i] <= k; ++i)
      s += grid.weights()[i] * grid.nodes()[i] * density[i];
    return s;
  }
  // Same rule for the partial and the full integral, so cdf(k_max) is 1
  // exactly rather than to the quadrature error of the kinked density.
  const auto integral = [&](double upto) {
    auto bp = kink_points(*geometry);
    std::erase_if(bp, [&](double b) { return b >= upto; });
    bp.push_back(upto);
    if (bp.size() < 2) return 0.0;
    return RadialGrid::segmented(bp, 2, 16).integrate([&](double q) { return q * density_at(q); });
  };
  const double k_max = geometry->k_max();
  return k >= k_max ? 1.0 : integral(k) / integral(k_max);
}

std::vector<double> monte_carlo_cdf(const CollimatorGeometry& geom,
                                    std::span<const double> k, std::uint64_t rays,
                                    std::uint64_t seed) {
  geom.validate();
  if (rays == 0) throw DomainError("monte_carlo_cdf: need at least one ray");
  if (!std::is_sorted(k.begin(), k.end()))
    throw DomainError("monte_carlo_cdf: k must be sorted");
  constexpr std::size_t streams = 64;
  std::vector<std::vector<std::uint64_t>> counts(streams,
                                                 std::vector<std::uint64_t>(k.size() + 1));
  const auto point_in = [](const Aperture& a, std::mt19937_64& rng, double& x,
                           double& y) {
    // area-uniform radius in [inner, outer]
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r2 = a.inner * a.inner + u(rng) * (a.outer * a.outer - a.inner * a.inner);
    const double t = 2.0 * kPi * u(rng);
    x = std::sqrt(r2) * std::cos(t);
    y = std::sqrt(r2) * std::sin(t);
  };
  const auto work = [&](std::size_t s) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(s)));
    const std::uint64_t n = rays / streams + (s < rays % streams ? 1 : 0);
    auto& c = counts[s];
    for (std::uint64_t i = 0; i < n; ++i) {
      double x1, y1, x2, y2;
      point_in(geom.first, rng, x1, y1);
      point_in(geom.second, rng, x2, y2);
      const double kr = geom.k_z * std::hypot(x2 - x1, y2 - y1) / geom.separation;
      ++c[std::lower_bound(k.begin(), k.end(), kr) - k.begin()];
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t s = t; s < streams; s += threads) work(s);
    });
  for (auto& th : pool) th.join();
  std::vector<std::uint64_t> total(k.size() + 1, 0);
  for (const auto& c : counts)
    for (std::size_t i = 0; i < c.size(); ++i) total[i] += c[i];
  std::vector<double> out(k.size());
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    run += total[i];
    out[i] = static_cast<double>(run) / static_cast<double>(rays);
  }
  return out;
}

double DivergenceProfile::mean_k() const {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.nodes()[i];
    s += grid.weights()[i] * k * k * density[i];
  }
  return s / norm();
}

double DivergenceProfile::variance_k() const {
  const double m = mean_k();
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.nodes()[i];
    s += grid.weights()[i] * k * (k - m) * (k - m) * density[i];
  }
  return s / norm();
}

void DivergenceProfile::validate() const {
  if (grid.size() == 0 || density.size() != grid.size())
    throw DomainError("DivergenceProfile: empty profile");
  for (double v : density)
    if (!(v >= 0.0)) throw DomainError("DivergenceProfile: negative density");
  if (std::abs(norm() - 1.0) > 1e-10)
    throw DomainError("DivergenceProfile: not normalized");
}

DivergenceProfile DivergenceProfile::delta_ring(double k0) {
  if (!(k0 > 0.0)) throw DomainError("delta_ring: k0 must be > 0");
  DivergenceProfile p;
  p.grid = RadialGrid::explicit_nodes({k0}, {1.0});
  p.density = {1.0 / k0};
  return p;
}

DivergenceProfile divergence_profile(const CollimatorGeometry& geom,
                                     int panels_per_segment, int order) {
  geom.validate();
  if (panels_per_segment < 1) throw DomainError("divergence_profile: resolution must be >= 1");
  // kinks of the overlap function sit at d = |a - b| and a + b for every
  // pair of circle radii
  const auto bp = kink_points(geom);
  auto grid = RadialGrid::segmented(bp, panels_per_segment, order);

  DivergenceProfile p;
  p.geometry = geom;
  p.normalization = 1.0;
  p.density.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p.density[i] = p.density_at(grid.nodes()[i]);
  p.grid = std::move(grid);
  p.normalization = p.norm();
  for (auto& v : p.density) v /= p.normalization;
  return p;
}

SpinorSpectrum bessel_spectrum(const BesselBeamSpec& spec, double width,
                               int panels, int order) {
  spec.validate();
  if (!(width > 0.0)) throw DomainError("bessel_spectrum: width must be > 0");
  const double lo = std::max(0.0, spec.k_rho - 8.0 * width);
  const double hi = spec.k_rho + 8.0 * width;
  auto grid = RadialGrid::uniform_panels(lo, hi, panels, order);
  std::vector<double> ring(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = (grid.nodes()[i] - spec.k_rho) / width;
    ring[i] = std::exp(-0.5 * u * u);
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    mass += grid.weights()[i] * grid.nodes()[i] * ring[i];
  SpinorSpectrum s{AzimuthalSpectrum::zeros(0, 0, grid), AzimuthalSpectrum::zeros(0, 0, grid)};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s.up.coeffs[0][i] = spec.b_plus * ring[i] / mass;
    s.down.coeffs[0][i] = spec.b_minus * ring[i] / mass;
  }
  return s;
}

} // namespace etwist
