#include "etwist/errors.hpp"
#include "etwist/transforms.hpp"
#include "etwist/transverse.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace etwist;

namespace {

const cplx I{0.0, 1.0};

SpectralPacket random_packet(int n, double half, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  SpectralPacket p;
  p.grid = CartesianGrid::centered(0.0, half, n, 0.0, half, n);
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    p.up.emplace_back(g(rng), g(rng));
    p.down.emplace_back(g(rng), g(rng));
  }
  return p;
}

// (k_x, k_y) -> (-k_y, k_x) on a square grid symmetric about 0, with the spin
// phases of a rotation by pi/2 about z.
SpectralPacket rotate_quarter(const SpectralPacket& p) {
  const int n = p.grid.nx;
  auto q = p;
  const cplx up = std::exp(-I * (oracle::pi / 4)), down = std::exp(I * (oracle::pi / 4));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // q(k) = D p(R^{-1} k), R^{-1}(x, y) = (y, -x)
      const std::size_t src = static_cast<std::size_t>(n - 1 - i) * n + j;
      q.up[j * n + i] = up * p.up[src];
      q.down[j * n + i] = down * p.down[src];
    }
  return q;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

TEST_CASE("transverse evolution of single points") {
  const double C = 0.3;
  const Spinor a{{0.3, -0.2}, {0.7, 0.1}};
  const auto id = evolve_point(a, 0.4, -0.9, C, 0.0);
  CHECK(std::abs(id.up - a.up) < 1e-15);
  CHECK(std::abs(id.down - a.down) < 1e-15);

  // quarter period: complete transfer with e^{-i phi}
  const double kr = 0.8;
  for (double phi : {0.0, 0.9, 2.5, 4.4}) {
    const double t = oracle::pi / 2 / (C * kr);
    const auto s = evolve_point({0.0, 1.0}, kr * std::cos(phi), kr * std::sin(phi), C, t);
    CHECK(std::abs(s.down) < 1e-15);
    CHECK(std::abs(s.up - std::exp(I * kr * kr * t) * std::exp(-I * phi)) < 1e-13);
  }

  // period pi / (C k_r) up to a global phase
  const double kx = 0.5, ky = 0.6, k = std::hypot(kx, ky);
  for (double t : {0.0, 1.3, 7.0}) {
    const auto s0 = evolve_point(a, kx, ky, C, t);
    const auto s1 = evolve_point(a, kx, ky, C, t + oracle::pi / (C * k));
    const cplx ratio = s1.up / s0.up;
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);
    CHECK(std::abs(s1.down - ratio * s0.down) < 1e-12);
  }

  // first-order behaviour: finite difference against the generator
  const double phi = std::atan2(ky, kx);
  const cplx d_up = I * k * k * a.up + C * k * std::exp(-I * phi) * a.down;
  const cplx d_down = I * k * k * a.down - C * k * std::exp(I * phi) * a.up;
  double prev = 1.0;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const auto s = evolve_point(a, kx, ky, C, h);
    const double err = std::max(std::abs((s.up - a.up) / h - d_up), std::abs((s.down - a.down) / h - d_down));
    CHECK(err < prev);
    CHECK(err < 2.0 * h);
    prev = err;
  }
}

TEST_CASE("packet evolution conserves norm and commutes with rotations") {
  const auto p = random_packet(33, 2.0, 5);
  for (double t : {0.5, 3.0, 40.0}) {
    const auto e = evolve(p, 0.7, t);
    CHECK(std::abs(e.norm2() - p.norm2()) <= 1e-12 * p.norm2());
    const auto lhs = evolve(rotate_quarter(p), 0.7, t);
    const auto rhs = rotate_quarter(e);
    CHECK(max_diff(lhs.up, rhs.up) < 1e-12);
    CHECK(max_diff(lhs.down, rhs.down) < 1e-12);
  }
  const auto same = evolve(p, 0.7, 0.0);
  CHECK(max_diff(same.up, p.up) == 0.0);
  CHECK_THROWS_AS(evolve(p, 0.7, -1.0), DomainError);
}

TEST_CASE("ideal raising") {
  const auto grid = RadialGrid::uniform_panels(0.0, 1.0, 2, 4);
  auto s = AzimuthalSpectrum::zeros(0, 0, grid);
  for (auto& v : s.mode(0)) v = 1.0;
  const auto r = ideal_raise(s);
  CHECK(r.ell_min == 1);
  CHECK(mode_amplitudes(r).weight(1) == doctest::Approx(1.0));

  const GaussianPacketSpec g{1.0, 0.3, 1.3};
  const auto base = gaussian_azimuthal_spectrum(g);
  const auto d0 = mode_amplitudes(base), d1 = mode_amplitudes(ideal_raise(base));
  CHECK(d1.mean_Lz - d0.mean_Lz == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d1.sigma_ell == doctest::Approx(d0.sigma_ell).epsilon(1e-12));
  const auto back = ideal_raise(ideal_lower(base));
  CHECK(back.ell_min == base.ell_min);
  CHECK(back.ell_max == base.ell_max);
  CHECK(back.coeffs == base.coeffs);

  // Cartesian raising multiplies by e^{i phi}
  const auto p = random_packet(9, 1.0, 1);
  const auto q = ideal_raise(p);
  const auto idx = static_cast<std::size_t>(2) * 9 + 7;
  const double kx = p.grid.x(7), ky = p.grid.y(2);
  CHECK(std::abs(q.up[idx] - p.up[idx] * cplx(kx, ky) / std::hypot(kx, ky)) < 1e-15);
}

TEST_CASE("fig3 surfaces: trends and spot value") {
  std::vector<double> sy, R;
  for (int i = 0; i < 9; ++i) sy.push_back(0.1 + 0.05 * i);
  for (int i = 0; i < 5; ++i) R.push_back(0.5 + 0.25 * i);
  for (auto model : {TwistModel::ideal, TwistModel::exact}) {
    Fig3Options o;
    o.model = model;
    const auto s = fig3_surfaces(sy, R, 1.0, o);
    for (std::size_t i = 0; i < sy.size(); ++i)
      for (std::size_t j = 0; j < R.size(); ++j) {
        if (i + 1 < sy.size()) {
          CHECK(s.a1(i + 1, j) > s.a1(i, j));
          CHECK(s.bandwidth(i + 1, j) < s.bandwidth(i, j));
        }
        if (j + 1 < R.size()) {
          CHECK(s.a1(i, j + 1) > s.a1(i, j));
          CHECK(s.bandwidth(i, j + 1) < s.bandwidth(i, j));
        }
      }
  }
  // A^1 of the raised packet is A^0 of the original
  const double sigma = std::sqrt(0.1);
  const auto w = oracle::gaussian_mode_weights(1.0, sigma, 1.0, 45);
  double total = 0.0;
  for (double v : w) total += v;
  const auto d = twisted_gaussian_distribution({1.0, sigma, 1.0});
  CHECK(std::abs(d.weight(1) - w[45] / total) < 1e-8);
  CHECK_THROWS_AS(fig3_surfaces({}, R), DomainError);
}

TEST_CASE("real-space synthesis of Gaussian packets") {
  const GaussianPacketSpec g{1.0, std::sqrt(0.1), 1.0};
  const auto packet = gaussian_packet(g, gaussian_k_grid(g, 129), Spin::up);
  const auto target = CartesianGrid::centered(0.0, 12.0, 61, 0.0, 12.0, 61);
  const auto flat = synthesize_real_space(packet, target, false);
  const auto raised = synthesize_real_space(packet, target, true);

  // unraised: envelope peaked at the origin, carrier e^{i k_y' y}
  const std::size_t centre = 30 * 61 + 30;
  double peak = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < flat.up.size(); ++i)
    if (std::abs(flat.up[i]) > peak) peak = std::abs(flat.up[i]), arg = i;
  CHECK(arg == centre);
  const auto c0 = field_centroid(flat);
  CHECK(std::abs(c0.x) < 1e-8);
  CHECK(std::abs(c0.y) < 1e-8);
  for (double y : {0.5, 1.5, 2.5}) {
    const auto v = synthesize_point(packet, false, 0.0, y);
    CHECK(std::abs(std::arg(v.up) - y) < 1e-8);
  }
  CHECK(synthesize_point(packet, false, 0.0, oracle::pi).up.real() < 0.0);

  // the point synthesis agrees with the grid synthesis
  const auto v = synthesize_point(packet, true, target.x(40), target.y(35));
  CHECK(std::abs(v.up - raised.up[35 * 61 + 40]) < 1e-12);

  // raised: displaced along x by about 1 / k_y', carrier shifted by pi / 2
  const auto c1 = field_centroid(raised);
  CHECK(c1.x > 0.8);
  CHECK(c1.x < 1.2);
  CHECK(std::abs(c1.y) < 1e-6);
  const double shift = std::arg(synthesize_point(packet, true, c1.x, 0.0).up) -
                       std::arg(synthesize_point(packet, false, 0.0, 0.0).up);
  CHECK(std::abs(shift - oracle::pi / 2) < 0.05 * oracle::pi / 2);

  // resolution guard
  CHECK_THROWS_AS(synthesize_real_space(packet, CartesianGrid::centered(0, 12, 5, 0, 12, 5), false),
                  ResolutionError);
  CHECK_THROWS_AS(synthesize_real_space(packet, CartesianGrid::centered(0, 400, 4001, 0, 12, 61), false),
                  ResolutionError);
}

TEST_CASE("vortex core of a raised single ring") {
  // isotropic thin ring on a symmetric Cartesian grid
  SpectralPacket ring;
  ring.grid = CartesianGrid::centered(0.0, 1.5, 101, 0.0, 1.5, 101);
  for (int j = 0; j < 101; ++j)
    for (int i = 0; i < 101; ++i) {
      const double k = std::hypot(ring.grid.x(i), ring.grid.y(j));
      ring.up.push_back(std::exp(-std::pow((k - 1.0) / 0.05, 2)));
      ring.down.push_back(0.0);
    }
  const auto core = synthesize_point(ring, true, 0.0, 0.0);
  const auto flat = synthesize_point(ring, false, 0.0, 0.0);
  CHECK(std::abs(flat.up) > 0.05);
  CHECK(std::abs(core.up) < 1e-13 * std::abs(flat.up));

  // same statement on the l = 1 delta ring: J_1(0) = 0
  auto s = AzimuthalSpectrum::zeros(1, 1, RadialGrid::explicit_nodes({1.0}, {1.0}));
  s.mode(1)[0] = 1.0;
  const auto f = hankel_synthesize(s, PolarGrid{RadialGrid::explicit_nodes({0.0, 0.5}, {1.0, 1.0}), 8});
  for (int j = 0; j < 8; ++j) CHECK(std::abs(f.at(0, j)) == 0.0);
  CHECK(std::abs(f.at(1, 0)) == doctest::Approx(oracle::bessel_j(1, 0.5)));
}
