#include "etwist/errors.hpp"
#include "etwist/scattering.hpp"
#include "etwist/transverse.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace etwist;

namespace {

double rel(cplx a, cplx b, double scale) { return std::abs(a - b) / scale; }

struct RandomMode {
  SpectralMode mode;
  double C;
};

// Random modes covering propagating and evanescent channels, both signs of C.
RandomMode random_mode(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double k_z = 0.05 + 3.0 * u(rng);
  const double k_r = 4.0 * u(rng);
  const double phi = 2.0 * kPi * u(rng);
  double C = (u(rng) - 0.5) * 6.0;
  if (u(rng) < 0.3) C *= 3.0 * k_z * k_z / std::max(k_r, 1e-3); // push into evanescence
  const cplx fp(u(rng) - 0.5, u(rng) - 0.5), fm(u(rng) - 0.5, u(rng) - 0.5);
  return {SpectralMode::make(k_z, k_r, phi, fp, fm), C};
}

} // namespace

TEST_CASE("longitudinal wavenumbers") {
  const auto k = longitudinal_wavenumbers(1.01, 0.1, 0.1);
  CHECK(k.k_plus.real() == doctest::Approx(std::sqrt(1.01)).epsilon(1e-15));
  CHECK(k.k_minus.real() == doctest::Approx(std::sqrt(0.99)).epsilon(1e-15));
  CHECK(k.k_plus.real() == doctest::Approx(1.004987).epsilon(1e-6));
  CHECK(k.k_minus.real() == doctest::Approx(0.994987).epsilon(1e-6));
  CHECK(k.k_plus.imag() == 0.0);

  const auto d = longitudinal_wavenumbers(2.0, 0.7, 0.0);
  CHECK(d.k_plus == d.k_minus);
  CHECK(d.k_plus.real() == doctest::Approx(std::sqrt(2.0 - 0.49)));

  const auto e = longitudinal_wavenumbers(0.0101, 0.1, 0.5);
  CHECK(e.k_minus.real() == 0.0);
  CHECK(e.k_minus.imag() < 0.0);
  CHECK(e.k_minus.imag() == doctest::Approx(-std::sqrt(0.05 - 0.0001)));
}

TEST_CASE("branch rule holds and transmitted intensities never grow") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto [m, C] = random_mode(rng);
    const auto k = longitudinal_wavenumbers(m.eps, m.k_r, C);
    for (cplx q : {k.k_plus, k.k_minus}) {
      const bool propagating = q.real() > 0.0 && q.imag() == 0.0;
      const bool evanescent = q.real() == 0.0 && q.imag() <= 0.0;
      CHECK((propagating || evanescent));
      CHECK(std::norm(std::exp(-oracle::I * q * 2.0)) <= std::norm(std::exp(-oracle::I * q * 1.0)) + 1e-15);
    }
    // squared wavenumbers reproduce the radicands
    CHECK(std::abs(k.k_plus * k.k_plus - (m.eps - m.k_r * m.k_r + C * m.k_r)) < 1e-12 * (1 + m.eps));
    CHECK(std::abs(k.k_minus * k.k_minus - (m.eps - m.k_r * m.k_r - C * m.k_r)) < 1e-12 * (1 + m.eps));
  }
}

TEST_CASE("spectral mode construction") {
  const auto m = SpectralMode::make(1.0, 0.1, -0.5, 0.0, 1.0);
  CHECK(m.eps == doctest::Approx(1.01).epsilon(1e-16));
  CHECK(m.phi >= 0.0);
  CHECK(m.phi < 2.0 * kPi);
  CHECK(m.phi == doctest::Approx(2.0 * kPi - 0.5));
  CHECK_THROWS_AS(SpectralMode::make(0.0, 0.1, 0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(SpectralMode::make(1.0, -0.1, 0.0, 0.0, 1.0), DomainError);
}

TEST_CASE("closed-form coefficients agree with a direct 4x4 solve") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto [m, C] = random_mode(rng);
    const auto c = scatter_mode(m, C);
    const auto o = oracle::solve_interface(m.k_z, m.k_r, m.phi, C, m.f_plus, m.f_minus);
    const double scale = std::abs(m.f_plus) + std::abs(m.f_minus);
    worst = std::max({worst, rel(c.t2, o.t2, scale), rel(c.t4, o.t4, scale),
                      rel(c.r_plus, o.r_plus, scale), rel(c.r_minus, o.r_minus, scale)});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("no coupling means no interface") {
  const auto m = SpectralMode::make(0.8, 0.3, 1.1, cplx(0.3, -0.2), cplx(-0.1, 0.7));
  const auto c = scatter_mode(m, 0.0);
  CHECK(std::abs(c.r_plus) < 1e-16);
  CHECK(std::abs(c.r_minus) < 1e-16);
  const auto psi0 = transmitted_spinor(c, m.phi, 0.0);
  CHECK(std::abs(psi0.up - m.f_plus) < 1e-15);
  CHECK(std::abs(psi0.down - m.f_minus) < 1e-15);
  for (double z : {1.0, 10.0, 123.4}) {
    const auto psi = transmitted_spinor(c, m.phi, z);
    CHECK(std::abs(psi.up) == doctest::Approx(std::abs(m.f_plus)).epsilon(1e-13));
    CHECK(std::abs(psi.down) == doctest::Approx(std::abs(m.f_minus)).epsilon(1e-13));
    CHECK(std::abs(psi.up - m.f_plus * std::exp(-oracle::I * m.k_z * z)) < 1e-13);
  }
}

TEST_CASE("flux identity") {
  const auto m = SpectralMode::make(1.0, 0.1, 0.0, 0.0, 1.0);
  CHECK(m.eps == doctest::Approx(1.01));
  const auto c = scatter_mode(m, 0.1);
  const double lhs = m.k_z;
  const double rhs = m.k_z * (std::norm(c.r_plus) + std::norm(c.r_minus)) +
                     2.0 * c.k_plus.real() * std::norm(c.t2) +
                     2.0 * c.k_minus.real() * std::norm(c.t4);
  CHECK(std::abs(lhs - rhs) < 1e-12);
  CHECK(std::abs(flux_budget(m, c).imbalance()) < 1e-12);

  std::mt19937_64 rng(5);
  int evanescent = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto [mm, C] = random_mode(rng);
    const auto cc = scatter_mode(mm, C);
    const auto b = flux_budget(mm, cc);
    CHECK(std::abs(b.imbalance()) <= 1e-12 * b.incident);
    if (cc.k_minus.real() == 0.0 || cc.k_plus.real() == 0.0) {
      ++evanescent;
      CHECK((cc.k_minus.real() != 0.0 || b.transmitted_minus == 0.0));
      CHECK((cc.k_plus.real() != 0.0 || b.transmitted_plus == 0.0));
    }
  }
  CHECK(evanescent > 100);
}

TEST_CASE("continuity of the field and its derivative at the interface") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto [m, C] = random_mode(rng);
    const auto c = scatter_mode(m, C);
    const auto psi = transmitted_spinor(c, m.phi, 0.0);
    const auto dpsi = transmitted_spinor_dz(c, m.phi, 0.0);
    const double s = std::abs(m.f_plus) + std::abs(m.f_minus);
    CHECK(std::abs(psi.up - (m.f_plus + c.r_plus)) < 1e-12 * s);
    CHECK(std::abs(psi.down - (m.f_minus + c.r_minus)) < 1e-12 * s);
    CHECK(std::abs(dpsi.up - oracle::I * m.k_z * (c.r_plus - m.f_plus)) < 1e-12 * s * (1 + m.k_z));
    CHECK(std::abs(dpsi.down - oracle::I * m.k_z * (c.r_minus - m.f_minus)) <
          1e-12 * s * (1 + m.k_z));
  }
}

TEST_CASE("spin flip carries e^{-i phi}") {
  for (double phi : {0.3, 1.7, 4.0}) {
    const auto m0 = SpectralMode::make(1.0, 0.2, 0.0, 0.0, 1.0);
    const auto m1 = SpectralMode::make(1.0, 0.2, phi, 0.0, 1.0);
    const auto a = transmitted_spinor(scatter_mode(m0, 0.1), m0.phi, 7.0);
    const auto b = transmitted_spinor(scatter_mode(m1, 0.1), m1.phi, 7.0);
    CHECK(std::abs(b.up - a.up * std::exp(-oracle::I * phi)) < 1e-14);
    CHECK(std::abs(b.down - a.down) < 1e-14);
  }
}

TEST_CASE("grazing reflection") {
  const auto ctx = PhysicsContext::neutron();
  const auto zero = reflection_probability(ctx, deg_to_rad(0.001), 2e-10, 0.0, Spin::down);
  CHECK(zero.spin_flip == 0.0);
  CHECK(zero.non_flip == 0.0);
  CHECK_THROWS_AS(reflection_probability(ctx, 0.0, 2e-10, 1e10, Spin::down), DomainError);
  CHECK_THROWS_AS(reflection_probability(ctx, 1.6, 2e-10, 1e10, Spin::down), DomainError);
  CHECK_THROWS_AS(reflection_probability(ctx, 0.01, 0.0, 1e10, Spin::down), DomainError);

  std::vector<double> theta;
  for (int i = 0; i <= 300; ++i) theta.push_back(deg_to_rad(1e-5 * std::pow(1e3, i / 300.0)));
  const auto scan = reflection_scan(ctx, theta, 2e-10, 1e10, Spin::down);
  const double peak = rad_to_deg(scan.theta[scan.peak_index]);
  CHECK(peak >= 0.0005);
  CHECK(peak <= 0.002);

  // up and down incidence are mirror images
  const auto u = reflection_probability(ctx, deg_to_rad(0.002), 2e-10, 1e10, Spin::up);
  const auto d = reflection_probability(ctx, deg_to_rad(0.002), 2e-10, 1e10, Spin::down);
  CHECK(u.spin_flip == doctest::Approx(d.spin_flip).epsilon(1e-12));
  CHECK(u.non_flip == doctest::Approx(d.non_flip).epsilon(1e-12));
}

TEST_CASE("evanescent branch below the critical angle carries no flux") {
  const auto ctx = PhysicsContext::neutron();
  const double lambda = 2e-10, E = 1e10;
  const double k = 2 * kPi / lambda;
  const double C = std::abs(coupling_constant(ctx, E).value);
  const double theta = 0.2 * std::sqrt(C / k); // k_z^2 << C k_r
  const double k_z = k * std::sin(theta), k_r = k * std::cos(theta);
  CHECK(k_z * k_z - C * k_r < 0.0);
  const auto m = SpectralMode::make(k_z, k_r, 0.0, 0.0, 1.0);
  const auto c = scatter_mode(m, C);
  CHECK(c.k_minus.real() == 0.0);
  const auto b = flux_budget(m, c);
  CHECK(b.transmitted_minus == 0.0);
  CHECK(std::abs(b.imbalance()) < 1e-12 * b.incident);
  const auto p = reflection_probability(ctx, theta, lambda, E, Spin::down);
  CHECK(p.spin_flip + p.non_flip + b.transmitted_plus / b.incident == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Bessel beam closed form") {
  const BesselBeamSpec beam{0.3, 1.2, cplx(0.6, 0.1), cplx(-0.2, 0.7)};
  for (double z : {0.0, 5.0, 40.0}) {
    const auto t = bessel_beam_transmission(beam, 0.0, z);
    CHECK(std::abs(t.psi1_plus) < 1e-16);
    CHECK(std::abs(t.psi1_minus) < 1e-16);
  }

  // pipeline: every mode of the ring through the interface, then l-expansion synthesis
  const double C = 0.25;
  for (double z : {0.0, 3.0, 17.5}) {
    const auto t = bessel_beam_transmission(beam, C, z);
    const int n = 64;
    std::vector<cplx> up(n), down(n);
    for (int j = 0; j < n; ++j) {
      const double phi = 2 * kPi * j / n;
      const auto m = SpectralMode::make(beam.k_z, beam.k_rho, phi, beam.b_plus, beam.b_minus);
      const auto s = transmitted_spinor(scatter_mode(m, C), phi, z);
      up[j] = s.up;
      down[j] = s.down;
    }
    for (double r : {0.0, 1.0, 4.5})
      for (double th : {0.0, 0.9, 3.3}) {
        Spinor ref{0.0, 0.0};
        for (int ell = -3; ell <= 3; ++ell) {
          cplx cu = 0.0, cd = 0.0;
          for (int j = 0; j < n; ++j) {
            const auto e = std::exp(-oracle::I * double(ell) * (2 * kPi * j / n)) / double(n);
            cu += up[j] * e;
            cd += down[j] * e;
          }
          const cplx w = std::pow(oracle::I, -ell) * std::exp(oracle::I * double(ell) * th) *
                         oracle::bessel_j(ell, beam.k_rho * r);
          ref.up += w * cu;
          ref.down += w * cd;
        }
        const auto got = t.at(r, th);
        CHECK(std::abs(got.up - ref.up) < 1e-10);
        CHECK(std::abs(got.down - ref.down) < 1e-10);
      }
  }
}

TEST_CASE("linearized Bessel transmission") {
  const auto ctx = PhysicsContext::neutron();
  const BesselBeamSpec beam{0.0, 1.0, 1.0, 0.0};
  const auto id = linearized_bessel_transmission(beam, ctx, 1e8, 0.01, 0.0);
  CHECK(std::abs(id.psi0_plus - 1.0) < 1e-15);
  CHECK(std::abs(id.psi1_minus) < 1e-15);

  // field integral of one full twist transfers everything into the J_1 term
  const double alpha = deg_to_rad(1.0);
  const double V = full_twist_voltage(ctx, alpha);
  const double E = 1e10;
  const auto full = linearized_bessel_transmission(beam, ctx, E, alpha, V / E);
  CHECK(std::abs(full.psi0_plus) < 1e-9);
  CHECK(std::abs(full.psi1_minus) == doctest::Approx(1.0).epsilon(1e-12));

  // rotation angle pi / 2 directly
  const double C = std::abs(coupling_constant(ctx, E).value);
  const auto quarter = linearized_bessel_transmission(beam, ctx, E, alpha, kPi / (C * alpha));
  CHECK(std::abs(quarter.psi1_minus) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("linearized form matches the exact Bessel beam at small coupling") {
  const auto ctx = PhysicsContext::neutron();
  const double E = 1e8, k_z = 1.0;
  const double C = coupling_constant(ctx, E).value; // signed, as the linearized form uses it
  // C k_rho / k_z^2 = 1e-3 and below
  for (double ratio : {1e-3, 1e-4}) {
    const double k_rho = ratio * k_z * k_z / std::abs(C);
    const double alpha = k_rho / k_z;
    const BesselBeamSpec beam{k_rho, k_z, 1.0, 0.0};
    for (double frac : {0.1, 0.2, 0.3, 0.4}) {
      const double z = frac * 2 * kPi / (std::abs(C) * alpha);
      const auto ex = bessel_beam_transmission(beam, C, z);
      const auto lin = linearized_bessel_transmission(beam, ctx, E, alpha, z);
      CHECK(std::abs(std::abs(ex.psi1_minus) - std::abs(lin.psi1_minus)) < 1e-3 * std::abs(lin.psi1_minus));
      CHECK(std::abs(std::abs(ex.psi0_plus) - std::abs(lin.psi0_plus)) < 1e-3 * std::abs(lin.psi0_plus));
    }
  }
}
