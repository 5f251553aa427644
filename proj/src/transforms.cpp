#include "etwist/transforms.hpp"

#include "etwist/bessel.hpp"
#include "etwist/errors.hpp"
#include "etwist/units.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace etwist {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Forward DFT (sign -1) of `rows` contiguous length-n sequences.
std::vector<cplx> dft_rows(std::span<const cplx> in, std::size_t rows, int n) {
  std::vector<cplx> input(in.begin(), in.end());
  std::vector<cplx> out(in.size());
  auto* src = reinterpret_cast<fftw_complex*>(input.data());
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_many_dft(1, &n, static_cast<int>(rows), src, nullptr, 1, n,
                              dst, nullptr, 1, n, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

int wrap(int ell, int n) { return ((ell % n) + n) % n; }

cplx i_power(int p) {
  switch (wrap(p, 4)) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

void check_theta_sampling(int n, int max_abs_ell, const char* what) {
  if (n < 2 * (max_abs_ell + 1))
    throw AliasingError(std::string(what) + ": " + std::to_string(n) +
                        " azimuthal samples cannot resolve |l| = " +
                        std::to_string(max_abs_ell) + " (need " +
                        std::to_string(2 * (max_abs_ell + 1)) + ")");
}

// Bessel sequences J_0..J_lmax(k r) with the sign for negative orders.
struct BesselTable {
  int lmax;
  std::vector<double> seq;
  explicit BesselTable(int lmax_) : lmax(lmax_), seq(lmax_ + 1) {}
  void fill(double x) { bessel_j_sequence(x, seq); }
  double operator()(int ell) const {
    const int a = std::abs(ell);
    return (ell < 0 && (a & 1)) ? -seq[a] : seq[a];
  }
};

} // namespace

AzimuthalSpectrum AzimuthalSpectrum::zeros(int ell_min, int ell_max,
                                           RadialGrid grid) {
  if (ell_max < ell_min) throw DomainError("AzimuthalSpectrum: empty window");
  AzimuthalSpectrum s;
  s.ell_min = ell_min;
  s.ell_max = ell_max;
  s.coeffs.assign(ell_max - ell_min + 1, std::vector<cplx>(grid.size()));
  s.grid = std::move(grid);
  return s;
}

std::span<cplx> AzimuthalSpectrum::mode(int ell) {
  if (!contains(ell)) throw DomainError("AzimuthalSpectrum: l outside window");
  return coeffs[ell - ell_min];
}

std::span<const cplx> AzimuthalSpectrum::mode(int ell) const {
  if (!contains(ell)) throw DomainError("AzimuthalSpectrum: l outside window");
  return coeffs[ell - ell_min];
}

int AzimuthalSpectrum::max_abs_ell() const {
  return std::max(std::abs(ell_min), std::abs(ell_max));
}

void AzimuthalSpectrum::validate() const {
  if (ell_max < ell_min) throw DomainError("AzimuthalSpectrum: empty window");
  if (static_cast<int>(coeffs.size()) != window_size())
    throw DomainError("AzimuthalSpectrum: coefficient rows do not match window");
  for (const auto& row : coeffs)
    if (row.size() != grid.size())
      throw DomainError("AzimuthalSpectrum: row length does not match grid");
  const auto k = grid.nodes();
  const auto w = grid.weights();
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(w[i] > 0.0)) throw DomainError("AzimuthalSpectrum: nonpositive weight");
    if (k[i] < 0.0 || (i > 0 && !(k[i] > k[i - 1])))
      throw DomainError("AzimuthalSpectrum: radial grid not increasing from >= 0");
  }
}

PolarSamples PolarSamples::sample(RadialGrid radial, int n_phi,
                                  const std::function<cplx(double, double)>& f) {
  PolarSamples s;
  s.n_phi = n_phi;
  s.values.resize(radial.size() * n_phi);
  for (std::size_t i = 0; i < radial.size(); ++i)
    for (int j = 0; j < n_phi; ++j) s.at(i, j) = f(radial.nodes()[i], s.phi(j));
  s.radial = std::move(radial);
  return s;
}

double PolarSamples::phi(int j) const { return 2.0 * kPi * j / n_phi; }
double PolarGrid::theta(int j) const { return 2.0 * kPi * j / n_theta; }

namespace {

struct FullDecomposition {
  std::vector<cplx> coeffs; // [radial * n + (l mod n)], 2 pi / n scaled
  std::vector<double> mode_mass; // per (l mod n): int |f_l|^2 k dk
  double total = 0.0;
};

FullDecomposition decompose_all(const PolarSamples& field) {
  const int n = field.n_phi;
  if (n < 1 || field.values.size() != field.radial.size() * n)
    throw DomainError("azimuthal_decompose: malformed polar samples");
  FullDecomposition d;
  d.coeffs = dft_rows(field.values, field.radial.size(), n);
  const double scale = 2.0 * kPi / n;
  for (auto& c : d.coeffs) c *= scale;
  d.mode_mass.assign(n, 0.0);
  const auto k = field.radial.nodes();
  const auto w = field.radial.weights();
  for (std::size_t i = 0; i < k.size(); ++i)
    for (int m = 0; m < n; ++m) d.mode_mass[m] += w[i] * k[i] * std::norm(d.coeffs[i * n + m]);
  for (double m : d.mode_mass) d.total += m;
  return d;
}

AzimuthalSpectrum extract(const PolarSamples& field, const FullDecomposition& d,
                          int ell_min, int ell_max) {
  const int n = field.n_phi;
  auto spec = AzimuthalSpectrum::zeros(ell_min, ell_max, field.radial);
  double kept = 0.0;
  for (int ell = ell_min; ell <= ell_max; ++ell) {
    const int m = wrap(ell, n);
    auto row = spec.mode(ell);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = d.coeffs[i * n + m];
    kept += d.mode_mass[m];
  }
  spec.truncated_fraction = d.total > 0.0 ? std::max(0.0, 1.0 - kept / d.total) : 0.0;
  return spec;
}

} // namespace

AzimuthalSpectrum azimuthal_decompose(const PolarSamples& field, int ell_min,
                                      int ell_max) {
  if (ell_max < ell_min) throw DomainError("azimuthal_decompose: empty window");
  check_theta_sampling(field.n_phi, std::max(std::abs(ell_min), std::abs(ell_max)),
                       "azimuthal_decompose");
  return extract(field, decompose_all(field), ell_min, ell_max);
}

AzimuthalSpectrum azimuthal_decompose_auto(const PolarSamples& field,
                                           double tail_tolerance, int start) {
  const auto d = decompose_all(field);
  const int n = field.n_phi;
  const int limit = n / 2 - 1; // largest |l| allowed by the sampling rule
  int half = std::max(0, start);
  check_theta_sampling(n, half, "azimuthal_decompose_auto");
  for (;;) {
    double kept = 0.0;
    for (int ell = -half; ell <= half; ++ell) kept += d.mode_mass[wrap(ell, n)];
    const double tail = d.total > 0.0 ? 1.0 - kept / d.total : 0.0;
    if (tail <= tail_tolerance) break;
    if (half >= limit)
      throw AliasingError("azimuthal_decompose_auto: tail mass " +
                          std::to_string(tail) + " above tolerance at |l| = " +
                          std::to_string(half) + "; increase n_phi");
    ++half;
  }
  return extract(field, d, -half, half);
}

std::vector<cplx> hankel_component(const AzimuthalSpectrum& spec, int ell,
                                   std::span<const double> r) {
  std::vector<cplx> out(r.size());
  if (!spec.contains(ell)) return out;
  const auto f = spec.mode(ell);
  const auto k = spec.grid.nodes();
  const auto w = spec.grid.weights();
  const int a = std::abs(ell);
  const double sign = (ell < 0 && (a & 1)) ? -1.0 : 1.0;
  std::vector<double> seq(a + 1);
  const cplx phase = i_power(-ell) * sign;
  for (std::size_t i = 0; i < r.size(); ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      bessel_j_sequence(k[j] * r[i], seq);
      acc += w[j] * k[j] * f[j] * seq[a];
    }
    out[i] = phase * acc;
  }
  return out;
}

RealSpaceField hankel_synthesize(const AzimuthalSpectrum& spec,
                                 const PolarGrid& target) {
  spec.validate();
  const int lmax = spec.max_abs_ell();
  check_theta_sampling(target.n_theta, lmax, "hankel_synthesize");
  const double bandwidth = spec.grid.upper();
  if (target.radial.max_spacing() * bandwidth > kPi / 2.0)
    throw ResolutionError("hankel_synthesize: radial spacing " +
                          std::to_string(target.radial.max_spacing()) +
                          " too coarse for spectral bandwidth " +
                          std::to_string(bandwidth));

  const auto k = spec.grid.nodes();
  const auto w = spec.grid.weights();
  const auto r = target.radial.nodes();
  const int nl = spec.window_size();

  // radial components psi_l(r_i) = i^{-l} int f_l J_l k dk
  std::vector<cplx> comp(r.size() * nl);
  BesselTable table(lmax);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      table.fill(k[j] * r[i]);
      const double wk = w[j] * k[j];
      for (int ell = spec.ell_min; ell <= spec.ell_max; ++ell)
        comp[i * nl + (ell - spec.ell_min)] += wk * spec.coeffs[ell - spec.ell_min][j] * table(ell);
    }
    for (int ell = spec.ell_min; ell <= spec.ell_max; ++ell)
      comp[i * nl + (ell - spec.ell_min)] *= i_power(-ell);
  }

  RealSpaceField field;
  field.grid = target;
  const int nt = target.n_theta;
  field.values.assign(r.size() * nt, 0.0);
  for (int j = 0; j < nt; ++j) {
    const double th = target.theta(j);
    for (int ell = spec.ell_min; ell <= spec.ell_max; ++ell) {
      const cplx e = std::polar(1.0, ell * th);
      for (std::size_t i = 0; i < r.size(); ++i)
        field.values[i * nt + j] += e * comp[i * nl + (ell - spec.ell_min)];
    }
  }
  return field;
}

namespace {

// psi_l(r_i) = (1/n) sum_j psi(r_i, theta_j) e^{-i l theta_j}
std::vector<cplx> theta_coefficients(const RealSpaceField& field) {
  const int n = field.grid.n_theta;
  auto c = dft_rows(field.values, field.grid.radial.size(), n);
  for (auto& v : c) v /= static_cast<double>(n);
  return c;
}

} // namespace

AzimuthalSpectrum hankel_analyze(const RealSpaceField& field, int ell_min,
                                 int ell_max, const RadialGrid& k_grid) {
  const int n = field.grid.n_theta;
  const int lmax = std::max(std::abs(ell_min), std::abs(ell_max));
  check_theta_sampling(n, lmax, "hankel_analyze");
  const double extent = field.grid.radial.upper();
  if (k_grid.max_spacing() * extent > kPi / 2.0)
    throw ResolutionError("hankel_analyze: k spacing too coarse for real-space extent");

  const auto c = theta_coefficients(field);
  const auto r = field.grid.radial.nodes();
  const auto wr = field.grid.radial.weights();
  const auto k = k_grid.nodes();

  auto spec = AzimuthalSpectrum::zeros(ell_min, ell_max, k_grid);
  BesselTable table(lmax);
  for (std::size_t j = 0; j < k.size(); ++j) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      table.fill(k[j] * r[i]);
      const double wr_i = wr[i] * r[i];
      for (int ell = ell_min; ell <= ell_max; ++ell)
        spec.coeffs[ell - ell_min][j] += wr_i * c[i * n + wrap(ell, n)] * table(ell);
    }
  }
  for (int ell = ell_min; ell <= ell_max; ++ell)
    for (auto& v : spec.coeffs[ell - ell_min]) v *= i_power(ell);
  return spec;
}

double parseval_mode_norm(const AzimuthalSpectrum& spec, int ell) {
  if (!spec.contains(ell)) return 0.0;
  const auto f = spec.mode(ell);
  const auto k = spec.grid.nodes();
  const auto w = spec.grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += w[i] * k[i] * std::norm(f[i]);
  return sum;
}

double total_norm(const AzimuthalSpectrum& spec) {
  double sum = 0.0;
  for (int ell = spec.ell_min; ell <= spec.ell_max; ++ell)
    sum += parseval_mode_norm(spec, ell);
  return sum;
}

double real_space_mode_norm(const RealSpaceField& field, int ell) {
  const int n = field.grid.n_theta;
  check_theta_sampling(n, std::abs(ell), "real_space_mode_norm");
  const auto c = theta_coefficients(field);
  const auto r = field.grid.radial.nodes();
  const auto w = field.grid.radial.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    sum += w[i] * r[i] * std::norm(c[i * n + wrap(ell, n)]);
  return sum;
}

} // namespace etwist
