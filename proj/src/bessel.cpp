#include "etwist/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace etwist {

namespace {

int miller_start(int nmax, double x) {
  const double m = std::max(static_cast<double>(nmax), x);
  int start = static_cast<int>(m + 30.0 + 12.0 * std::cbrt(m + 1.0));
  return start + (start & 1); // even, so the normalization sum ends on J_0
}

} // namespace

void bessel_j_sequence(double x, std::span<double> out) {
  if (out.empty()) return;
  const int nmax = static_cast<int>(out.size()) - 1;
  std::fill(out.begin(), out.end(), 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return;
  }
  const bool negative = x < 0.0;
  const double ax = std::abs(x);

  constexpr double kBig = 1e250;
  const int start = miller_start(nmax, ax);
  const double two_over_x = 2.0 / ax;

  double next = 0.0; // J_{k+1}
  double cur = 1e-300; // J_k at k = start
  double norm = 0.0;   // J_0 + 2 sum_{k even > 0} J_k
  for (int k = start; k > 0; --k) {
    const double prev = k * two_over_x * cur - next; // J_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 <= nmax) out[k - 1] = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > kBig) {
      cur /= kBig;
      next /= kBig;
      norm /= kBig;
      for (int j = k - 1; j <= nmax; ++j) out[j] /= kBig;
    }
  }
  norm += cur; // J_0 term
  for (auto& v : out) v /= norm;
  if (negative)
    for (int k = 1; k <= nmax; k += 2) out[k] = -out[k];
}

double bessel_j(int n, double x) {
  const int an = std::abs(n);
  std::vector<double> seq(an + 1);
  bessel_j_sequence(x, seq);
  const double v = seq[an];
  return (n < 0 && (an & 1)) ? -v : v;
}

} // namespace etwist
