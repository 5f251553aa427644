#pragma once

#include <span>

namespace etwist {

// Bessel functions of the first kind J_n(x) for integer order.
//
// Miller's backward recurrence normalized by J_0 + 2 sum J_2k = 1. The start
// index sits well past max(n, x), where J decays faster than exponentially,
// so the same routine is stable on both sides of the transition region.
// Target accuracy ~1e-13 absolute for |n| <= 64, |x| <= 1e3.

// Fills out[k] = J_k(x) for k = 0 .. out.size()-1.
void bessel_j_sequence(double x, std::span<double> out);

double bessel_j(int n, double x);

} // namespace etwist
