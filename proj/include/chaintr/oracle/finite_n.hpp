#pragma once

#include "chaintr/algebra/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace chaintr {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

constexpr int kMaxFiniteN = 256;

// ln Z_N for the Hermitian Gaussian model
//   Z_N = 1/(N! (2 pi)^N) int prod dl_i Delta(l)^2 exp(-(N / 2T) sum l_i^2)
//       = (2 pi)^(-N/2) (T/N)^(N^2/2) prod_{j=1}^{N-1} j!
HighFloat gaussian_exact_lnZ(int N, const Rational& T = Rational(1));

// F_2 from the finite-N values: R(N) = ln Z_N + 3N^2/4 - (N^2/2) ln T + (1/12) ln N
// is a series in 1/N^2 whose 1/N^2 coefficient is T^2 F_2; fitted by
// polynomial interpolation over N = n_lo, n_lo + step, ..., n_hi.
double gaussian_F2_extrapolated(const Rational& T = Rational(1), int n_lo = 4, int n_hi = 64, int step = 4);

}  // namespace chaintr
