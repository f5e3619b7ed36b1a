#pragma once

#include <complex>

#include "weylzeta/specfun.hpp"

namespace weylzeta {

// z = x + iy in the upper half-plane.
struct UpperHalfPoint {
  double x = 0.0;
  double y = 1.0;
  bool reduced() const { return std::abs(x) <= 0.5 + 1e-12 && x * x + y * y >= 1.0 - 1e-12; }
  cd z() const { return cd(x, y); }
};

// Completed Epstein series E^(z;s) = pi^{-s} Gamma(s) sum' y^s/|mz+n|^{2s},
// by direct lattice summation. Requires Re s > 1 (RangeError otherwise);
// truncation radius from the analytic tail bound, relative target ~1e-10.
cd epstein_direct(const UpperHalfPoint& z, cd s);

// Same function through its Fourier expansion
//   a_0 = xi(2s) y^s + xi(2-2s) y^{1-s},
//   a_n = 2|n|^{s-1/2} sigma_{1-2s}(|n|) sqrt(y) K_{s-1/2}(2 pi |n| y),
// valid for all s off the xi poles; used for y >= 1/2. n_max <= 0 picks the
// cutoff from the exponential K-Bessel decay.
cd epstein_fourier(const UpperHalfPoint& z, cd s, int n_max = 0);

// Geometric truncation integral over D_T = {|x|<=1/2, x^2+y^2>=1, y<=T}
// with the hyperbolic measure dx dy / y^2; adaptive tensor Gauss-Legendre,
// absolute error target `tol`.
cd truncated_integral_geo(cd s, double t_cut, double tol = 1e-6);

// The Rankin-Selberg closed form xi(2s) T^{s-1}/(s-1) - xi(2s-1) T^{-s}/s.
cd truncated_integral_closed(cd s, double t_cut);

// Rank-two zeta xi_{Q,2}(sigma) = xi(2 sigma)/(sigma-1) - xi(2 sigma-1)/sigma.
// Simple poles at sigma = 0, 1 with residues -(xi(2)-1/2), +(xi(2)-1/2):
// both summands contribute at each pole, the xi(2 sigma-1) argument hitting
// a xi pole there. Analytic at sigma = 1/2 (the xi poles cancel; a small
// contour patch keeps full accuracy near the cancellation).
cd rank2_zeta(cd sigma);

}  // namespace weylzeta
