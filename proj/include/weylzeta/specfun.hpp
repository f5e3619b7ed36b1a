#pragma once

#include <complex>

namespace weylzeta {

using cd = std::complex<double>;

// Riemann zeta on the complex plane. Euler-Maclaurin with an |Im s|-adaptive
// cutoff; the classical reflection formula continues it to Re s < -1/2.
// Documented accuracy range |Im s| <= 200 (RangeError beyond), pole at s=1
// (PoleError).
cd zeta_complex(cd s);

// log Gamma, principal branch on Re z > 0: Stirling for |z| >= 13 with
// downward recurrence, reflection for Re z < 1/2. PoleError within 1e-9 of a
// nonpositive integer. For complex arguments in the left half-plane the
// imaginary part follows the reflection branch (exp of it is always Gamma).
cd log_gamma(cd z);

// Completed Riemann zeta xi(s) = pi^{-s/2} Gamma(s/2) zeta(s).
// Simple poles at s = 0, 1 (PoleError within 1e-12); residues exposed below.
cd completed_xi(cd s);

inline constexpr double kXiResidueAt1 = 1.0;
inline constexpr double kXiResidueAt0 = -1.0;

// K-Bessel via its defining integral K_nu(y) = 1/2 int_0^inf
// e^{-y(t+1/t)/2} t^nu dt/t, evaluated as int_0^inf e^{-y cosh u}
// cosh(nu u) du (trapezoid in u; the integrand decays double-exponentially).
// Requires y > 0; symmetric under nu -> -nu by construction.
cd bessel_k(cd nu, double y);

// log(sin(pi z)) with large-|Im z| handling; shared by the zeta and
// log-gamma reflection formulas.
cd log_sin_pi(cd z);

}  // namespace weylzeta
