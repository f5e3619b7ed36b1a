#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weylzeta/rootdata.hpp"
#include "weylzeta/specfun.hpp"

namespace weylzeta {

// Affine function of the t-coordinates (lambda = rho + sum_a t_a omega_a).
struct AffineForm {
  Rational constant;
  RatVec coeff;

  cd eval(std::span<const cd> t) const {
    cd acc(constant.to_double(), 0.0);
    for (std::size_t k = 0; k < coeff.size(); ++k)
      acc += coeff[k].to_double() * t[k];
    return acc;
  }
  // restriction to { t_b = 0 for b != alpha_p, t_{alpha_p} = s }
  std::pair<Rational, Rational> restrict_to(int alpha_p) const {
    return {coeff[alpha_p], constant};
  }
  std::string str() const;
};

// One Weyl summand of the period:
//   scalar * prod xi(num)/xi(den) / prod denominator_forms.
struct PeriodTerm {
  int weyl_index = 0;
  cd scalar{1.0, 0.0};
  std::vector<AffineForm> denominator_forms;    // <w lambda - rho, alpha^vee>
  std::vector<AffineForm> xi_numerator_args;    // <lambda, alpha^vee>, alpha in inv(w)
  std::vector<AffineForm> xi_denominator_args;  // the same + 1
  std::vector<int> inversion;  // positive-root indices behind the xi args
};

std::vector<PeriodTerm> build_period_terms(const RootSystem& rs);

// Sum of the terms at a point; throws PoleError naming the offending
// form/term when a denominator form or a xi argument sits on a pole.
cd eval_period(const std::vector<PeriodTerm>& terms, std::span<const cd> t);

struct ResidueOptions {
  int start_nodes = 24;
  int max_nodes = 768;
  double rel_tol = 1e-8;        // node-doubling convergence target
  bool validate_radii = false;  // rerun at half radii, compare to 1e-6
  bool parallel = true;
};

// (G, P) evaluation recipe: which residues, in which order, at which radii,
// and how the raw residue is normalized into sigma-coordinates,
//   zeta(sigma) = constant * prod xi(p sigma + q) * R(a sigma + b).
struct ZetaSpec {
  CartanType group = CartanType::A1;
  int alpha_p = 0;
  std::string parabolic;            // display name (P21, P_long, ...)
  std::vector<int> residue_order;   // simple indices, outermost first
  std::vector<double> radii;        // contour radii along the order
  double a = 1.0;
  double b = 0.0;
  std::vector<std::pair<double, double>> clearing;  // (p, q) per xi factor
  cd constant{1.0, 0.0};

  std::string to_json() const;
  static ZetaSpec from_json(const std::string& text);
};

// Default residue order (textual order of the remaining simple roots) and
// the radii schedule eps_k = 0.1 * 3^{-k}.
ZetaSpec default_spec(CartanType group, int alpha_p);

// Nested contour residue of the period along the spec's hyperplanes with
// t_{alpha_p} = s. Trapezoid nodes on circles, node-doubling convergence,
// deterministic pairwise reduction. Rank 1 means no residues at all.
cd iterated_residue(const RootSystem& rs, const std::vector<PeriodTerm>& terms,
                    const ZetaSpec& spec, cd s,
                    const ResidueOptions& opts = {});

// Same sweep, resolved per Weyl term (calibration diagnostics).
std::vector<cd> iterated_residue_per_term(const RootSystem& rs,
                                          const std::vector<PeriodTerm>& terms,
                                          const ZetaSpec& spec, cd s,
                                          const ResidueOptions& opts = {});

struct CalibrationResult {
  ZetaSpec spec;
  double deviation = 1e300;  // achieved max relative FE deviation
  bool ok = false;
  std::string note;
};

struct CalibrationOptions {
  int n_test = 20;
  std::uint64_t seed = 20240229;
  double accept_tol = 1e-6;
  double fail_tol = 1e-4;
  // candidates injected by the symbolic analysis; the spec's (a,b) grid and
  // clearing subsets are appended as a fallback
  std::vector<std::pair<double, double>> ab_candidates;
  std::vector<std::vector<std::pair<double, double>>> clearing_candidates;
  std::function<cd(cd)> anchor;  // pins the constant when provided
  std::vector<double> avoid;     // singular s-positions of the raw function
};

// Searches (a, b) and xi clearing factors so that
// const * prod xi(p sigma+q) * R(a sigma + b) satisfies g(sigma)=g(1-sigma).
CalibrationResult calibrate_normalization(const std::function<cd(cd)>& raw,
                                          CalibrationOptions opts);

// Bundles root system + compiled terms + spec; the unit the CLI and the
// acceptance suite drive.
class ZetaGP {
 public:
  explicit ZetaGP(ZetaSpec spec);

  const ZetaSpec& spec() const { return spec_; }
  const RootSystem& root_system() const { return rs_; }
  const std::vector<PeriodTerm>& terms() const { return terms_; }

  cd raw_residue(cd s, const ResidueOptions& opts = {}) const;
  cd eval(cd sigma, const ResidueOptions& opts = {}) const;  // Norm o residue

  // sigma-positions the sampling must avoid (images of restricted poles).
  std::vector<double> singular_sigmas() const;

 private:
  ZetaSpec spec_;
  RootSystem rs_;
  std::vector<PeriodTerm> terms_;
  std::vector<double> singular_s_;
};

// Calibrates the full pipeline for (group, alpha_p): symbolic clearing
// candidates + reflection-center analysis, numeric verification, grid
// fallback. `anchor` optionally pins the constant.
CalibrationResult calibrate_spec(CartanType group, int alpha_p,
                                 const std::function<cd(cd)>& anchor = {},
                                 int n_test = 20,
                                 std::uint64_t seed = 20240229);

struct FEReport {
  std::string group, parabolic;
  std::uint64_t seed = 0;
  std::vector<std::pair<cd, double>> samples;  // (sigma, relative deviation)
  double max_rel_dev = 0.0;
  double threshold = 1e-6;
  bool pass() const { return max_rel_dev <= threshold; }
  std::string spec_json;
  std::string to_json() const;
  std::string to_csv() const;
};

FEReport fe_check(const ZetaGP& zeta, int n_samples, std::uint64_t seed,
                  double threshold = 1e-6);

struct ZeroHit {
  double t = 0.0;        // zero at 1/2 + i t (after complex Newton polish)
  double residual = 0.0;  // |f| at the polished zero
  double re_dev = 0.0;    // |Re - 1/2|
};

struct ZeroReport {
  std::string label;
  double t_min = 0.0;
  double t_max = 0.0;
  long winding = 0;             // argument-principle count in the box
  std::vector<ZeroHit> zeros;   // located on the critical line
  bool counts_match = false;    // winding == zeros.size(); the RH alarm path
  double max_re_dev = 0.0;
  double max_line_imag = 0.0;   // max |Im f(1/2+it)| / scale seen in the scan
  bool pass(double tol) const {
    return counts_match && max_re_dev < tol;
  }
  std::string to_json() const;
  std::string to_csv() const;
};

struct ZeroBoxOptions {
  double re_lo = -0.5, re_hi = 1.5;
  double im_lo = 0.05;
  double scan_step = 0.02;
  double bisect_tol = 1e-11;
};

ZeroReport find_zeros(const std::function<cd(cd)>& f, const std::string& label,
                      double t_max, const ZeroBoxOptions& opts = {});

// Six-term closed form for the (SL(3), P_{2,1}) zeta; regression target.
cd sl3_closed_form(cd sigma);

}  // namespace weylzeta
