#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "weylzeta/eisenstein.hpp"

namespace weylzeta {

struct Vec2 {
  double x = 0.0, y = 0.0;
  double norm2() const { return x * x + y * y; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double c, Vec2 v) { return {c * v.x, c * v.y}; }
};

// Rank-two real lattice given by a basis; volume is |det|. Degenerate bases
// are rejected at construction.
class LatticeBasis {
 public:
  LatticeBasis(Vec2 b1, Vec2 b2);

  const Vec2& b1() const { return b1_; }
  const Vec2& b2() const { return b2_; }
  double volume() const { return vol_; }
  double degree() const { return -std::log(vol_); }
  // Gram entries <b_i, b_j>
  double g11() const { return g11_; }
  double g12() const { return g12_; }
  double g22() const { return g22_; }

  LatticeBasis dual() const;
  LatticeBasis scaled(double c) const;
  LatticeBasis volume_normalized() const;

 private:
  Vec2 b1_, b2_;
  double g11_, g12_, g22_, vol_;
};

using Unimodular = std::array<std::array<long long, 2>, 2>;

// Gauss reduction of the lattice shape into the standard fundamental domain
// |x| <= 1/2, |z| >= 1. The returned transform U (det +1 for positively
// oriented input, -1 otherwise) carries the input basis to the reduced one:
// (b1', b2') = (U11 b1 + U12 b2, U21 b1 + U22 b2), and tau = b2'/b1' with
// y = Vol / |b1'|^2 = lambda_1^{-2} Vol.
std::pair<UpperHalfPoint, Unimodular> reduce_to_fundamental_domain(
    const LatticeBasis& basis);

// Geo-arithmetic h^0 = log sum_{v in Lambda} e^{-pi |v|^2}, theta tail below
// tol (default is far below the 1e-9 Riemann-Roch budget).
double h0(const LatticeBasis& basis, double tol = 1e-13);

LatticeBasis dual_lattice(const LatticeBasis& basis);
double degree(const LatticeBasis& basis);

// h0(L) - h0(L^vee) - deg(L); Poisson summation makes this 0.
double rr_defect(const LatticeBasis& basis);

// Normalized polygon on [0, rank]: values at integer arguments,
// vals.front() = vals.back() = 0.
struct Polygon {
  std::vector<double> vals{0.0, 0.0, 0.0};  // rank 2 by default
  double at1() const { return vals[1]; }
  static Polygon rank2(double p1) { return Polygon{{0.0, p1, 0.0}}; }
};

// Harder-Narasimhan polygon of a rank-2 lattice: breakpoint
// max(0, -log lambda_1 - deg/2), by shortest-vector enumeration.
Polygon hn_polygon(const LatticeBasis& basis);

// Shortest nonzero vector (enumeration, not reduction).
std::pair<Vec2, double> shortest_vector(const LatticeBasis& basis);

struct StabilityVerdict {
  bool hn_semistable = false;    // enumeration route
  bool cusp_semistable = false;  // reduction route: y_reduced <= 1
  bool boundary = false;         // within 1e-12 of y = 1
  bool agree() const { return hn_semistable == cusp_semistable; }
};

StabilityVerdict is_semistable(const LatticeBasis& basis);

// Iwasawa-coordinate point of SL(2,R): g = rot(theta) * [[a1, x/a1],[0,1/a1]].
// Columns generate the volume-one lattice; the Borel line is the first
// column, so deg Lambda_1^{g,B} = -log a1.
struct GroupPoint {
  double a1 = 1.0;
  double x = 0.0;
  double theta = 0.0;
  LatticeBasis lattice() const;
  double borel_line_degree() const { return -std::log(a1); }
};

struct BridgeSides {
  int lhs = 0;
  int rhs = 0;
  bool agree() const { return lhs == rhs; }
};

// Micro Bridge at SL(2): lhs = tauhat_B(D(g) - T(p)), rhs = 1(p_B^g > p),
// D(g) the degree vector. nullopt = tie within 1e-9 (skipped sample).
std::optional<BridgeSides> micro_bridge_check(const GroupPoint& g,
                                              const Polygon& p);

// Fundamental Relation at SL(2): lhs = 1(hn <= p),
// rhs = 1 - #{lines with deg > p(1)} enumerated over primitive vectors.
std::optional<BridgeSides> fundamental_relation_check(const GroupPoint& g,
                                                      const Polygon& p);

struct TruncationBits {
  int truncation = 0;  // 1 - sum_delta tauhat(D(delta g) - T)
  int membership = 0;  // y_reduced <= e^T
  bool equal() const { return truncation == membership; }
};

// Arthur's Lambda^T 1 against the direct membership test; T is the log-y
// threshold (T = 0 recovers semistability). nullopt = tie.
std::optional<TruncationBits> arthur_truncation_one(const GroupPoint& g,
                                                    double t_threshold);

// Primitive vectors (one per +-pair) with |v| < radius.
std::vector<Vec2> primitive_short_vectors(const LatticeBasis& basis,
                                          double radius);

}  // namespace weylzeta
