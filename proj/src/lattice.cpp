#include "weylzeta/lattice.hpp"

#include <cmath>
#include <complex>
#include <numeric>

#include "weylzeta/errors.hpp"
#include "weylzeta/rootdata.hpp"
#include "weylzeta/truncomb.hpp"

namespace weylzeta {

namespace {

constexpr double kPiL = 3.14159265358979323846;
constexpr double kTieBand = 1e-9;

const RootSystem& a1_root_system() {
  static const RootSystem rs = build_root_system(CartanType::A1);
  return rs;
}

}  // namespace

LatticeBasis::LatticeBasis(Vec2 b1, Vec2 b2) : b1_(b1), b2_(b2) {
  g11_ = b1.norm2();
  g12_ = b1.x * b2.x + b1.y * b2.y;
  g22_ = b2.norm2();
  double det = b1.x * b2.y - b1.y * b2.x;
  vol_ = std::abs(det);
  if (!(vol_ > 1e-300) || !std::isfinite(vol_))
    throw ConfigError("LatticeBasis: degenerate basis");
}

LatticeBasis LatticeBasis::dual() const {
  double det = b1_.x * b2_.y - b1_.y * b2_.x;
  Vec2 d1{b2_.y / det, -b2_.x / det};
  Vec2 d2{-b1_.y / det, b1_.x / det};
  return LatticeBasis(d1, d2);
}

LatticeBasis LatticeBasis::scaled(double c) const {
  return LatticeBasis(c * b1_, c * b2_);
}

LatticeBasis LatticeBasis::volume_normalized() const {
  return scaled(1.0 / std::sqrt(vol_));
}

std::pair<UpperHalfPoint, Unimodular> reduce_to_fundamental_domain(
    const LatticeBasis& basis) {
  std::complex<double> v1(basis.b1().x, basis.b1().y);
  std::complex<double> v2(basis.b2().x, basis.b2().y);
  Unimodular u{{{1, 0}, {0, 1}}};
  double det = basis.b1().x * basis.b2().y - basis.b1().y * basis.b2().x;
  if (det < 0) {
    v2 = -v2;
    u[1][0] = 0;
    u[1][1] = -1;
  }
  for (int guard = 0; guard < 10000; ++guard) {
    double n = std::round((v2 * std::conj(v1)).real() / std::norm(v1));
    if (n != 0.0) {
      v2 -= n * v1;
      long long ni = static_cast<long long>(n);
      u[1][0] -= ni * u[0][0];
      u[1][1] -= ni * u[0][1];
    }
    if (std::norm(v2) < std::norm(v1) * (1.0 - 1e-15)) {
      std::swap(v1, v2);
      v1 = -v1;
      std::swap(u[0], u[1]);
      u[0][0] = -u[0][0];
      u[0][1] = -u[0][1];
    } else {
      break;
    }
  }
  std::complex<double> tau = v2 / v1;
  if (tau.real() < -0.5 + 1e-15) {  // send the x = -1/2 wall to +1/2
    v2 += v1;
    u[1][0] += u[0][0];
    u[1][1] += u[0][1];
    tau = v2 / v1;
  }
  UpperHalfPoint z{tau.real(), tau.imag()};
  return {z, u};
}

std::vector<Vec2> primitive_short_vectors(const LatticeBasis& basis,
                                          double radius) {
  // enumerate m b1 + n b2 with a Gauss-reduced copy for tight coefficient
  // bounds, then map back
  auto [z, u] = reduce_to_fundamental_domain(basis);
  (void)z;
  Vec2 r1 = {static_cast<double>(u[0][0]) * basis.b1().x +
                 static_cast<double>(u[0][1]) * basis.b2().x,
             static_cast<double>(u[0][0]) * basis.b1().y +
                 static_cast<double>(u[0][1]) * basis.b2().y};
  Vec2 r2 = {static_cast<double>(u[1][0]) * basis.b1().x +
                 static_cast<double>(u[1][1]) * basis.b2().x,
             static_cast<double>(u[1][0]) * basis.b1().y +
                 static_cast<double>(u[1][1]) * basis.b2().y};
  const double l1 = std::sqrt(r1.norm2());
  const double vol = basis.volume();
  const double h = vol / l1;  // reduced Gram-Schmidt height of r2
  std::vector<Vec2> out;
  const long long n_max = static_cast<long long>(std::floor(radius / h)) + 1;
  for (long long n = 0; n <= n_max; ++n) {
    double proj = (r1.x * r2.x + r1.y * r2.y) / r1.norm2();
    double m_center = -n * proj;
    double m_span = radius / l1 + 1.0;
    long long m_lo = static_cast<long long>(std::floor(m_center - m_span));
    long long m_hi = static_cast<long long>(std::ceil(m_center + m_span));
    for (long long m = m_lo; m <= m_hi; ++m) {
      if (n == 0 && m <= 0) continue;  // one representative per +-pair
      if (std::gcd(std::abs(m), std::abs(n)) != 1) continue;
      Vec2 v = {m * r1.x + n * r2.x, m * r1.y + n * r2.y};
      if (std::sqrt(v.norm2()) < radius) out.push_back(v);
    }
  }
  return out;
}

std::pair<Vec2, double> shortest_vector(const LatticeBasis& basis) {
  // enumeration with a growing radius; independent of the reduction route
  double r = std::sqrt(std::min(basis.g11(), basis.g22()));
  for (int it = 0; it < 8; ++it) {
    std::vector<Vec2> cand = primitive_short_vectors(basis, r * (1.0 + 1e-12));
    double best = r * r * 4;
    Vec2 bv{0, 0};
    bool found = false;
    for (const Vec2& v : cand) {
      if (v.norm2() < best) {
        best = v.norm2();
        bv = v;
        found = true;
      }
    }
    if (found) return {bv, std::sqrt(best)};
    r *= 2.0;
  }
  throw ConfigError("shortest_vector: enumeration failed");
}

double h0(const LatticeBasis& basis, double tol) {
  // Rank the tail: #\{|v| in [r, r+1)\} <= (2 pi (r+1) + c)/vol-ish; a
  // crude doubling on R with an explicit bound check keeps it safe.
  double r_cut = std::sqrt(std::max(4.0, std::log(64.0 / tol) / kPiL));
  const double vol = basis.volume();
  for (int it = 0; it < 60; ++it) {
    double bound = (6.3 * (r_cut + 1.0) / vol + 4.0) * 4.0 *
                   std::exp(-kPiL * r_cut * r_cut);
    if (bound < tol) break;
    r_cut += 0.5;
  }
  // enumerate all (not just primitive) vectors with |v| <= r_cut
  auto [z, u] = reduce_to_fundamental_domain(basis);
  (void)z;
  Vec2 r1 = {static_cast<double>(u[0][0]) * basis.b1().x +
                 static_cast<double>(u[0][1]) * basis.b2().x,
             static_cast<double>(u[0][0]) * basis.b1().y +
                 static_cast<double>(u[0][1]) * basis.b2().y};
  Vec2 r2 = {static_cast<double>(u[1][0]) * basis.b1().x +
                 static_cast<double>(u[1][1]) * basis.b2().x,
             static_cast<double>(u[1][0]) * basis.b1().y +
                 static_cast<double>(u[1][1]) * basis.b2().y};
  const double l1 = std::sqrt(r1.norm2());
  const double h_gs = basis.volume() / l1;
  double acc = 1.0;  // v = 0
  const long long n_max = static_cast<long long>(std::floor(r_cut / h_gs)) + 1;
  const double proj = (r1.x * r2.x + r1.y * r2.y) / r1.norm2();
  for (long long n = -n_max; n <= n_max; ++n) {
    double m_center = -static_cast<double>(n) * proj;
    double m_span = r_cut / l1 + 1.0;
    long long m_lo = static_cast<long long>(std::floor(m_center - m_span));
    long long m_hi = static_cast<long long>(std::ceil(m_center + m_span));
    for (long long m = m_lo; m <= m_hi; ++m) {
      if (n == 0 && m == 0) continue;
      Vec2 v = {m * r1.x + n * r2.x, m * r1.y + n * r2.y};
      double q = v.norm2();
      if (q <= r_cut * r_cut) acc += std::exp(-kPiL * q);
    }
  }
  return std::log(acc);
}

LatticeBasis dual_lattice(const LatticeBasis& basis) { return basis.dual(); }

double degree(const LatticeBasis& basis) { return basis.degree(); }

double rr_defect(const LatticeBasis& basis) {
  return h0(basis) - h0(basis.dual()) - basis.degree();
}

Polygon hn_polygon(const LatticeBasis& basis) {
  auto [v, l1] = shortest_vector(basis);
  (void)v;
  double breakpoint = -std::log(l1) - 0.5 * basis.degree();
  return Polygon::rank2(std::max(0.0, breakpoint));
}

StabilityVerdict is_semistable(const LatticeBasis& basis) {
  LatticeBasis norm = basis.volume_normalized();
  StabilityVerdict verdict;
  auto [v, l1] = shortest_vector(norm);
  (void)v;
  verdict.hn_semistable = -std::log(l1) <= 0.0;
  auto [z, u] = reduce_to_fundamental_domain(norm);
  (void)u;
  verdict.cusp_semistable = z.y <= 1.0;
  verdict.boundary = std::abs(z.y - 1.0) < 1e-12;
  return verdict;
}

LatticeBasis GroupPoint::lattice() const {
  const double a2 = 1.0 / a1;
  const double c = std::cos(theta), s = std::sin(theta);
  Vec2 c1{a1 * c, a1 * s};
  Vec2 c2{x * a2 * c - a2 * s, x * a2 * s + a2 * c};
  return LatticeBasis(c1, c2);
}

std::optional<BridgeSides> micro_bridge_check(const GroupPoint& g,
                                              const Polygon& p) {
  // Left: tauhat on a_0(A1) at D(g) - T(p); coroot coordinate of the degree
  // vector is deg Lambda_1 = -log a1, and T(p) has coordinate p(1).
  const double lhs_coord = g.borel_line_degree() - p.at1();
  Tri lhs = tau_hat_d(a1_root_system(), 0u, 1u, {lhs_coord}, kTieBand);
  if (lhs == Tri::wall) return std::nullopt;
  // Right: 1(p_B^g > p), the Borel-line degree read off the lattice itself.
  const LatticeBasis lat = g.lattice();
  const double deg_line = -0.5 * std::log(lat.g11());
  if (std::abs(deg_line - p.at1()) < kTieBand) return std::nullopt;
  BridgeSides sides;
  sides.lhs = lhs == Tri::yes ? 1 : 0;
  sides.rhs = deg_line > p.at1() ? 1 : 0;
  return sides;
}

std::optional<BridgeSides> fundamental_relation_check(const GroupPoint& g,
                                                      const Polygon& p) {
  const LatticeBasis lat = g.lattice();
  const double p1 = p.at1();
  // Left: the canonical polygon dominated by p.
  Polygon hn = hn_polygon(lat);
  if (std::abs(hn.at1() - p1) < kTieBand) return std::nullopt;
  const int lhs = hn.at1() <= p1 ? 1 : 0;
  // Right: 1 - #{primitive lines with deg > p(1)}; deg = -log|v|, so the
  // enumeration radius is e^{-p(1)} (the omitted longer vectors provably
  // contribute nothing).
  const double radius = std::exp(-p1);
  auto lines = primitive_short_vectors(lat, radius * (1.0 + 1e-12));
  int count = 0;
  for (const Vec2& v : lines) {
    double deg = -std::log(std::sqrt(v.norm2()));
    if (std::abs(deg - p1) < kTieBand) return std::nullopt;
    if (deg > p1) ++count;
  }
  BridgeSides sides;
  sides.lhs = lhs;
  sides.rhs = 1 - count;
  return sides;
}

std::optional<TruncationBits> arthur_truncation_one(const GroupPoint& g,
                                                    double t_threshold) {
  if (t_threshold < 0.0)
    throw ConfigError("arthur_truncation_one: requires T >= 0");
  const LatticeBasis lat = g.lattice();
  // Lambda^T 1(g) = 1 - sum_delta tauhat(D(delta g) - T): the delta-sum runs
  // over the lines of the lattice, D coordinate = line degree; the tauhat
  // threshold in the degree coordinate is T/2 for the log-y threshold T.
  const double deg_cut = 0.5 * t_threshold;
  const double radius = std::exp(-deg_cut);
  auto lines = primitive_short_vectors(lat, radius * 2.0 + 1.0);
  int fired = 0;
  for (const Vec2& v : lines) {
    double deg = -std::log(std::sqrt(v.norm2()));
    Tri t = tau_hat_d(a1_root_system(), 0u, 1u, {deg - deg_cut}, kTieBand);
    if (t == Tri::wall) return std::nullopt;
    if (t == Tri::yes) ++fired;
  }
  TruncationBits bits;
  bits.truncation = 1 - fired;
  auto [z, u] = reduce_to_fundamental_domain(lat);
  (void)u;
  if (std::abs(std::log(z.y) - t_threshold) < kTieBand) return std::nullopt;
  bits.membership = std::log(z.y) <= t_threshold ? 1 : 0;
  return bits;
}

}  // namespace weylzeta
