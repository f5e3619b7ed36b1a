#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "weylzeta/lattice.hpp"
#include "weylzeta/specfun.hpp"

using namespace weylzeta;

namespace {
constexpr double kPi = std::numbers::pi;

LatticeBasis random_lattice(std::mt19937_64& rng, double logvol_lo = -2.0,
                            double logvol_hi = 2.0) {
  std::uniform_real_distribution<double> un(-1.5, 1.5), uv(logvol_lo,
                                                           logvol_hi);
  for (;;) {
    Vec2 a{un(rng), un(rng)}, b{un(rng), un(rng)};
    double det = a.x * b.y - a.y * b.x;
    if (std::abs(det) < 0.05) continue;
    LatticeBasis l(a, b);
    return l.scaled(std::exp(0.5 * uv(rng)) / std::sqrt(l.volume()));
  }
}
}  // namespace

TEST_CASE("reduction: square, stretched, hexagonal") {
  LatticeBasis z2({1, 0}, {0, 1});
  auto [t1, u1] = reduce_to_fundamental_domain(z2);
  CHECK(t1.y == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(t1.x) <= 0.5);

  LatticeBasis skew({2, 0}, {0, 0.5});
  auto [t2, u2] = reduce_to_fundamental_domain(skew);
  CHECK(t2.x == doctest::Approx(0.0));
  CHECK(t2.y == doctest::Approx(4.0).epsilon(1e-14));
  // transform maps the input basis to the reduced one with det +1
  CHECK(u2[0][0] * u2[1][1] - u2[0][1] * u2[1][0] == 1);

  LatticeBasis hex({1, 0}, {0.5, std::sqrt(3.0) / 2.0});
  auto [t3, u3] = reduce_to_fundamental_domain(hex.volume_normalized());
  CHECK(std::abs(t3.x) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t3.y == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(t3.reduced());

  // y = lambda_1^{-2} Vol on a random pile, against the enumeration route
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    LatticeBasis l = random_lattice(rng);
    auto [tau, u] = reduce_to_fundamental_domain(l);
    auto [v, l1] = shortest_vector(l);
    CHECK(tau.y == doctest::Approx(l.volume() / (l1 * l1)).epsilon(1e-10));
  }
}

TEST_CASE("reduction transform is unimodular and reproduces tau") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 40; ++i) {
    LatticeBasis l = random_lattice(rng);
    auto [tau, u] = reduce_to_fundamental_domain(l);
    long long det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    CHECK(std::abs(det) == 1);
    Vec2 r1 = {double(u[0][0]) * l.b1().x + double(u[0][1]) * l.b2().x,
               double(u[0][0]) * l.b1().y + double(u[0][1]) * l.b2().y};
    Vec2 r2 = {double(u[1][0]) * l.b1().x + double(u[1][1]) * l.b2().x,
               double(u[1][0]) * l.b1().y + double(u[1][1]) * l.b2().y};
    std::complex<double> v1(r1.x, r1.y), v2(r2.x, r2.y);
    std::complex<double> t = v2 / v1;
    CHECK(t.real() == doctest::Approx(tau.x).epsilon(1e-12));
    CHECK(t.imag() == doctest::Approx(tau.y).epsilon(1e-12));
  }
}

TEST_CASE("h0: theta closed form, limits, positivity") {
  LatticeBasis z2({1, 0}, {0, 1});
  // theta(e^{-pi}) = pi^{1/4} / Gamma(3/4)
  double theta = std::pow(kPi, 0.25) /
                 std::exp(log_gamma(cd(0.75, 0)).real());
  CHECK(h0(z2) == doctest::Approx(2.0 * std::log(theta)).epsilon(1e-12));
  // scaled lattice: only x = 0 survives
  CHECK(h0(z2.scaled(40.0)) == doctest::Approx(0.0));
  CHECK(h0(z2.scaled(40.0)) >= 0.0);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) CHECK(h0(random_lattice(rng)) >= 0.0);
  // invariance under basis change and rotation
  LatticeBasis l({1.1, 0.3}, {-0.2, 0.8});
  LatticeBasis l2({1.1 + 2 * -0.2, 0.3 + 2 * 0.8}, {-0.2, 0.8});  // b1 + 2 b2
  double c = std::cos(0.7), s = std::sin(0.7);
  LatticeBasis l3({c * 1.1 - s * 0.3, s * 1.1 + c * 0.3},
                  {c * -0.2 - s * 0.8, s * -0.2 + c * 0.8});
  CHECK(std::abs(h0(l) - h0(l2)) < 1e-12);
  CHECK(std::abs(h0(l) - h0(l3)) < 1e-12);
}

TEST_CASE("duality and degree") {
  LatticeBasis z2({1, 0}, {0, 1});
  CHECK(degree(z2) == doctest::Approx(0.0));
  auto d = dual_lattice(z2);
  CHECK(d.volume() == doctest::Approx(1.0));
  LatticeBasis skew({2, 0}, {0, 0.5});
  CHECK(degree(skew) == doctest::Approx(0.0));  // volume 1
  LatticeBasis l({1.3, 0.2}, {-0.4, 0.9});
  CHECK(degree(l.scaled(1.7)) ==
        doctest::Approx(degree(l) - 2.0 * std::log(1.7)).epsilon(1e-13));
  CHECK(degree(dual_lattice(l)) == doctest::Approx(-degree(l)).epsilon(1e-13));
  // dual Gram = inverse Gram
  auto dd = dual_lattice(l);
  double det = l.g11() * l.g22() - l.g12() * l.g12();
  CHECK(dd.g11() == doctest::Approx(l.g22() / det).epsilon(1e-12));
  CHECK(dd.g12() == doctest::Approx(-l.g12() / det).epsilon(1e-12));
}

TEST_CASE("Riemann-Roch defect (Poisson summation)") {
  LatticeBasis z2({1, 0}, {0, 1});
  CHECK(std::abs(rr_defect(z2)) < 1e-12);
  CHECK(std::abs(rr_defect(z2.scaled(1.3))) < 1e-9);
  std::mt19937_64 rng(43);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i)
    worst = std::max(worst, std::abs(rr_defect(random_lattice(rng))));
  CHECK(worst < 1e-9);
}

TEST_CASE("Harder-Narasimhan polygon") {
  LatticeBasis z2({1, 0}, {0, 1});
  auto p = hn_polygon(z2);
  CHECK(p.vals.front() == 0.0);
  CHECK(p.vals.back() == 0.0);
  CHECK(p.at1() == doctest::Approx(0.0));  // semistable boundary
  LatticeBasis skew({2, 0}, {0, 0.5});
  CHECK(hn_polygon(skew).at1() == doctest::Approx(std::log(2.0)));
  // domination: every rank-1 sublattice polygon lies below the HN polygon
  std::mt19937_64 rng(47);
  for (int i = 0; i < 40; ++i) {
    LatticeBasis l = random_lattice(rng, -0.5, 0.5);
    double top = hn_polygon(l).at1();
    for (const Vec2& v : primitive_short_vectors(l, 3.0)) {
      double val = -std::log(std::sqrt(v.norm2())) - 0.5 * l.degree();
      CHECK(val <= top + 1e-12);
    }
  }
}

TEST_CASE("semistability: two routes agree") {
  auto v1 = is_semistable(LatticeBasis({1, 0}, {0, 1}));
  CHECK(v1.hn_semistable);
  CHECK(v1.cusp_semistable);
  CHECK(v1.boundary);  // y = 1 exactly
  auto v2 = is_semistable(LatticeBasis({2, 0}, {0, 0.5}));
  CHECK(!v2.hn_semistable);
  CHECK(!v2.cusp_semistable);
  auto v3 = is_semistable(LatticeBasis({1, 0}, {0.5, std::sqrt(3.0) / 2}));
  CHECK(v3.hn_semistable);
  CHECK(v3.cusp_semistable);
  CHECK(!v3.boundary);
  std::mt19937_64 rng(53);
  int boundary = 0;
  for (int i = 0; i < 500; ++i) {
    auto l = random_lattice(rng).volume_normalized();
    auto v = is_semistable(l);
    if (v.boundary) {
      ++boundary;
      continue;
    }
    CHECK(v.agree());
  }
  CHECK(boundary < 5);
}

TEST_CASE("micro bridge: spec examples and sampling") {
  GroupPoint g1{std::exp(-1.0), 0.0, 0.0};  // diag(e^{-1}, e)
  auto r1 = micro_bridge_check(g1, Polygon::rank2(0.0));
  REQUIRE(r1.has_value());
  CHECK(r1->lhs == 1);
  CHECK(r1->rhs == 1);
  GroupPoint id{1.0, 0.0, 0.0};
  auto r2 = micro_bridge_check(id, Polygon::rank2(0.5));
  REQUIRE(r2.has_value());
  CHECK(r2->lhs == 0);
  CHECK(r2->rhs == 0);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> ua(-1.5, 1.5), ux(-3, 3),
      uth(0, 2 * kPi);
  int ties = 0;
  for (int i = 0; i < 4000; ++i) {
    GroupPoint g{std::exp(ua(rng)), ux(rng), uth(rng)};
    auto r = micro_bridge_check(g, Polygon::rank2(0.0));
    if (!r) {
      ++ties;
      continue;
    }
    CHECK(r->agree());
  }
  CHECK(ties < 40);
}

TEST_CASE("fundamental relation: spec examples and sampling") {
  // semistable region: tau = i <-> Z^2-shaped, p = 0
  GroupPoint gs{1.0, 0.0, 0.4};
  auto r0 = fundamental_relation_check(gs, Polygon::rank2(0.3));
  REQUIRE(r0.has_value());
  CHECK(r0->lhs == 1);
  CHECK(r0->rhs == 1);
  // unstable: exactly one destabilizing line
  GroupPoint g1{std::exp(-1.0), 0.0, 0.0};
  auto r1 = fundamental_relation_check(g1, Polygon::rank2(0.0));
  REQUIRE(r1.has_value());
  CHECK(r1->lhs == 0);
  CHECK(r1->rhs == 0);
  // p(1) very large: every polygon dominated
  auto r2 = fundamental_relation_check(g1, Polygon::rank2(40.0));
  REQUIRE(r2.has_value());
  CHECK(r2->lhs == 1);
  CHECK(r2->rhs == 1);
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ua(-1.5, 1.5), ux(-3, 3),
      uth(0, 2 * kPi), up(0.0, 1.2);
  for (int i = 0; i < 4000; ++i) {
    GroupPoint g{std::exp(ua(rng)), ux(rng), uth(rng)};
    auto r = fundamental_relation_check(g, Polygon::rank2(up(rng)));
    if (!r) continue;
    CHECK(r->agree());
  }
}

TEST_CASE("Arthur truncation Lambda^T 1 = F(.,T)") {
  // reduced y <= e^T: both bits 1 (tau = 0.2 + 1.1i, T = log(1.3))
  {
    double x = 0.2, y = 1.1, T = std::log(1.3);
    GroupPoint g{1.0 / std::sqrt(y), x / y, 0.0};
    auto r = arthur_truncation_one(g, T);
    REQUIRE(r.has_value());
    CHECK(r->truncation == 1);
    CHECK(r->membership == 1);
  }
  // y = e^T * 1.1: both bits 0
  {
    double T = 0.4, y = std::exp(T) * 1.1;
    GroupPoint g{1.0 / std::sqrt(y), 0.1 / y, 0.0};
    auto r = arthur_truncation_one(g, T);
    REQUIRE(r.has_value());
    CHECK(r->truncation == 0);
    CHECK(r->membership == 0);
  }
  // T = 0 recovers semistability
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> ua(-1.5, 1.5), ux(-3, 3),
      uth(0, 2 * kPi), ut(0.0, 2.5);
  for (int i = 0; i < 2000; ++i) {
    GroupPoint g{std::exp(ua(rng)), ux(rng), uth(rng)};
    auto r = arthur_truncation_one(g, 0.0);
    if (!r) continue;
    CHECK(r->equal());
    auto ss = is_semistable(g.lattice());
    if (!ss.boundary) CHECK((r->membership == 1) == ss.hn_semistable);
  }
  for (int i = 0; i < 2000; ++i) {
    GroupPoint g{std::exp(ua(rng)), ux(rng), uth(rng)};
    auto r = arthur_truncation_one(g, ut(rng));
    if (!r) continue;
    CHECK(r->equal());
  }
}
