#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "weylzeta/eisenstein.hpp"
#include "weylzeta/errors.hpp"
#include "weylzeta/periods.hpp"

using namespace weylzeta;

namespace {
double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

// hand expansion of the rank-1 period: 1/t - xi(t+1)/((t+2) xi(t+2))
cd a1_closed(cd t) {
  return 1.0 / t - completed_xi(t + cd(1, 0)) /
                       ((t + cd(2, 0)) * completed_xi(t + cd(2, 0)));
}
}  // namespace

TEST_CASE("build_period_terms: A1 expansion at rational points") {
  auto rs = build_root_system(CartanType::A1);
  auto terms = build_period_terms(rs);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].xi_numerator_args.empty());
  REQUIRE(terms[1].xi_numerator_args.size() == 1);
  // w = s_alpha: <w lambda - rho, alpha^vee> = -t - 2
  CHECK(terms[1].denominator_forms[0].constant == Rational(-2));
  CHECK(terms[1].denominator_forms[0].coeff[0] == Rational(-1));
  for (cd t : {cd(2, 0), cd(0.5, 0), cd(1.0 / 3, 0)}) {
    std::vector<cd> pt{t};
    CHECK(rel(eval_period(terms, pt), a1_closed(t)) < 1e-13);
  }
}

TEST_CASE("build_period_terms: A2 and G2 structure") {
  auto a2 = build_root_system(CartanType::A2);
  auto t2 = build_period_terms(a2);
  REQUIRE(t2.size() == 6);
  CHECK(t2[0].inversion.empty());  // identity term: empty xi products
  CHECK(t2[0].denominator_forms[0].str() == "0+1*t1");
  CHECK(t2[0].denominator_forms[1].str() == "0+1*t2");
  auto g2 = build_root_system(CartanType::G2);
  auto tg = build_period_terms(g2);
  REQUIRE(tg.size() == 12);
  CHECK(tg.back().xi_numerator_args.size() == 6);  // longest element
}

TEST_CASE("eval_period: value, decomposition, pole hit") {
  auto rs = build_root_system(CartanType::A1);
  auto terms = build_period_terms(rs);
  std::vector<cd> pt{cd(2, 0)};
  cd want = cd(0.5, 0) - completed_xi(cd(3, 0)) / (4.0 * completed_xi(cd(4, 0)));
  CHECK(rel(eval_period(terms, pt), want) < 1e-14);

  auto a2 = build_root_system(CartanType::A2);
  auto t2 = build_period_terms(a2);
  std::vector<cd> p2{cd(0.7, 0.3), cd(-1.4, 0.8)};
  cd total = eval_period(t2, p2);
  cd by_parts(0, 0);
  for (const auto& term : t2)
    by_parts += eval_period(std::vector<PeriodTerm>{term}, p2);
  CHECK(rel(total, by_parts) < 1e-13);

  std::vector<cd> bad{cd(0, 0), cd(1, 0)};
  CHECK_THROWS_AS(eval_period(t2, bad), PoleError);
  try {
    eval_period(t2, bad);
  } catch (const PoleError& e) {
    CHECK(std::string(e.what()).find("t1") != std::string::npos);
  }
}

TEST_CASE("iterated_residue: toy oracles") {
  auto rs = build_root_system(CartanType::A2);
  ZetaSpec spec = default_spec(CartanType::A2, 1);
  // 1/t1 * xi(t2+2): residue in t1 is xi(s+2)
  PeriodTerm toy;
  toy.weyl_index = -1;
  AffineForm d1{Rational(0), {Rational(1), Rational(0)}};
  AffineForm d2{Rational(1), {Rational(0), Rational(0)}};
  toy.denominator_forms = {d1, d2};
  toy.xi_numerator_args = {AffineForm{Rational(2), {Rational(0), Rational(1)}}};
  cd s(2.3, 0.4);
  CHECK(rel(iterated_residue(rs, {toy}, spec, s), completed_xi(s + cd(2, 0))) <
        1e-12);
  // a regular term has residue 0
  PeriodTerm reg;
  reg.weyl_index = -1;
  reg.denominator_forms = {AffineForm{Rational(5), {Rational(1), Rational(0)}},
                           AffineForm{Rational(1), {Rational(0), Rational(0)}}};
  CHECK(std::abs(iterated_residue(rs, {reg}, spec, cd(2.3, 0))) < 1e-14);
}

TEST_CASE("iterated_residue: node and radius stability at A2") {
  auto rs = build_root_system(CartanType::A2);
  auto terms = build_period_terms(rs);
  ZetaSpec spec = default_spec(CartanType::A2, 0);
  ResidueOptions o1;
  o1.start_nodes = 32;
  o1.validate_radii = true;  // runtime radius-halving agreement
  cd v1 = iterated_residue(rs, terms, spec, cd(2.3, 0), o1);
  ResidueOptions o2;
  o2.start_nodes = 128;
  cd v2 = iterated_residue(rs, terms, spec, cd(2.3, 0), o2);
  CHECK(rel(v2, v1) < 1e-8);
  ZetaSpec half = spec;
  for (double& r : half.radii) r *= 0.5;
  CHECK(rel(iterated_residue(rs, terms, half, cd(2.3, 0)), v1) < 1e-8);
}

TEST_CASE("iterated_residue: order invariance (A3, empirical)") {
  auto rs = build_root_system(CartanType::A3);
  auto terms = build_period_terms(rs);
  ZetaSpec sp = default_spec(CartanType::A3, 2);
  cd w1 = iterated_residue(rs, terms, sp, cd(1.7, 0.3));
  ZetaSpec sp2 = sp;
  std::swap(sp2.residue_order[0], sp2.residue_order[1]);
  std::swap(sp2.radii[0], sp2.radii[0]);  // keep the same radii schedule
  cd w2 = iterated_residue(rs, terms, sp2, cd(1.7, 0.3));
  CHECK(rel(w1, w2) < 1e-7);
}

TEST_CASE("calibrate_normalization: fixed point on symmetric input") {
  CalibrationOptions opts;
  opts.n_test = 12;
  auto res = calibrate_normalization([](cd s) { return rank2_zeta(s); }, opts);
  CHECK(res.ok);
  CHECK(res.spec.a == doctest::Approx(1.0));
  CHECK(res.spec.b == doctest::Approx(0.0));
  CHECK(res.spec.clearing.empty());
}

TEST_CASE("calibrate_normalization: failure is reported, not silent") {
  CalibrationOptions opts;
  opts.n_test = 8;
  auto res = calibrate_normalization([](cd s) { return std::exp(s); }, opts);
  CHECK(!res.ok);
  CHECK(res.deviation > 1e-4);
  CHECK(res.note.find("calibration failure") != std::string::npos);
}

TEST_CASE("calibrate_spec: SL(2) reproduces the rank-2 zeta") {
  auto cal = calibrate_spec(CartanType::A1, 0,
                            [](cd s) { return rank2_zeta(s); });
  REQUIRE(cal.ok);
  CHECK(cal.spec.a == doctest::Approx(2.0));
  CHECK(cal.spec.b == doctest::Approx(-2.0));
  REQUIRE(cal.spec.clearing.size() == 1);
  CHECK(cal.spec.clearing[0].first == doctest::Approx(2.0));
  CHECK(cal.spec.clearing[0].second == doctest::Approx(0.0));
  CHECK(std::abs(cal.spec.constant - cd(2, 0)) < 1e-9);
  ZetaGP zeta(cal.spec);
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> ure(-0.4, 1.4), uim(0.2, 2.0);
  for (int i = 0; i < 20; ++i) {
    cd sigma(ure(rng), uim(rng));
    CHECK(rel(zeta.eval(sigma), rank2_zeta(sigma)) < 1e-8);
  }
  // SL(2) spec at sigma = 2: xi(4) - xi(3)/2
  cd want = completed_xi(cd(4, 0)) - completed_xi(cd(3, 0)) / 2.0;
  CHECK(rel(zeta.eval(cd(2, 0)), want) < 1e-10);
}

TEST_CASE("calibrate_spec: SL(3) matches the six-term closed form") {
  auto cal = calibrate_spec(CartanType::A2, 1,
                            [](cd s) { return sl3_closed_form(s); });
  REQUIRE(cal.ok);
  CHECK(cal.spec.a == doctest::Approx(3.0));
  CHECK(cal.spec.b == doctest::Approx(-3.0));
  ZetaGP zeta(cal.spec);
  // ratio constancy across sample points
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> ure(-0.3, 1.3), uim(0.25, 1.6);
  cd ratio0;
  for (int i = 0; i < 10; ++i) {
    cd sigma(ure(rng), uim(rng));
    cd r = zeta.eval(sigma) / sl3_closed_form(sigma);
    if (i == 0)
      ratio0 = r;
    else
      CHECK(std::abs(r - ratio0) / std::abs(ratio0) < 1e-6);
  }
  CHECK(std::abs(ratio0 - cd(1, 0)) < 1e-8);  // anchored constant = xi(2)
  // FE by construction of the calibrated spec
  cd sigma(0.37, 0.83);
  CHECK(rel(zeta.eval(sigma), zeta.eval(cd(1, 0) - sigma)) < 1e-9);
}

TEST_CASE("fe_check: pass and deliberately corrupted NormSpec") {
  auto cal = calibrate_spec(CartanType::A1, 0);
  REQUIRE(cal.ok);
  ZetaGP zeta(cal.spec);
  auto rep = fe_check(zeta, 12, 12345);
  CHECK(rep.pass());
  CHECK(rep.max_rel_dev < 1e-8);
  ZetaSpec bad = cal.spec;
  bad.b += 0.1;
  ZetaGP broken(bad);
  auto rep2 = fe_check(broken, 12, 12345);
  CHECK(!rep2.pass());
  CHECK(rep2.max_rel_dev > 1e-2);
  // reports carry the exact spec (reproducibility) and serialize
  CHECK(rep.to_json().find("\"a\": 2.0") != std::string::npos);
  CHECK(rep.to_csv().rfind("re_sigma", 0) == 0);
}

TEST_CASE("find_zeros: rank-2 zeta desk check and empty box") {
  auto rep = find_zeros([](cd s) { return rank2_zeta(s); }, "xi_Q2", 30.0);
  CHECK(rep.counts_match);
  CHECK(rep.winding == 13);
  CHECK(rep.max_re_dev < 1e-6);
  CHECK(rep.max_line_imag < 1e-9);
  CHECK(rep.zeros.front().t == doctest::Approx(7.76908011).epsilon(1e-6));
  auto small = find_zeros([](cd s) { return rank2_zeta(s); }, "xi_Q2", 3.0);
  CHECK(small.winding == 0);
  CHECK(small.zeros.empty());
  CHECK(small.counts_match);
}

TEST_CASE("ZetaSpec JSON round trip") {
  ZetaSpec spec = default_spec(CartanType::G2, 0);
  spec.a = 3;
  spec.b = -3;
  spec.clearing = {{3, 0}, {6, -2}, {9, -3}};
  spec.constant = cd(1.25, 0);
  spec.parabolic = "P_long";
  ZetaSpec back = ZetaSpec::from_json(spec.to_json());
  CHECK(back.group == spec.group);
  CHECK(back.alpha_p == spec.alpha_p);
  CHECK(back.residue_order == spec.residue_order);
  CHECK(back.a == spec.a);
  CHECK(back.clearing == spec.clearing);
  CHECK(std::abs(back.constant - spec.constant) == 0.0);
}

TEST_CASE("singular sigmas are avoided by the FE sampler") {
  auto cal = calibrate_spec(CartanType::A2, 1);
  REQUIRE(cal.ok);
  ZetaGP zeta(cal.spec);
  auto sing = zeta.singular_sigmas();
  // the SL(3) closed form has poles at sigma = 0, 1/3, 2/3, 1
  auto has = [&](double v) {
    for (double s : sing)
      if (std::abs(s - v) < 1e-9) return true;
    return false;
  };
  CHECK(has(0.0));
  CHECK(has(1.0 / 3));
  CHECK(has(2.0 / 3));
  CHECK(has(1.0));
}
