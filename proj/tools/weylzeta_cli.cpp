#include <complex>
#include <random>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "weylzeta/eisenstein.hpp"
#include "weylzeta/errors.hpp"
#include "weylzeta/lattice.hpp"
#include "weylzeta/parallel.hpp"
#include "weylzeta/periods.hpp"
#include "weylzeta/rootdata.hpp"
#include "weylzeta/truncomb.hpp"

namespace wz = weylzeta;
using wz::cd;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw wz::ConfigError("cannot open output file " + out_path);
  f << text << "\n";
}

// parabolic names per group; alpha_p is the simple root *not* in the Levi
int parse_parabolic(wz::CartanType g, const std::string& name) {
  using wz::CartanType;
  auto bad = [&]() -> int {
    throw wz::ConfigError("unknown parabolic '" + name + "' for group " +
                          wz::cartan_type_name(g));
  };
  switch (g) {
    case CartanType::A1:
      if (name == "P11" || name == "P1" || name.empty()) return 0;
      return bad();
    case CartanType::A2:
      if (name == "P21") return 1;
      if (name == "P12") return 0;
      return bad();
    case CartanType::A3:
      if (name == "P31") return 2;
      if (name == "P22") return 1;
      if (name == "P13") return 0;
      return bad();
    case CartanType::A4:
      if (name == "P41") return 3;
      if (name == "P14") return 0;
      if (name == "P32") return 2;
      if (name == "P23") return 1;
      return bad();
    case CartanType::C2:
      // alpha_1 short, alpha_2 long
      if (name == "P_short" || name == "P1") return 0;
      if (name == "P_long" || name == "P2") return 1;
      return bad();
    case CartanType::G2:
      // alpha_1 long, alpha_2 short
      if (name == "P_long" || name == "P1") return 0;
      if (name == "P_short" || name == "P2") return 1;
      return bad();
  }
  return bad();
}

std::string preset_filename(const std::string& group, const std::string& par) {
  std::string s = group + "_" + par;
  for (char& c : s) c = static_cast<char>(std::tolower(c));
  return s + ".json";
}

wz::ZetaSpec load_or_calibrate(const std::string& group_s,
                               const std::string& parab_s,
                               const std::string& spec_file,
                               const std::string& data_dir, bool calibrate) {
  if (!spec_file.empty()) {
    std::ifstream f(spec_file);
    if (!f) throw wz::ConfigError("cannot read spec file " + spec_file);
    std::stringstream ss;
    ss << f.rdbuf();
    return wz::ZetaSpec::from_json(ss.str());
  }
  auto g = wz::parse_cartan_type(group_s);
  if (!g) throw wz::ConfigError("unknown group label " + group_s);
  int alpha_p = parse_parabolic(*g, parab_s);
  if (!calibrate) {
    std::string path = data_dir + "/" + preset_filename(group_s, parab_s);
    std::ifstream f(path);
    if (f) {
      std::stringstream ss;
      ss << f.rdbuf();
      return wz::ZetaSpec::from_json(ss.str());
    }
    std::cerr << "note: preset " << path << " not found, calibrating\n";
  }
  std::function<cd(cd)> anchor;
  if (*g == wz::CartanType::A1)
    anchor = [](cd s) { return wz::rank2_zeta(s); };
  if (*g == wz::CartanType::A2)
    anchor = [](cd s) { return wz::sl3_closed_form(s); };
  auto cal = wz::calibrate_spec(*g, alpha_p, anchor);
  if (!cal.ok)
    throw wz::ConfigError("calibration failed for " + group_s + "/" + parab_s +
                          ": " + cal.note);
  cal.spec.parabolic = parab_s;
  return cal.spec;
}

std::string format_cd(cd v) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.15g %+.15gi", v.real(), v.imag());
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weylzeta: high-rank abelian zeta laboratory"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  // ---- rootdata dump ----
  auto* rd = app.add_subcommand("rootdata", "root-system utilities");
  rd->require_subcommand(1);
  auto* rd_dump = rd->add_subcommand("dump", "dump root data as JSON");
  std::string rd_type = "A2", rd_out;
  rd_dump->add_option("--type", rd_type, "Cartan type (A1..A4, C2, G2)");
  rd_dump->add_option("-o,--output", rd_out, "output file (default stdout)");

  // ---- zeta ----
  auto* zt = app.add_subcommand("zeta", "(G,P) zeta functions");
  zt->require_subcommand(1);
  std::string zt_group = "SL2", zt_par = "P11", zt_spec, zt_out, zt_data =
      "data/specs";
  bool zt_csv = false, zt_force_cal = false;
  int zt_samples = 20;
  std::uint64_t zt_seed = 20240229;
  double zt_tol = 1e-6, zt_sigma_re = 2.0, zt_sigma_im = 0.0, zt_tmax = 15.0;
  for (auto* sc : {zt->add_subcommand("eval", "evaluate the zeta at sigma"),
                   zt->add_subcommand("fe", "functional-equation check"),
                   zt->add_subcommand("zeros", "critical-line zero scan"),
                   zt->add_subcommand("calibrate", "calibrate the Norm spec")}) {
    sc->add_option("--group", zt_group, "SL2..SL5 / Sp4 / G2 (or A1..A4,C2)");
    sc->add_option("--parabolic", zt_par, "P21, P31, P_long, ...");
    sc->add_option("--spec", zt_spec, "explicit ZetaSpec JSON file");
    sc->add_option("--data-dir", zt_data, "preset directory");
    sc->add_option("-o,--output", zt_out, "output file");
    sc->add_flag("--csv", zt_csv, "CSV instead of JSON where applicable");
  }
  zt->get_subcommand("eval")->add_option("--sigma-re", zt_sigma_re);
  zt->get_subcommand("eval")->add_option("--sigma-im", zt_sigma_im);
  zt->get_subcommand("fe")->add_option("--samples", zt_samples);
  zt->get_subcommand("fe")->add_option("--seed", zt_seed);
  zt->get_subcommand("fe")->add_option("--tol", zt_tol);
  zt->get_subcommand("zeros")->add_option("--t-max", zt_tmax);
  zt->get_subcommand("calibrate")->add_flag("--force", zt_force_cal,
                                            "ignore shipped preset");
  zt->get_subcommand("calibrate")->add_option("--seed", zt_seed);

  // ---- epstein ----
  auto* ep = app.add_subcommand("epstein", "rank-2 Epstein/Eisenstein");
  ep->require_subcommand(1);
  double ep_x = 0.0, ep_y = 1.0, ep_sre = 2.0, ep_sim = 0.0;
  bool ep_direct = false;
  std::string ep_out;
  auto* ep_eval = ep->add_subcommand("eval", "evaluate completed E(z;s)");
  ep_eval->add_option("--x", ep_x);
  ep_eval->add_option("--y", ep_y);
  ep_eval->add_option("--s-re", ep_sre);
  ep_eval->add_option("--s-im", ep_sim);
  ep_eval->add_flag("--direct", ep_direct, "direct lattice sum (Re s > 1)");
  auto* ep_rs = ep->add_subcommand("rs-check",
                                   "geometric truncation vs closed form");
  ep_rs->add_option("-o,--output", ep_out, "CSV output file");

  // ---- lattice ----
  auto* lt = app.add_subcommand("lattice", "rank-2 lattice laboratory");
  lt->require_subcommand(1);
  std::vector<double> lt_basis = {1.0, 0.0, 0.0, 1.0};
  std::vector<double> lt_tau;
  int lt_samples = 10000;
  std::uint64_t lt_seed = 7;
  std::string lt_out;
  for (auto* sc : {lt->add_subcommand("h0", "geo-arithmetic h^0"),
                   lt->add_subcommand("rr", "Riemann-Roch defect"),
                   lt->add_subcommand("hn", "Harder-Narasimhan polygon"),
                   lt->add_subcommand("semistable", "two-route verdict"),
                   lt->add_subcommand("bridge",
                                      "Micro Bridge / Fundamental Relation / "
                                      "Arthur truncation sampling")}) {
    sc->add_option("--basis", lt_basis, "b1x b1y b2x b2y")->expected(4);
    sc->add_option("--tau", lt_tau,
                   "x y: volume-one lattice with shape x+iy instead of a basis")
        ->expected(2);
    sc->add_option("-o,--output", lt_out, "output file");
  }
  lt->get_subcommand("bridge")->add_option("--samples", lt_samples);
  lt->get_subcommand("bridge")->add_option("--seed", lt_seed);

  // ---- truncomb ----
  auto* tc = app.add_subcommand("truncomb", "truncation combinatorics");
  tc->require_subcommand(1);
  auto* tc_check = tc->add_subcommand("check", "verify one identity");
  std::string tc_type = "A3", tc_id = "LCL-tau-tauhat", tc_out;
  int tc_samples = 10000;
  std::uint64_t tc_seed = 20240229;
  tc_check->add_option("--type", tc_type);
  tc_check->add_option("--identity", tc_id,
                       "LCL-tau-tauhat | LCL-tauhat-tau | Lemma1-sigma | "
                       "Lemma2-phi");
  tc_check->add_option("--samples", tc_samples);
  tc_check->add_option("--seed", tc_seed);
  tc_check->add_option("-o,--output", tc_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  wz::thread_count() = threads;

  try {
    if (rd_dump->parsed()) {
      auto t = wz::parse_cartan_type(rd_type);
      if (!t) throw wz::ConfigError("unknown Cartan type " + rd_type);
      emit(wz::build_root_system(*t).dump_json(), rd_out);
      return kExitPass;
    }

    if (zt->parsed()) {
      if (zt->get_subcommand("calibrate")->parsed()) {
        auto g = wz::parse_cartan_type(zt_group);
        if (!g) throw wz::ConfigError("unknown group label " + zt_group);
        std::function<cd(cd)> anchor;
        if (*g == wz::CartanType::A1)
          anchor = [](cd s) { return wz::rank2_zeta(s); };
        if (*g == wz::CartanType::A2)
          anchor = [](cd s) { return wz::sl3_closed_form(s); };
        auto cal = wz::calibrate_spec(*g, parse_parabolic(*g, zt_par), anchor,
                                      20, zt_seed);
        if (!cal.ok) {
          std::cerr << cal.note << "\n";
          return kExitCheckFailed;
        }
        cal.spec.parabolic = zt_par;
        nlohmann::json j = nlohmann::json::parse(cal.spec.to_json());
        j["calibration"] = {{"fe_deviation", cal.deviation},
                            {"seed", zt_seed},
                            {"note", cal.note}};
        emit(j.dump(2), zt_out);
        return kExitPass;
      }
      wz::ZetaSpec spec = load_or_calibrate(zt_group, zt_par, zt_spec, zt_data,
                                            false);
      wz::ZetaGP zeta(spec);
      if (zt->get_subcommand("eval")->parsed()) {
        cd v = zeta.eval(cd(zt_sigma_re, zt_sigma_im));
        nlohmann::json j;
        j["group"] = zt_group;
        j["parabolic"] = zt_par;
        j["sigma"] = {zt_sigma_re, zt_sigma_im};
        j["value"] = {v.real(), v.imag()};
        j["value_str"] = format_cd(v);
        emit(j.dump(2), zt_out);
        return kExitPass;
      }
      if (zt->get_subcommand("fe")->parsed()) {
        auto rep = wz::fe_check(zeta, zt_samples, zt_seed, zt_tol);
        emit(zt_csv ? rep.to_csv() : rep.to_json(), zt_out);
        std::cerr << "fe max relative deviation " << rep.max_rel_dev
                  << (rep.pass() ? " (pass)" : " (FAIL)") << "\n";
        return rep.pass() ? kExitPass : kExitCheckFailed;
      }
      if (zt->get_subcommand("zeros")->parsed()) {
        auto shared = std::make_shared<wz::ZetaGP>(std::move(zeta));
        auto rep = wz::find_zeros(
            [shared](cd s) { return shared->eval(s); },
            zt_group + "/" + zt_par, zt_tmax);
        emit(zt_csv ? rep.to_csv() : rep.to_json(), zt_out);
        std::cerr << "zeros located " << rep.zeros.size() << ", winding "
                  << rep.winding << ", max |Re-1/2| " << rep.max_re_dev
                  << "\n";
        return rep.pass(1e-6) ? kExitPass : kExitCheckFailed;
      }
    }

    if (ep->parsed()) {
      if (ep_eval->parsed()) {
        wz::UpperHalfPoint z{ep_x, ep_y};
        cd s(ep_sre, ep_sim);
        cd v = ep_direct ? wz::epstein_direct(z, s) : wz::epstein_fourier(z, s);
        nlohmann::json j;
        j["z"] = {ep_x, ep_y};
        j["s"] = {ep_sre, ep_sim};
        j["algorithm"] = ep_direct ? "direct" : "fourier";
        j["value"] = {v.real(), v.imag()};
        j["value_str"] = format_cd(v);
        emit(j.dump(2), "");
        return kExitPass;
      }
      if (ep_rs->parsed()) {
        std::ostringstream os;
        os << "s_re,s_im,T,geo_re,geo_im,closed_re,closed_im,abs_deviation\n";
        double worst = 0.0;
        for (cd s : {cd(1.5, 0), cd(2, 0), cd(2.5, 1)})
          for (double t_cut : {1.0, 2.0, 5.0}) {
            cd geo = wz::truncated_integral_geo(s, t_cut, 1e-7);
            cd closed = wz::truncated_integral_closed(s, t_cut);
            double dev = std::abs(geo - closed);
            worst = std::max(worst, dev);
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "%.3g,%.3g,%.3g,%.15g,%.15g,%.15g,%.15g,%.3e\n",
                          s.real(), s.imag(), t_cut, geo.real(), geo.imag(),
                          closed.real(), closed.imag(), dev);
            os << buf;
          }
        emit(os.str(), ep_out);
        std::cerr << "worst |geo - closed| = " << worst << "\n";
        return worst <= 1e-5 ? kExitPass : kExitCheckFailed;
      }
    }

    if (lt->parsed()) {
      if (!lt_tau.empty()) {
        if (!(lt_tau[1] > 0))
          throw wz::ConfigError("--tau needs y > 0");
        double r = 1.0 / std::sqrt(lt_tau[1]);
        lt_basis = {r, 0.0, r * lt_tau[0], r * lt_tau[1]};
      }
      wz::LatticeBasis basis({lt_basis[0], lt_basis[1]},
                             {lt_basis[2], lt_basis[3]});
      nlohmann::json j;
      j["basis"] = lt_basis;
      if (lt->get_subcommand("h0")->parsed()) {
        j["h0"] = wz::h0(basis);
        j["degree"] = basis.degree();
        emit(j.dump(2), lt_out);
        return kExitPass;
      }
      if (lt->get_subcommand("rr")->parsed()) {
        double defect = wz::rr_defect(basis);
        j["h0"] = wz::h0(basis);
        j["h0_dual"] = wz::h0(basis.dual());
        j["degree"] = basis.degree();
        j["rr_defect"] = defect;
        j["pass"] = std::abs(defect) <= 1e-9;
        emit(j.dump(2), lt_out);
        return std::abs(defect) <= 1e-9 ? kExitPass : kExitCheckFailed;
      }
      if (lt->get_subcommand("hn")->parsed()) {
        auto p = wz::hn_polygon(basis);
        auto [tau, u] = wz::reduce_to_fundamental_domain(basis);
        j["polygon"] = p.vals;
        j["reduced_point"] = {tau.x, tau.y};
        j["transform"] = {{u[0][0], u[0][1]}, {u[1][0], u[1][1]}};
        emit(j.dump(2), lt_out);
        return kExitPass;
      }
      if (lt->get_subcommand("semistable")->parsed()) {
        auto v = wz::is_semistable(basis);
        j["hn_route"] = v.hn_semistable;
        j["cusp_route"] = v.cusp_semistable;
        j["boundary"] = v.boundary;
        j["agree"] = v.agree();
        emit(j.dump(2), lt_out);
        return v.agree() ? kExitPass : kExitCheckFailed;
      }
      if (lt->get_subcommand("bridge")->parsed()) {
        std::mt19937_64 rng(lt_seed);
        std::uniform_real_distribution<double> ua(-1.5, 1.5), ux(-3, 3),
            uth(0, 6.2831853), up(0, 1.2), ut(0, 2.5);
        long ties = 0, fails = 0;
        for (int i = 0; i < lt_samples; ++i) {
          wz::GroupPoint g{std::exp(ua(rng)), ux(rng), uth(rng)};
          auto r1 = wz::micro_bridge_check(g, wz::Polygon::rank2(up(rng)));
          auto r2 = wz::fundamental_relation_check(
              g, wz::Polygon::rank2(up(rng)));
          auto r3 = wz::arthur_truncation_one(g, ut(rng));
          if (!r1 || !r2 || !r3) {
            ++ties;
            continue;
          }
          if (!r1->agree() || !r2->agree() || !r3->equal()) ++fails;
        }
        j["samples"] = lt_samples;
        j["seed"] = lt_seed;
        j["ties_skipped"] = ties;
        j["violations"] = fails;
        j["pass"] = fails == 0;
        emit(j.dump(2), lt_out);
        return fails == 0 ? kExitPass : kExitCheckFailed;
      }
    }

    if (tc_check->parsed()) {
      auto t = wz::parse_cartan_type(tc_type);
      if (!t) throw wz::ConfigError("unknown Cartan type " + tc_type);
      auto id = wz::parse_trunc_identity(tc_id);
      if (!id) throw wz::ConfigError("unknown identity " + tc_id);
      auto rs = wz::build_root_system(*t);
      auto rep = wz::identity_check(rs, *id, tc_samples, tc_seed);
      emit(rep.to_json(), tc_out);
      return rep.pass() ? kExitPass : kExitCheckFailed;
    }
  } catch (const wz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  std::cerr << "no subcommand executed\n";
  return kExitUsage;
}
