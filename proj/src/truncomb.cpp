#include "weylzeta/truncomb.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <random>

#include "json.hpp"
#include "weylzeta/errors.hpp"
#include "weylzeta/parallel.hpp"

namespace weylzeta {

namespace {

using I128 = __int128;

int sign_of(const Rational& v) { return v.sign(); }
int sign_of(double v, double band) {
  if (std::abs(v) < band) return 0;
  return v > 0 ? 1 : -1;
}

template <typename S>
S dot_rows(const RatVec& row, const std::vector<S>& h);

template <>
Rational dot_rows(const RatVec& row, const std::vector<Rational>& h) {
  Rational acc(0);
  for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * h[k];
  return acc;
}

template <>
double dot_rows(const RatVec& row, const std::vector<double>& h) {
  double acc = 0;
  for (std::size_t k = 0; k < row.size(); ++k) acc += row[k].to_double() * h[k];
  return acc;
}

Tri all_positive(const std::vector<RatVec>& rows, const ChamberVector& h) {
  bool wall = false;
  for (const auto& r : rows) {
    int s = sign_of(dot_rows(r, h));
    if (s == 0) wall = true;
    if (s < 0) return Tri::no;
  }
  if (wall) return Tri::wall;
  return Tri::yes;
}

Tri all_positive_d(const std::vector<RatVec>& rows,
                   const std::vector<double>& h, double band) {
  bool wall = false;
  for (const auto& r : rows) {
    int s = sign_of(dot_rows(r, h), band);
    if (s == 0) wall = true;
    if (s < 0) return Tri::no;
  }
  if (wall) return Tri::wall;
  return Tri::yes;
}

unsigned full_mask(const RootSystem& rs) { return (1u << rs.rank) - 1; }

}  // namespace

Tri tau(const RootSystem& rs, unsigned mq, unsigned mp,
        const ChamberVector& h) {
  return all_positive(rs.pair_data(mq, mp).tau_rows, h);
}

Tri tau_hat(const RootSystem& rs, unsigned mq, unsigned mp,
            const ChamberVector& h) {
  return all_positive(rs.pair_data(mq, mp).tauhat_rows, h);
}

Tri tau_d(const RootSystem& rs, unsigned mq, unsigned mp,
          const std::vector<double>& h, double band) {
  return all_positive_d(rs.pair_data(mq, mp).tau_rows, h, band);
}

Tri tau_hat_d(const RootSystem& rs, unsigned mq, unsigned mp,
              const std::vector<double>& h, double band) {
  return all_positive_d(rs.pair_data(mq, mp).tauhat_rows, h, band);
}

Tri sigma_route_a(const RootSystem& rs, unsigned m1, unsigned m2,
                  const ChamberVector& h) {
  const unsigned full = full_mask(rs);
  int acc = 0;
  // sum over parabolics P3 with P3 >= P2 of (-1)^{|J3 \ J2|} tau_1^3 tauhat_3
  for (unsigned m3 = m2;; m3 = (m3 + 1) | m2) {
    if (m3 > full) break;
    Tri a = tau(rs, m1, m3, h);
    Tri b = tau_hat(rs, m3, full, h);
    if (a == Tri::wall || b == Tri::wall) return Tri::wall;
    if (a == Tri::yes && b == Tri::yes)
      acc += (std::popcount(m3 & ~m2) % 2 == 0) ? 1 : -1;
    if (m3 == full) break;
  }
  if (acc == 0) return Tri::no;
  if (acc == 1) return Tri::yes;
  std::abort();  // a characteristic function; anything else is a logic error
}

Tri sigma_route_b(const RootSystem& rs, unsigned m1, unsigned m2,
                  const ChamberVector& h) {
  const int n = rs.rank;
  const auto& proj1 = rs.proj_onto_a(m1);
  ChamberVector h1(n, Rational(0));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) h1[r] += proj1[r][c] * h[c];
  bool wall = false;
  auto alpha_at = [&](int j) {
    Rational acc(0);
    for (int k = 0; k < n; ++k) acc += Rational(rs.cartan[k][j]) * h1[k];
    return acc;
  };
  for (int j = 0; j < n; ++j) {
    if (m1 & (1u << j)) continue;  // alpha_j vanishes on a_1
    int s = sign_of(alpha_at(j));
    if (s == 0) wall = true;
    bool inside = (m2 & (1u << j)) != 0;
    if (inside && s < 0) return Tri::no;   // (i) alpha > 0 on Delta_1^2
    if (!inside && s > 0) return Tri::no;  // (ii) alpha <= 0 off Delta_1^2
  }
  Tri c = tau_hat(rs, m2, full_mask(rs), h);  // (iii) varpi > 0, hatDelta_2
  if (c == Tri::no) return Tri::no;
  if (c == Tri::wall || wall) return Tri::wall;
  return Tri::yes;
}

const char* trunc_identity_name(TruncIdentity id) {
  switch (id) {
    case TruncIdentity::lcl_tau_tauhat: return "LCL-tau-tauhat";
    case TruncIdentity::lcl_tauhat_tau: return "LCL-tauhat-tau";
    case TruncIdentity::lemma1_sigma: return "Lemma1-sigma";
    case TruncIdentity::lemma2_phi: return "Lemma2-phi";
  }
  return "?";
}

std::optional<TruncIdentity> parse_trunc_identity(const std::string& s) {
  if (s == "LCL-tau-tauhat") return TruncIdentity::lcl_tau_tauhat;
  if (s == "LCL-tauhat-tau") return TruncIdentity::lcl_tauhat_tau;
  if (s == "Lemma1-sigma") return TruncIdentity::lemma1_sigma;
  if (s == "Lemma2-phi") return TruncIdentity::lemma2_phi;
  return std::nullopt;
}

namespace {

struct SampleOutcome {
  int status = 0;  // 0 ok, 1 violation, 2 wall
  std::string witness;
};

std::string vec_str(const ChamberVector& h) {
  std::string s = "(";
  for (std::size_t i = 0; i < h.size(); ++i)
    s += (i ? "," : "") + h[i].str();
  return s + ")";
}

// Langlands' combinatorial lemma, both displayed sums.
SampleOutcome check_lcl(const RootSystem& rs, unsigned mq, unsigned mp,
                        const ChamberVector& h, bool tau_first) {
  int acc = 0;
  for (unsigned mr = mq;; mr = (mr + 1) | mq) {
    if (mr > mp) break;
    if ((mr & mp) == mr) {
      Tri a = tau_first ? tau(rs, mq, mr, h) : tau_hat(rs, mq, mr, h);
      Tri b = tau_first ? tau_hat(rs, mr, mp, h) : tau(rs, mr, mp, h);
      if (a == Tri::wall || b == Tri::wall) return {2, ""};
      if (a == Tri::yes && b == Tri::yes) {
        int par = tau_first ? std::popcount(mp & ~mr)   // dim(A_R/A_P)
                            : std::popcount(mr & ~mq);  // dim(A_Q/A_R)
        acc += (par % 2 == 0) ? 1 : -1;
      }
    }
    if (mr == mp) break;
  }
  int expect = (mq == mp) ? 1 : 0;
  if (acc != expect)
    return {1, "Q=" + std::to_string(mq) + " P=" + std::to_string(mp) +
                   " H=" + vec_str(h) + " sum=" + std::to_string(acc)};
  return {0, ""};
}

SampleOutcome check_sigma(const RootSystem& rs, unsigned m1, unsigned m2,
                          const ChamberVector& h) {
  Tri a = sigma_route_a(rs, m1, m2, h);
  Tri b = sigma_route_b(rs, m1, m2, h);
  if (a == Tri::wall || b == Tri::wall) return {2, ""};
  if (a != b)
    return {1, "P1=" + std::to_string(m1) + " P2=" + std::to_string(m2) +
                   " H=" + vec_str(h) + " routeA=" +
                   std::to_string(a == Tri::yes) + " routeB=" +
                   std::to_string(b == Tri::yes)};
  return {0, ""};
}

// Arthur's Lemma 2 with epsilon_Q^R(Lambda), phi_Q^R(Lambda, H).
SampleOutcome check_lemma2(const RootSystem& rs, unsigned mq, unsigned mp,
                           const ChamberVector& h, const RatVec& lambda) {
  auto lam_pair = [&](unsigned mr, int i) {
    // Lambda(alpha^vee) over (Delta_Q^R)^vee = proj_{a_Q}(beta^vee)
    const auto& pd = rs.pair_data(mq, mr);
    Rational acc(0);
    for (int k = 0; k < rs.rank; ++k) acc += lambda[k] * pd.covec[i][k];
    return acc;
  };
  int acc = 0;
  bool wall = false;
  for (unsigned mr = mq;; mr = (mr + 1) | mq) {
    if (mr > mp) break;
    if ((mr & mp) == mr) {
      const auto& pd = rs.pair_data(mq, mr);
      int eps = 1;
      bool phi_ok = true;
      for (std::size_t i = 0; i < pd.delta.size() && phi_ok; ++i) {
        bool lam_nonpos = lam_pair(mr, static_cast<int>(i)).sign() <= 0;
        if (lam_nonpos) eps = -eps;
        int sh = sign_of(dot_rows(pd.tauhat_rows[i], h));
        if (sh == 0) {
          wall = true;
          break;
        }
        // phi: varpi(H) > 0 where Lambda(alpha^vee) <= 0, else varpi(H) <= 0
        phi_ok = lam_nonpos ? (sh > 0) : (sh < 0);
      }
      if (wall) return {2, ""};
      if (phi_ok) {
        Tri t = tau(rs, mr, mp, h);
        if (t == Tri::wall) return {2, ""};
        if (t == Tri::yes) acc += eps;
      }
    }
    if (mr == mp) break;
  }
  const auto& pd_qp = rs.pair_data(mq, mp);
  int expect = 1;
  for (std::size_t i = 0; i < pd_qp.delta.size(); ++i) {
    Rational acc2(0);
    for (int k = 0; k < rs.rank; ++k) acc2 += lambda[k] * pd_qp.covec[i][k];
    if (acc2.sign() <= 0) expect = 0;
  }
  if (acc != expect)
    return {1, "Q=" + std::to_string(mq) + " P=" + std::to_string(mp) +
                   " H=" + vec_str(h) + " Lambda=" + vec_str(lambda) +
                   " sum=" + std::to_string(acc) +
                   " expect=" + std::to_string(expect)};
  return {0, ""};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ChamberVector random_h(int rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> dist(-999983, 999983);
  ChamberVector h(rank);
  for (int i = 0; i < rank; ++i) h[i] = Rational(dist(rng));
  return h;
}

RatVec random_lambda(int rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // small range so Lambda(alpha^vee) = 0 cases (the epsilon boundary) occur
  std::uniform_int_distribution<long long> dist(-6, 6);
  RatVec l(rank);
  for (int i = 0; i < rank; ++i) l[i] = Rational(dist(rng));
  return l;
}

}  // namespace

std::vector<ChamberVector> enumerate_chambers(const RootSystem& rs) {
  const int n = rs.rank;
  if (n == 1) return {{Rational(1)}, {Rational(-1)}};
  if (n != 2)
    throw ConfigError("enumerate_chambers: exhaustive mode is rank <= 2");
  // Every functional any predicate tests: the root functionals plus the
  // projected tau/tauhat rows of all nested pairs. Sectors of this refined
  // arrangement are exactly the loci where every predicate is constant, so
  // one interior point per sector is an exhaustive check with no walls.
  std::vector<std::array<long long, 2>> lines;
  auto add_row = [&](const RatVec& row) {
    Rational a = row[0], b = row[1];
    if (a.is_zero() && b.is_zero()) return;
    long long l = std::lcm(static_cast<long long>(a.den()),
                           static_cast<long long>(b.den()));
    long long x = static_cast<long long>((a * Rational(l)).num());
    long long y = static_cast<long long>((b * Rational(l)).num());
    long long g = std::gcd(std::abs(x), std::abs(y));
    x /= g;
    y /= g;
    if (x < 0 || (x == 0 && y < 0)) {
      x = -x;
      y = -y;
    }
    lines.push_back({x, y});
  };
  for (const auto& root : rs.positive_roots) {
    RatVec row(n, Rational(0));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        row[k] += Rational(root[j] * rs.cartan[k][j]);
    add_row(row);
  }
  for (unsigned mq = 0; mq < 4u; ++mq)
    for (unsigned mp = mq; mp < 4u; mp = (mp + 1) | mq) {
      const auto& pd = rs.pair_data(mq, mp);
      for (const auto& r : pd.tau_rows) add_row(r);
      for (const auto& r : pd.tauhat_rows) add_row(r);
      if (mp == 3u) break;
    }
  // alpha_j composed with proj_{a_m} (sigma route B)
  for (unsigned m = 0; m < 4u; ++m) {
    const auto& proj = rs.proj_onto_a(m);
    for (int j = 0; j < n; ++j) {
      if (m & (1u << j)) continue;
      RatVec row(n, Rational(0));
      for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r)
          row[k] += Rational(rs.cartan[r][j]) * proj[r][k];
      add_row(row);
    }
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());

  std::vector<std::array<long long, 2>> rays;
  for (const auto& l : lines) {
    rays.push_back({-l[1], l[0]});
    rays.push_back({l[1], -l[0]});
  }
  auto upper = [](const std::array<long long, 2>& d) {
    return d[1] > 0 || (d[1] == 0 && d[0] > 0);
  };
  std::sort(rays.begin(), rays.end(),
            [&](const auto& p, const auto& q) {
              if (upper(p) != upper(q)) return upper(p);
              I128 cross = I128(p[0]) * q[1] - I128(p[1]) * q[0];
              return cross > 0;
            });
  std::vector<ChamberVector> reps;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const auto& d1 = rays[i];
    const auto& d2 = rays[(i + 1) % rays.size()];
    reps.push_back({Rational(d1[0] + d2[0]), Rational(d1[1] + d2[1])});
  }
  if (reps.size() != rays.size())
    throw std::logic_error("chamber enumeration lost a sector");
  return reps;
}

IdentityReport identity_check(const RootSystem& rs, TruncIdentity id,
                              std::size_t n_samples, std::uint64_t seed) {
  IdentityReport rep;
  rep.root_system = cartan_type_name(rs.label);
  rep.identity = trunc_identity_name(id);
  rep.seed = seed;
  rep.exhaustive = rs.rank <= 2;

  std::vector<ChamberVector> samples;
  std::vector<RatVec> lambdas;
  if (rep.exhaustive) {
    samples = enumerate_chambers(rs);
    for (std::size_t i = 0; i < samples.size(); ++i)
      lambdas.push_back(random_lambda(rs.rank, splitmix64(seed ^ (i + 77))));
    // keep the concrete Lambda = rho case in the exhaustive sweep
    lambdas[0] = RatVec(rs.rank, Rational(1));
  } else {
    for (std::size_t i = 0; i < n_samples; ++i) {
      samples.push_back(random_h(rs.rank, splitmix64(seed ^ i)));
      lambdas.push_back(random_lambda(rs.rank, splitmix64(seed ^ (i * 3 + 1))));
    }
  }

  // All nested pairs (Q, P).
  std::vector<std::pair<unsigned, unsigned>> pairs;
  const unsigned full = (1u << rs.rank);
  for (unsigned mq = 0; mq < full; ++mq)
    for (unsigned mp = mq; mp < full; mp = ((mp + 1) | mq)) {
      pairs.emplace_back(mq, mp);
      if (mp == full - 1) break;
    }
  rep.pairs_checked = pairs.size();

  std::vector<SampleOutcome> out(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    for (const auto& [mq, mp] : pairs) {
      SampleOutcome r;
      switch (id) {
        case TruncIdentity::lcl_tau_tauhat:
          r = check_lcl(rs, mq, mp, samples[i], true);
          break;
        case TruncIdentity::lcl_tauhat_tau:
          r = check_lcl(rs, mq, mp, samples[i], false);
          break;
        case TruncIdentity::lemma1_sigma:
          r = check_sigma(rs, mq, mp, samples[i]);
          break;
        case TruncIdentity::lemma2_phi:
          r = check_lemma2(rs, mq, mp, samples[i], lambdas[i]);
          break;
      }
      if (r.status != 0) {
        out[i].status = std::max(out[i].status, r.status);
        if (r.status == 1 && out[i].witness.empty()) out[i].witness = r.witness;
      }
    }
  });
  for (const auto& r : out) {
    if (r.status == 1)
      rep.violations.push_back(r.witness);
    else if (r.status == 2)
      ++rep.walls_skipped;
    ++rep.evaluations;
  }
  rep.evaluations *= pairs.size();
  return rep;
}

std::string IdentityReport::to_json() const {
  nlohmann::json j;
  j["root_system"] = root_system;
  j["identity"] = identity;
  j["exhaustive"] = exhaustive;
  j["seed"] = seed;
  j["pairs_checked"] = pairs_checked;
  j["evaluations"] = evaluations;
  j["walls_skipped"] = walls_skipped;
  j["violations"] = violations;
  j["pass"] = pass();
  return j.dump(2);
}

}  // namespace weylzeta
