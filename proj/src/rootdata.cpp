#include "weylzeta/rootdata.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "weylzeta/errors.hpp"

namespace weylzeta {

std::optional<CartanType> parse_cartan_type(const std::string& label) {
  if (label == "A1" || label == "SL2") return CartanType::A1;
  if (label == "A2" || label == "SL3") return CartanType::A2;
  if (label == "A3" || label == "SL4") return CartanType::A3;
  if (label == "A4" || label == "SL5") return CartanType::A4;
  if (label == "C2" || label == "Sp4") return CartanType::C2;
  if (label == "G2") return CartanType::G2;
  return std::nullopt;
}

std::string cartan_type_name(CartanType t) {
  switch (t) {
    case CartanType::A1: return "A1";
    case CartanType::A2: return "A2";
    case CartanType::A3: return "A3";
    case CartanType::A4: return "A4";
    case CartanType::C2: return "C2";
    case CartanType::G2: return "G2";
  }
  return "?";
}

namespace {

// cartan[k][i] = <alpha_i, alpha_k^vee>
IntMat cartan_matrix(CartanType t) {
  switch (t) {
    case CartanType::A1: return {{2}};
    case CartanType::A2: return {{2, -1}, {-1, 2}};
    case CartanType::A3: return {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    case CartanType::A4:
      return {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}};
    // alpha_1 short, alpha_2 long: <alpha_2, alpha_1^vee> = -2.
    case CartanType::C2: return {{2, -2}, {-1, 2}};
    // alpha_1 long, alpha_2 short: <alpha_1, alpha_2^vee> = -3.
    case CartanType::G2: return {{2, -1}, {-3, 2}};
  }
  throw ConfigError("unsupported Cartan type");
}

IntVec symmetrizer_for(const IntMat& c) {
  // minimal positive d with d_i c[i][j] = d_j c[j][i]
  int n = static_cast<int>(c.size());
  std::vector<Rational> d(n, Rational(0));
  d[0] = 1;
  for (int pass = 0; pass < n; ++pass)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (c[i][j] != 0 && !d[i].is_zero() && d[j].is_zero())
          d[j] = d[i] * Rational(c[i][j]) / Rational(c[j][i]);
  long long lcm = 1;
  for (auto& x : d) lcm = std::lcm(lcm, static_cast<long long>(x.den()));
  IntVec out(n);
  for (int i = 0; i < n; ++i)
    out[i] = static_cast<long long>((d[i] * Rational(lcm)).num());
  return out;
}

IntVec mat_apply(const IntMat& m, const IntVec& v) {
  int n = static_cast<int>(v.size());
  IntVec r(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += m[i][j] * v[j];
  return r;
}

IntMat matmul(const IntMat& a, const IntMat& b) {
  int n = static_cast<int>(a.size());
  IntMat r(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

IntMat identity(int n) {
  IntMat r(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) r[i][i] = 1;
  return r;
}

std::string mat_key(const IntMat& m) {
  std::string k;
  for (auto& row : m)
    for (auto v : row) k += std::to_string(v) + ",";
  return k;
}

}  // namespace

RatVec solve_linear(std::vector<RatVec> rows, RatVec rhs) {
  const std::size_t n = rows.size();
  const std::size_t m = n ? rows[0].size() : 0;
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    std::size_t p = r;
    while (p < n && rows[p][c].is_zero()) ++p;
    if (p == n) continue;
    std::swap(rows[p], rows[r]);
    std::swap(rhs[p], rhs[r]);
    Rational inv = Rational(1) / rows[r][c];
    for (std::size_t j = c; j < m; ++j) rows[r][j] *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Rational f = rows[i][c];
      for (std::size_t j = c; j < m; ++j) rows[i][j] -= f * rows[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (!rhs[i].is_zero())
      throw std::logic_error("solve_linear: inconsistent system");
  RatVec x(m, Rational(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

namespace {

// Projection onto a_J = {H : alpha_i(H) = 0, i in J} along span{e_j : j in J},
// as a rank x rank rational matrix (columns = images of e_k).
std::vector<RatVec> proj_onto_aJ(const IntMat& cartan, unsigned mask, int rank) {
  std::vector<int> J;
  for (int j = 0; j < rank; ++j)
    if (mask & (1u << j)) J.push_back(j);
  std::vector<RatVec> proj(rank, RatVec(rank, Rational(0)));
  for (int k = 0; k < rank; ++k) proj[k][k] = 1;
  if (J.empty()) return proj;
  const int m = static_cast<int>(J.size());
  for (int k = 0; k < rank; ++k) {
    std::vector<RatVec> M(m, RatVec(m, Rational(0)));
    RatVec b(m, Rational(0));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) M[i][j] = Rational(cartan[J[j]][J[i]]);
      b[i] = Rational(cartan[k][J[i]]);
    }
    RatVec x = solve_linear(M, b);
    for (int j = 0; j < m; ++j) proj[J[j]][k] -= x[j];
  }
  return proj;
}

RatVec mat_col(const std::vector<RatVec>& m, int c) {
  RatVec col(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) col[i] = m[i][c];
  return col;
}

}  // namespace

std::vector<int> RootSystem::inversion_set(const WeylElement& w) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < positive_roots.size(); ++i) {
    IntVec img = mat_apply(w.mr, positive_roots[i]);
    bool nonpos = true;
    for (auto v : img) nonpos = nonpos && v <= 0;
    if (nonpos) out.push_back(static_cast<int>(i));
  }
  return out;
}

long long RootSystem::coroot_height(int idx) const {
  long long h = 0;
  for (auto v : coroots[idx]) h += v;
  return h;
}

const ParabolicPairData& RootSystem::pair_data(unsigned mask_q,
                                               unsigned mask_p) const {
  if ((mask_q & mask_p) != mask_q)
    throw ConfigError("pair_data: Q must be contained in P");
  auto it = pairs_.find(mask_q | (mask_p << 16));
  if (it == pairs_.end()) throw ConfigError("pair_data: unknown pair");
  return it->second;
}

RootSystem build_root_system(CartanType label) {
  RootSystem rs;
  rs.label = label;
  rs.cartan = cartan_matrix(label);
  rs.rank = static_cast<int>(rs.cartan.size());
  rs.symmetrizer = symmetrizer_for(rs.cartan);
  const int n = rs.rank;

  // Simple-reflection matrices on root coordinates:
  //   s_i(alpha_j) = alpha_j - cartan[i][j] alpha_i.
  std::vector<IntMat> refl_root(n, identity(n));
  // ... and on fundamental-weight coordinates:
  //   (s_i lambda)_k = lambda_k - lambda_i cartan[k][i].
  std::vector<IntMat> refl_wt(n, identity(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      refl_root[i][i][k] -= rs.cartan[i][k];
      refl_wt[i][k][i] -= rs.cartan[k][i];
    }

  // Positive roots: orbit of the simple roots, keep the positive half.
  std::set<IntVec> seen;
  std::deque<IntVec> queue;
  for (int i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    seen.insert(e);
    queue.push_back(e);
  }
  while (!queue.empty()) {
    IntVec v = queue.front();
    queue.pop_front();
    for (int i = 0; i < n; ++i) {
      IntVec img = mat_apply(refl_root[i], v);
      if (seen.insert(img).second) queue.push_back(img);
    }
  }
  for (const auto& v : seen) {
    bool pos = true;
    for (auto x : v) pos = pos && x >= 0;
    if (pos) rs.positive_roots.push_back(v);
  }
  std::sort(rs.positive_roots.begin(), rs.positive_roots.end(),
            [](const IntVec& a, const IntVec& b) {
              long long ha = 0, hb = 0;
              for (auto x : a) ha += x;
              for (auto x : b) hb += x;
              return ha != hb ? ha < hb : a > b;  // puts alpha_i at index i
            });

  // Coroots: alpha^vee = (2/(alpha,alpha)) sum_j n_j d_j alpha_j^vee with
  // (alpha_i,alpha_j) = d_i cartan[i][j].
  for (const auto& nvec : rs.positive_roots) {
    Rational norm2(0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        norm2 += Rational(nvec[i] * nvec[j] * rs.symmetrizer[i] *
                          rs.cartan[i][j]);
    IntVec cv(n);
    for (int j = 0; j < n; ++j) {
      Rational c = Rational(2 * nvec[j] * rs.symmetrizer[j]) / norm2;
      if (c.den() != 1)
        throw std::logic_error("coroot coordinates must be integral");
      cv[j] = static_cast<long long>(c.num());
    }
    rs.coroots.push_back(cv);
  }

  // Weyl group by breadth-first closure, identity first, dedup by matrix.
  std::map<std::string, std::size_t> known;
  WeylElement id{{}, identity(n), identity(n)};
  rs.weyl_.push_back(id);
  known[mat_key(id.mw)] = 0;
  for (std::size_t head = 0; head < rs.weyl_.size(); ++head) {
    WeylElement w = rs.weyl_[head];
    for (int i = 0; i < n; ++i) {
      WeylElement next;
      next.word = w.word;
      next.word.insert(next.word.begin(), i);
      next.mw = matmul(refl_wt[i], w.mw);
      next.mr = matmul(refl_root[i], w.mr);
      if (known.emplace(mat_key(next.mw), rs.weyl_.size()).second)
        rs.weyl_.push_back(std::move(next));
    }
    if (rs.weyl_.size() > 1000)
      throw std::logic_error("Weyl closure exceeded supported size");
  }

  // Parabolic pair tables, eagerly (immutability after construction).
  std::vector<std::vector<RatVec>>& proj = rs.proj_;
  proj.resize(1u << n);
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    proj[mask] = proj_onto_aJ(rs.cartan, mask, n);
  for (unsigned mq = 0; mq < (1u << n); ++mq)
    for (unsigned mp = mq;; mp = (mp + 1) | mq) {
      if (mp >= (1u << n)) break;
      ParabolicPairData pd;
      for (int j = 0; j < n; ++j)
        if ((mp & (1u << j)) && !(mq & (1u << j))) pd.delta.push_back(j);
      const int m = static_cast<int>(pd.delta.size());
      // proj onto a_Q^P along a_0^Q + a_P
      std::vector<RatVec> pqp(n, RatVec(n, Rational(0)));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) pqp[r][c] = proj[mq][r][c] - proj[mp][r][c];
      for (int jj = 0; jj < m; ++jj) {
        int j = pd.delta[jj];
        RatVec row(n, Rational(0));
        for (int k = 0; k < n; ++k)
          for (int r = 0; r < n; ++r)
            row[k] += Rational(rs.cartan[r][j]) * pqp[r][k];
        pd.tau_rows.push_back(std::move(row));
        pd.covec.push_back(mat_col(proj[mq], j));
      }
      // Coordinates in the basis { covec[i] } of a_Q^P: solve once per e_k.
      pd.tauhat_rows.assign(m, RatVec(n, Rational(0)));
      for (int k = 0; k < n; ++k) {
        std::vector<RatVec> B(n, RatVec(m, Rational(0)));
        for (int r = 0; r < n; ++r)
          for (int i = 0; i < m; ++i) B[r][i] = pd.covec[i][r];
        RatVec x = solve_linear(B, mat_col(pqp, k));
        for (int i = 0; i < m; ++i) pd.tauhat_rows[i][k] = x[i];
      }
      rs.pairs_.emplace(mq | (mp << 16), std::move(pd));
      if (mp == (1u << n) - 1) break;
    }

  return rs;
}

const std::vector<WeylElement>& weyl_group(const RootSystem& rs) {
  return rs.weyl();
}

std::size_t weyl_order_by_right_closure(const RootSystem& rs) {
  // Independent traversal: depth-first, right multiplication, keyed on the
  // root-coordinate matrices instead of the weight-coordinate ones.
  const int n = rs.rank;
  std::vector<IntMat> refl_root(n, identity(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) refl_root[i][i][k] -= rs.cartan[i][k];
  std::set<std::string> seen;
  std::vector<IntMat> stack{identity(n)};
  seen.insert(mat_key(stack[0]));
  while (!stack.empty()) {
    IntMat w = stack.back();
    stack.pop_back();
    for (int i = n - 1; i >= 0; --i) {
      IntMat next = matmul(w, refl_root[i]);
      if (seen.insert(mat_key(next)).second) stack.push_back(next);
    }
  }
  return seen.size();
}

std::string RootSystem::dump_json() const {
  nlohmann::json j;
  j["label"] = cartan_type_name(label);
  j["rank"] = rank;
  j["cartan_matrix"] = cartan;
  j["symmetrizer"] = symmetrizer;
  j["positive_roots"] = positive_roots;
  j["coroots"] = coroots;
  j["rho_fundamental_weight_coords"] = std::vector<int>(rank, 1);
  j["weyl_order"] = weyl_.size();
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : weyl_) words.push_back(w.word);
  j["weyl_words"] = words;
  return j.dump(2);
}

}  // namespace weylzeta
