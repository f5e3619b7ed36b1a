#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weylzeta/rational.hpp"

namespace weylzeta {

enum class CartanType { A1, A2, A3, A4, C2, G2 };

std::optional<CartanType> parse_cartan_type(const std::string& label);
std::string cartan_type_name(CartanType t);

using IntMat = std::vector<std::vector<long long>>;
using IntVec = std::vector<long long>;
using RatVec = std::vector<Rational>;
using RatMat = std::vector<Rational>;  // row-major rank*rank

// One Weyl-group element. `word` is a reduced word in simple reflections;
// `mw` acts on fundamental-weight coordinates, `mr` on simple-root
// coordinates. Both are integer matrices. Equality/dedup is by `mw`.
struct WeylElement {
  std::vector<int> word;
  IntMat mw;
  IntMat mr;
  int length() const { return static_cast<int>(word.size()); }
};

// Tri-state for the truncation characteristic functions: strict predicates on
// exact rationals can land exactly on a wall, and the caller decides what a
// wall means (skip the sample, usually).
enum class Tri { no = 0, yes = 1, wall = 2 };

// Data for a nested parabolic pair Q ⊆ P (subsets J_Q ⊆ J_P of simple roots).
// All functionals are rows over simple-coroot coordinates of a_0:
//   tau_rows[i]    = alpha_{delta[i]} composed with proj onto a_Q^P,
//   tauhat_rows[i] = i-th coordinate functional of proj_{a_Q^P}(H) in the
//                    basis { proj_{a_Q}(beta^vee) : beta in J_P \ J_Q },
//   covec[i]       = proj_{a_Q}(delta[i]^vee), the coroots (Delta_Q^P)^vee.
struct ParabolicPairData {
  std::vector<int> delta;  // simple-root indices in J_P \ J_Q
  std::vector<RatVec> tau_rows;
  std::vector<RatVec> tauhat_rows;
  std::vector<RatVec> covec;
};

class RootSystem {
 public:
  CartanType label;
  int rank = 0;
  // cartan[k][i] = <alpha_i, alpha_k^vee>; column i is the simple root
  // alpha_i in fundamental-weight coordinates.
  IntMat cartan;
  IntVec symmetrizer;  // d_i = (alpha_i,alpha_i)/2, minimal integers

  // Positive roots in simple-root coordinates, sorted by (height, lex);
  // the first `rank` entries are the simple roots.
  std::vector<IntVec> positive_roots;
  // coroots[i] = coordinates of positive_roots[i]^vee in the simple-coroot
  // basis (always integral, kept exact).
  std::vector<IntVec> coroots;

  const std::vector<WeylElement>& weyl() const { return weyl_; }
  const WeylElement& longest_element() const { return weyl_.back(); }

  // {alpha > 0 : w(alpha) < 0} as indices into positive_roots.
  std::vector<int> inversion_set(const WeylElement& w) const;

  // Index of a simple root inside positive_roots (== its position i).
  int simple_index(int i) const { return i; }

  // Height of positive root / coroot by index.
  long long coroot_height(int idx) const;

  const ParabolicPairData& pair_data(unsigned mask_q, unsigned mask_p) const;

  // Projection of a_0 onto a_P = {H : alpha_j(H)=0, j in J_P} along
  // span{alpha_j^vee : j in J_P}; columns are images of the coroot basis.
  const std::vector<RatVec>& proj_onto_a(unsigned mask_p) const {
    return proj_[mask_p];
  }

  std::string dump_json() const;

 private:
  friend RootSystem build_root_system(CartanType);
  std::vector<WeylElement> weyl_;
  // keyed by mask_q | (mask_p << 16); built eagerly, immutable afterwards
  std::map<unsigned, ParabolicPairData> pairs_;
  std::vector<std::vector<RatVec>> proj_;
};

RootSystem build_root_system(CartanType label);

const std::vector<WeylElement>& weyl_group(const RootSystem& rs);

// <lambda, v> for lambda in fundamental-weight coordinates and v in
// simple-coroot coordinates: plain dot product, exact on exact inputs.
template <typename Scalar, typename Coroot>
Scalar pairing(const std::vector<Scalar>& lambda, const Coroot& coroot) {
  Scalar acc{};
  for (std::size_t k = 0; k < lambda.size(); ++k)
    acc += lambda[k] * Scalar(coroot[k]);
  return acc;
}

// Independent Weyl-order oracle: closure count under right multiplication
// with a different traversal order (used by tests against weyl()).
std::size_t weyl_order_by_right_closure(const RootSystem& rs);

// Exact Gaussian elimination for the small consistent systems that come up
// in projections and in tests (rows.size() x rhs-consistent, any rank).
RatVec solve_linear(std::vector<RatVec> rows, RatVec rhs);

}  // namespace weylzeta
