#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weylzeta/rootdata.hpp"

namespace weylzeta {

// H in a_0, simple-coroot coordinates, exact.
using ChamberVector = RatVec;

// tau_Q^P / tauhat_Q^P on a_0: characteristic functions of the positive
// chamber / positive cone for the nested pair Q ⊆ P given as simple-root
// masks. Exactly decided; an exact zero pairing is a wall.
Tri tau(const RootSystem& rs, unsigned mask_q, unsigned mask_p,
        const ChamberVector& h);
Tri tau_hat(const RootSystem& rs, unsigned mask_q, unsigned mask_p,
            const ChamberVector& h);

// Double-precision instantiation for callers whose H comes from logs of
// real data; |pairing| < band counts as a wall.
Tri tau_d(const RootSystem& rs, unsigned mask_q, unsigned mask_p,
          const std::vector<double>& h, double band);
Tri tau_hat_d(const RootSystem& rs, unsigned mask_q, unsigned mask_p,
              const std::vector<double>& h, double band);

// sigma_{P1}^{P2}, two independent routes:
//   A: alternating sum over P3 containing P2 of tau_1^3 * tauhat_3,
//   B: the three-condition characterization.
Tri sigma_route_a(const RootSystem& rs, unsigned mask_1, unsigned mask_2,
                  const ChamberVector& h);
Tri sigma_route_b(const RootSystem& rs, unsigned mask_1, unsigned mask_2,
                  const ChamberVector& h);

enum class TruncIdentity {
  lcl_tau_tauhat,   // sum (-1)^{dim A_R/A_P} tau_Q^R tauhat_R^P = delta_QP
  lcl_tauhat_tau,   // sum (-1)^{dim A_Q/A_R} tauhat_Q^R tau_R^P = delta_QP
  lemma1_sigma,     // route A == route B
  lemma2_phi,       // epsilon/phi/tau alternating sum
};

const char* trunc_identity_name(TruncIdentity id);
std::optional<TruncIdentity> parse_trunc_identity(const std::string& s);

struct IdentityReport {
  std::string root_system;
  std::string identity;
  bool exhaustive = false;       // chamber enumeration (rank <= 2)
  std::uint64_t seed = 0;
  std::size_t pairs_checked = 0;
  std::size_t evaluations = 0;   // (pair, sample) predicates fully evaluated
  std::size_t walls_skipped = 0;
  std::vector<std::string> violations;  // empty on pass
  bool pass() const { return violations.empty(); }
  std::string to_json() const;
};

// Checks one combinatorial identity over every nested parabolic pair of rs.
// Rank <= 2: exhaustive over all chambers of the full root-hyperplane
// arrangement (proof by exhaustion); otherwise n_samples exact-rational
// samples drawn per pair from the given seed.
IdentityReport identity_check(const RootSystem& rs, TruncIdentity id,
                              std::size_t n_samples, std::uint64_t seed);

// Chamber representatives of the central arrangement cut out by all root
// hyperplanes (rank <= 2 only); exact interior points, one per chamber.
std::vector<ChamberVector> enumerate_chambers(const RootSystem& rs);

}  // namespace weylzeta
