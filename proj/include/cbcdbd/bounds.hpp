#pragma once

#include <cstdint>
#include <string>

#include "cbcdbd/errors.hpp"
#include "cbcdbd/lattice.hpp"
#include "cbcdbd/weights.hpp"

namespace cbcdbd {

/// Relative slack absorbed by every inequality check: lhs <= rhs + 1e-9 max(1, |rhs|).
inline constexpr double kBoundSlack = 1e-9;

struct BoundContext {
  int n = 0;
  int s = 0;
  std::uint64_t scheme_digest = 0;
  std::uint64_t vector_digest = 0;
};

/// Outcome of checking one inequality lhs <= rhs.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  BoundContext context;
  /// Non-empty when the check ran under a caveat (e.g. vector without digit provenance).
  std::string annotation;
};

bool within_bound(double lhs, double rhs);

BoundReport make_report(std::string name, double lhs, double rhs, const WeightScheme& scheme,
                        const GeneratingVector& gv);

/// sum_{u ⊆ {1..s}, u != {}} gamma_u (4 zeta(alpha))^|u|; divide by N^alpha for the truncation bound.
double prop1_factor(double alpha, const WeightScheme& scheme, int s, const Limits& limits = {});

/// Right-hand side of the T_1 estimate through H, for N = 2^n.
double thm2_rhs(const WeightScheme& scheme, int s, int n, double h_value,
                const Limits& limits = {});

/// T_1(N, z) <= thm2_rhs(H(z)).
BoundReport check_thm2(const WeightScheme& scheme, const GeneratingVector& gv,
                       const Limits& limits = {});

/// H_r(z_{1:r}) <= H_{r-1}(z_{1:r-1}) + log 4 [gamma_{{r}} N + H_{r-1, gamma ∪ {r}}(z_{1:r-1})].
BoundReport check_h_induction(const WeightScheme& scheme, const GeneratingVector& gv, int r,
                              const Limits& limits = {});

/// N sum_{v ⊆ {1..s}, v != {}} (log 4)^|v| gamma_v.
double h_bound_general_rhs(const WeightScheme& scheme, int s, int n, const Limits& limits = {});

/// H(z) <= h_bound_general_rhs.
BoundReport check_h_bound_general(const WeightScheme& scheme, const GeneratingVector& gv,
                                  const Limits& limits = {});

/// e(z) - T_alpha(N, z) <= prop1_factor / N^alpha, with e computed in closed form (even alpha).
BoundReport check_prop1(int alpha, const WeightScheme& scheme, const GeneratingVector& gv,
                        const Limits& limits = {});

/// sum_{j = 1..s} tilde_gamma_j.
double summability_diagnostic(const WeightScheme& scheme, int s, const Limits& limits = {});

}  // namespace cbcdbd
