#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "cbcdbd/errors.hpp"

namespace cbcdbd {

/// A finite subset of {1..63}; bit j-1 is set iff component j belongs to the set.
using Subset = std::uint64_t;

inline constexpr int kMaxDimension = 63;

/// Builds a subset from 1-based component indices.
Subset make_subset(std::span<const int> components);
/// Lists the 1-based components of a subset in increasing order.
std::vector<int> subset_members(Subset u);
int subset_size(Subset u);
/// The subset {1..s}.
Subset leading_subset(int s);

/// gamma_u = prod_{j in u} gamma_j.
struct ProductWeights {
  std::vector<double> gammas;
};

/// gamma_u = Gamma_{|u|} * prod_{j in u} gamma_j with Gamma_0 = 1.
struct PodWeights {
  std::vector<double> order_weights;  // Gamma_0 .. Gamma_{s_max}
  std::vector<double> gammas;         // gamma_1 .. gamma_{s_max}
};

/// Explicit table of every nonempty subset of {1..s_max}; index = subset bitmask.
struct GeneralWeights {
  int s_max = 0;
  std::vector<double> table;  // table[0] == 1
};

/// An immutable positive weight family {gamma_u}. Cheap to copy.
class WeightScheme {
 public:
  enum class Kind { product, pod, general, shifted };

  static WeightScheme product(std::vector<double> gammas);
  static WeightScheme pod(std::vector<double> order_weights, std::vector<double> gammas);
  /// Every nonempty subset of {1..s_max} must appear exactly once in `values`.
  static WeightScheme general(int s_max,
                              const std::vector<std::pair<std::vector<int>, double>>& values,
                              const Limits& limits = {});
  static WeightScheme general_from_table(int s_max, std::vector<double> table,
                                         const Limits& limits = {});

  /// The view u -> gamma_{u ∪ v}.
  WeightScheme shifted(Subset v) const;

  Kind kind() const;
  int dimension_bound() const;

  /// gamma_u; 1 for the empty set. Throws ValidationError if u exceeds the dimension bound.
  double gamma(Subset u) const;
  double gamma(std::span<const int> components) const { return gamma(make_subset(components)); }

  /// Valid only for the matching kind.
  const ProductWeights& as_product() const;
  const PodWeights& as_pod() const;
  const GeneralWeights& as_general() const;
  /// For a shifted view: the base scheme and the shift.
  const WeightScheme& shift_base() const;
  Subset shift_set() const;

  /// Product and POD schemes have factored evaluators; others need subset enumeration.
  bool is_factored() const { return kind() == Kind::product || kind() == Kind::pod; }

 private:
  struct Shifted {
    std::shared_ptr<const WeightScheme> base;
    Subset shift = 0;
  };
  using Repr = std::variant<ProductWeights, PodWeights, GeneralWeights, Shifted>;

  explicit WeightScheme(Repr repr) : repr_(std::move(repr)) {}

  Repr repr_;
};

/// Throws BudgetExceeded when explicit enumeration of subsets of {1..s} is not allowed.
void require_enumerable(int s, const Limits& limits, const char* what);

/// Table of gamma_u for every u ⊆ {1..s}, indexed by bitmask.
std::vector<double> subset_table(const WeightScheme& scheme, int s, const Limits& limits = {});

/// max over v ⊆ {1..j-1} of gamma_{v ∪ {j}} / gamma_v.
double tilde_gamma(const WeightScheme& scheme, int j, const Limits& limits = {});

/// u -> gamma_u^exponent, keeping product and POD form.
WeightScheme pow_weights(const WeightScheme& scheme, double exponent, const Limits& limits = {});

/// Entry l is sum_{u ⊆ {1..s}, |u| = l} gamma_u c^l, for l = 0..s.
///
/// Product and POD weights go through elementary symmetric polynomials in O(s^2);
/// other schemes enumerate subsets.
std::vector<double> order_profile(const WeightScheme& scheme, int s, double c,
                                  const Limits& limits = {});

/// Stable 64-bit hash of the scheme's defining numbers.
std::uint64_t fingerprint(const WeightScheme& scheme);

}  // namespace cbcdbd
