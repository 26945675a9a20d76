#pragma once

#include <stdexcept>
#include <string>

namespace cbcdbd {

/// Input that violates a documented precondition (bad weights, even components, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A desk-scale enumeration was refused because it exceeds its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Enumeration budgets shared by every operation that loops over subsets or frequency vectors.
struct Limits {
  /// Largest dimension for which subsets of {1..s} are enumerated explicitly.
  int subset_enumeration_cap = 20;
  /// Largest number of candidate frequency vectors (2N-1)^s for the brute-force T oracle.
  unsigned long long brute_force_budget = 100'000'000ULL;
};

}  // namespace cbcdbd
