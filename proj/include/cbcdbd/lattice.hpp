#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbcdbd/errors.hpp"
#include "cbcdbd/weights.hpp"

namespace cbcdbd {

/// Largest digit count accepted for N = 2^n.
inline constexpr int kMaxDigits = 62;

/// Generating vector (z_1..z_s) of odd integers modulo N = 2^n, optionally with the
/// digit-by-digit history z_{r,1..n} that produced each component.
class GeneratingVector {
 public:
  GeneratingVector(int n, std::vector<std::uint64_t> z);
  GeneratingVector(int n, std::vector<std::uint64_t> z,
                   std::vector<std::vector<std::uint64_t>> digit_history);

  int digits() const { return n_; }
  std::uint64_t points() const { return std::uint64_t{1} << n_; }
  int dimension() const { return static_cast<int>(z_.size()); }
  std::span<const std::uint64_t> components() const { return z_; }
  /// 1-based component access.
  std::uint64_t operator[](int j) const { return z_.at(static_cast<std::size_t>(j - 1)); }

  bool has_digit_history() const { return !history_.empty(); }
  /// history()[j-1][v-1] == z_{j,v}.
  const std::vector<std::vector<std::uint64_t>>& history() const { return history_; }

  /// First r components (history truncated alongside).
  GeneratingVector leading(int r) const;

  bool operator==(const GeneratingVector&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> z_;
  std::vector<std::vector<std::uint64_t>> history_;
};

std::uint64_t fingerprint(const GeneratingVector& gv);

/// Bitmask of the nonzero entries of a frequency vector.
Subset support(std::span<const std::int64_t> m);

/// log(1 / sin^2(pi a / 2^t)) for an integer a not divisible by 2^t.
///
/// The residue is folded onto (0, 2^(t-1)] first, so a and 2^t - a give bit-identical
/// results and the argument never loses precision to large multiples of pi.
double log_inv_sin2(std::uint64_t a, int t);

/// Point k of the lattice: ((k z_j mod N) / N)_j.
std::vector<double> lattice_point(const GeneratingVector& gv, std::uint64_t k);
std::vector<std::vector<double>> lattice_points(const GeneratingVector& gv);

/// gamma_{supp(m)}^{-1} prod_{j in supp(m)} |m_j|^alpha; 1 for m = 0.
double r_alpha_gamma(double alpha, const WeightScheme& scheme, std::span<const std::int64_t> m);

/// Exact truncated dual sum T_{alpha,gamma}(N, z) over M_{N,s} = {-(N-1)..N-1}^s.
/// Refuses with BudgetExceeded when (2N-1)^s exceeds limits.brute_force_budget.
double t_brute_force(double alpha, const WeightScheme& scheme, const GeneratingVector& gv,
                     const Limits& limits = {});

/// H_{s,n,gamma}(z). Product and POD weights use per-k factored accumulation.
double h_direct(const WeightScheme& scheme, const GeneratingVector& gv, const Limits& limits = {});
/// H_{s,n,gamma}(z) by explicit subset enumeration for every scheme kind.
double h_direct_enumerated(const WeightScheme& scheme, const GeneratingVector& gv,
                           const Limits& limits = {});

/// b_alpha(x) = sum_{m != 0} e^{2 pi i m x} / |m|^alpha for alpha in {2, 4, 6}.
double bernoulli_kernel(int alpha, double x);

/// Closed form of sum_{m != 0, m.z = 0 mod N} 1 / r_{alpha,gamma}(m) for even alpha <= 6.
double dual_error_even_alpha(int alpha, const WeightScheme& scheme, const GeneratingVector& gv,
                             const Limits& limits = {});

/// (1/N) sum_k f(x_k).
double qmc_integrate(const GeneratingVector& gv,
                     const std::function<double(std::span<const double>)>& f);

/// Quantities reported next to a constructed vector.
struct Diagnostics {
  std::string path;
  std::optional<double> t_value;
  std::optional<double> h_value;
  std::optional<double> dual_error;
  std::map<std::string, double> bound_values;
  std::map<std::string, double> timing_seconds;
  std::uint64_t quality_evaluations = 0;
  std::size_t table_doubles = 0;
};

}  // namespace cbcdbd
