#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cbcdbd/errors.hpp"
#include "cbcdbd/weights.hpp"

namespace cbcdbd {

/// w(t, k) = log(1 / sin^2(pi k z / 2^t)) for levels t = 1..n and odd k < 2^t.
/// Level t is stored contiguously, indexed by (k - 1) / 2.
class SinLogTable {
 public:
  SinLogTable(std::uint64_t z, int n);

  int digits() const { return n_; }
  std::span<const double> level(int t) const;
  double at(int t, std::uint64_t k) const;

 private:
  int n_;
  std::vector<double> values_;  // level t starts at offset 2^(t-1) - 1
};

/// log(1 / sin^2(pi a / 2^t)) for all t <= n from one level-n table of the folded residues
/// a in 1..2^(n-1); entries equal log_inv_sin2(a, t) bit for bit.
class LogSineTable {
 public:
  explicit LogSineTable(int n);

  double operator()(std::uint64_t a, int t) const {
    a &= (std::uint64_t{1} << t) - 1;
    if (a > (std::uint64_t{1} << (t - 1))) a = (std::uint64_t{1} << t) - a;
    return values_[a << (n_ - t)];
  }
  /// sum over odd a < 2^v of log(1 / sin^2(pi a / 2^v)).
  double odd_residue_sum(int v) const { return odd_sums_[v]; }
  std::size_t size() const { return values_.size(); }

 private:
  int n_;
  std::vector<double> values_;
  std::vector<double> odd_sums_;
};

/// The digit-wise quality function h_{r,n,v,gamma} evaluated literally from its definition,
/// enumerating subsets of the r-1 fixed components. Works for every weight scheme.
class NaiveQuality {
 public:
  NaiveQuality(const WeightScheme& scheme, int n, std::span<const std::uint64_t> previous,
               const Limits& limits = {});

  /// The component r being chosen (previous.size() + 1).
  int component() const { return r_; }
  double operator()(int v, std::uint64_t x) const;

 private:
  int n_;
  int r_;
  std::vector<SinLogTable> tables_;
  std::vector<double> own_;     // gamma_u, u ⊆ {1..r-1}
  std::vector<double> with_r_;  // gamma_{u ∪ {r}}, u ⊆ {1..r-1}
};

/// One-shot h_{r,n,v,gamma}(x) with r = previous.size() + 1.
double h_naive(const WeightScheme& scheme, int n, int v, std::span<const std::uint64_t> previous,
               std::uint64_t x, const Limits& limits = {});

/// Accumulators P_{r,l,t}(k 2^{n-t}) for POD weights, l = 1..s, t = 2..n, odd k < 2^t.
///
/// Each level carries the index of the component it was last updated with. While
/// component r is being built, levels t < v hold component-r data and levels t >= v
/// still hold component-(r-1) data; quality evaluations only read the latter.
class PodStateTable {
 public:
  /// Accepts POD weights, or product weights viewed as POD with Gamma_l = 1.
  PodStateTable(const WeightScheme& scheme, int n, int s);

  int digits() const { return n_; }
  int dimension() const { return s_; }
  int level_component(int t) const;
  /// P_{r,l,t}(k 2^{n-t}) for the component the level currently holds; 1 for l = 0.
  double value(int l, int t, std::uint64_t k) const;
  std::size_t table_doubles() const;

  /// Folds component r with z_{r,v} into level v (descending l, in place).
  void update(int r, int v, std::uint64_t z_rv);

  /// h_{r,n,v,gamma}(x) for each candidate, from the level sums of component r-1.
  std::vector<double> quality(int r, int v, std::span<const std::uint64_t> candidates) const;

 private:
  std::span<double> row(int l, int t);
  std::span<const double> row(int l, int t) const;
  void require_stale_from(int r, int v) const;

  int n_;
  int s_;
  LogSineTable logs_;
  std::vector<double> gammas_;
  std::vector<double> gamma_order_;   // Gamma_0..Gamma_s
  std::vector<std::vector<double>> levels_;  // levels_[t]: rows l = 1..s, 2^(t-1) each
  std::vector<int> stamp_;
};

/// h_{r,n,v,gamma}(x) from the P-table recursion.
double h_fast_pod(const PodStateTable& state, int r, int v, std::uint64_t x);
/// Both digit candidates of one step.
std::array<double, 2> h_fast_pod_pair(const PodStateTable& state, int r, int v, std::uint64_t x0,
                                      std::uint64_t x1);
/// P_{r,l,v} <- P_{r-1,l,v} + (Gamma_l / Gamma_{l-1}) gamma_r w_r(v, k) P_{r-1,l-1,v}.
void pod_update(PodStateTable& state, int r, int v, std::uint64_t z_rv);

/// Single accumulator q_{r,t}(k) = sum_{u ⊆ {1..r}, u != {}} gamma_u prod_{j in u} w_j(t, k)
/// for product weights, updated multiplicatively.
class ProductStateTable {
 public:
  ProductStateTable(const WeightScheme& scheme, int n, int s);

  int digits() const { return n_; }
  int level_component(int t) const;
  double value(int t, std::uint64_t k) const;
  std::size_t table_doubles() const;

  void update(int r, int v, std::uint64_t z_rv);
  std::vector<double> quality(int r, int v, std::span<const std::uint64_t> candidates) const;

 private:
  int n_;
  int s_;
  LogSineTable logs_;
  std::vector<double> gammas_;
  std::vector<std::vector<double>> levels_;
  std::vector<int> stamp_;
};

}  // namespace cbcdbd
