#include "cbcdbd/lattice.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace cbcdbd {

namespace {

std::uint64_t mask_of(int n) { return (std::uint64_t{1} << n) - 1; }

// Per-k accumulation of sum_{u != {}} gamma_u prod_{j in u} values[j] over u ⊆ {1..s}.
class SubsetAccumulator {
 public:
  SubsetAccumulator(const WeightScheme& scheme, int s, bool force_enumeration,
                    const Limits& limits)
      : scheme_(scheme), s_(s), kind_(scheme.kind()) {
    if (s > scheme.dimension_bound()) {
      throw ValidationError("vector dimension " + std::to_string(s) +
                            " exceeds the weight dimension bound " +
                            std::to_string(scheme.dimension_bound()));
    }
    if (force_enumeration || !scheme.is_factored()) {
      enumerate_ = true;
      table_ = subset_table(scheme, s, limits);
      products_.resize(table_.size());
    } else {
      const auto& gammas = kind_ == WeightScheme::Kind::product ? scheme.as_product().gammas
                                                                : scheme.as_pod().gammas;
      gammas_.assign(gammas.begin(), gammas.begin() + s);
      if (kind_ == WeightScheme::Kind::pod) {
        order_ = scheme.as_pod().order_weights;
        elementary_.resize(s + 1);
      }
    }
  }

  double operator()(std::span<const double> values) {
    if (enumerate_) {
      products_[0] = 1.0;
      double sum = 0.0;
      for (std::size_t u = 1; u < products_.size(); ++u) {
        const int low = std::countr_zero(u);
        products_[u] = products_[u & (u - 1)] * values[low];
        sum += table_[u] * products_[u];
      }
      return sum;
    }
    if (kind_ == WeightScheme::Kind::product) {
      double prod = 1.0;
      for (int j = 0; j < s_; ++j) prod *= 1.0 + gammas_[j] * values[j];
      return prod - 1.0;
    }
    std::fill(elementary_.begin(), elementary_.end(), 0.0);
    elementary_[0] = 1.0;
    for (int j = 0; j < s_; ++j) {
      const double x = gammas_[j] * values[j];
      for (int l = j + 1; l >= 1; --l) elementary_[l] += x * elementary_[l - 1];
    }
    double sum = 0.0;
    for (int l = 1; l <= s_; ++l) sum += order_[l] * elementary_[l];
    return sum;
  }

 private:
  const WeightScheme& scheme_;
  int s_;
  WeightScheme::Kind kind_;
  bool enumerate_ = false;
  std::vector<double> table_, products_, gammas_, order_, elementary_;
};

double h_sum(const WeightScheme& scheme, const GeneratingVector& gv, bool enumerate,
             const Limits& limits) {
  const int s = gv.dimension();
  const int n = gv.digits();
  SubsetAccumulator accumulate(scheme, s, enumerate, limits);
  std::vector<double> w(s);
  const std::uint64_t mask = mask_of(n);
  double total = 0.0;
  for (std::uint64_t k = 1; k < gv.points(); ++k) {
    for (int j = 0; j < s; ++j) w[j] = log_inv_sin2((k * gv.components()[j]) & mask, n);
    total += accumulate(w);
  }
  return total;
}

}  // namespace

GeneratingVector::GeneratingVector(int n, std::vector<std::uint64_t> z)
    : GeneratingVector(n, std::move(z), {}) {}

GeneratingVector::GeneratingVector(int n, std::vector<std::uint64_t> z,
                                   std::vector<std::vector<std::uint64_t>> digit_history)
    : n_(n), z_(std::move(z)), history_(std::move(digit_history)) {
  if (n_ < 1 || n_ > kMaxDigits) {
    throw ValidationError("digit count n must lie in 1.." + std::to_string(kMaxDigits));
  }
  if (z_.empty() || z_.size() > static_cast<std::size_t>(kMaxDimension)) {
    throw ValidationError("generating vector needs 1.." + std::to_string(kMaxDimension) +
                          " components");
  }
  const std::uint64_t big_n = points();
  for (std::size_t j = 0; j < z_.size(); ++j) {
    if (z_[j] % 2 == 0 || z_[j] >= big_n) {
      throw ValidationError("component z_" + std::to_string(j + 1) + " = " +
                            std::to_string(z_[j]) + " must be odd and below N");
    }
  }
  if (history_.empty()) return;
  if (history_.size() != z_.size()) {
    throw ValidationError("digit history must list every component");
  }
  for (std::size_t j = 0; j < z_.size(); ++j) {
    if (history_[j].size() != static_cast<std::size_t>(n_)) {
      throw ValidationError("digit history of component " + std::to_string(j + 1) +
                            " must hold n entries");
    }
    for (int v = 1; v <= n_; ++v) {
      if (history_[j][v - 1] != (z_[j] & mask_of(v))) {
        throw ValidationError("digit history violates z_{r,v} = z_r mod 2^v at component " +
                              std::to_string(j + 1) + ", v = " + std::to_string(v));
      }
    }
  }
}

GeneratingVector GeneratingVector::leading(int r) const {
  if (r < 0 || r > dimension()) throw ValidationError("leading: r out of range");
  std::vector<std::uint64_t> z(z_.begin(), z_.begin() + r);
  if (history_.empty()) return GeneratingVector(n_, std::move(z));
  return GeneratingVector(n_, std::move(z), {history_.begin(), history_.begin() + r});
}

std::uint64_t fingerprint(const GeneratingVector& gv) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(gv.digits()));
  for (std::uint64_t z : gv.components()) mix(z);
  return h;
}

Subset support(std::span<const std::int64_t> m) {
  if (m.size() > static_cast<std::size_t>(kMaxDimension)) {
    throw ValidationError("frequency vector longer than the maximal dimension");
  }
  Subset u = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] != 0) u |= Subset{1} << j;
  }
  return u;
}

double log_inv_sin2(std::uint64_t a, int t) {
  const std::uint64_t modulus = std::uint64_t{1} << t;
  a &= modulus - 1;
  if (a == 0) throw ValidationError("log_inv_sin2: argument is an integer multiple of pi");
  if (a > modulus / 2) a = modulus - a;
  const double y = std::ldexp(static_cast<double>(a), -t);
  const double sine = std::sin(std::numbers::pi * y);
  return -2.0 * std::log(sine);
}

std::vector<double> lattice_point(const GeneratingVector& gv, std::uint64_t k) {
  const std::uint64_t mask = mask_of(gv.digits());
  std::vector<double> x(gv.dimension());
  // Wrapping 64-bit products are exact modulo 2^64, hence modulo N = 2^n.
  for (int j = 0; j < gv.dimension(); ++j) {
    x[j] = std::ldexp(static_cast<double>((k * gv.components()[j]) & mask), -gv.digits());
  }
  return x;
}

std::vector<std::vector<double>> lattice_points(const GeneratingVector& gv) {
  std::vector<std::vector<double>> points;
  points.reserve(gv.points());
  for (std::uint64_t k = 0; k < gv.points(); ++k) points.push_back(lattice_point(gv, k));
  return points;
}

double r_alpha_gamma(double alpha, const WeightScheme& scheme, std::span<const std::int64_t> m) {
  if (!(alpha >= 1.0)) throw ValidationError("r_alpha_gamma: alpha must be at least 1");
  const Subset u = support(m);
  double value = 1.0;
  for (std::int64_t mj : m) {
    if (mj != 0) value *= std::pow(std::fabs(static_cast<double>(mj)), alpha);
  }
  return value / scheme.gamma(u);
}

double t_brute_force(double alpha, const WeightScheme& scheme, const GeneratingVector& gv,
                     const Limits& limits) {
  if (!(alpha >= 1.0)) throw ValidationError("t_brute_force: alpha must be at least 1");
  const int s = gv.dimension();
  const std::uint64_t big_n = gv.points();
  const std::uint64_t side = 2 * big_n - 1;
  unsigned long long candidates = 1;
  for (int j = 0; j < s; ++j) {
    if (candidates > limits.brute_force_budget / side) {
      throw BudgetExceeded("t_brute_force: (2N-1)^s exceeds the budget of " +
                           std::to_string(limits.brute_force_budget) + " candidates");
    }
    candidates *= side;
  }
  if (s > scheme.dimension_bound()) throw ValidationError("t_brute_force: dimension too large");
  const auto gammas = subset_table(scheme, s, limits);

  // inverse_power[|m|] = |m|^-alpha
  std::vector<double> inverse_power(big_n);
  inverse_power[0] = 1.0;
  for (std::uint64_t m = 1; m < big_n; ++m) {
    inverse_power[m] = std::pow(static_cast<double>(m), -alpha);
  }
  const std::uint64_t mask = big_n - 1;
  const auto z = gv.components();

  // Odometer over m in {-(N-1)..N-1}^s with running residue, support and product.
  double total = 0.0;
  auto recurse = [&](auto&& self, int j, std::uint64_t residue, Subset u, double prod) -> void {
    if (j == s) {
      if (residue == 0 && u != 0) total += gammas[u] * prod;
      return;
    }
    const std::uint64_t zj = z[j];
    for (std::int64_t m = -static_cast<std::int64_t>(big_n - 1);
         m <= static_cast<std::int64_t>(big_n - 1); ++m) {
      const std::uint64_t term = (static_cast<std::uint64_t>(m) * zj) & mask;
      if (m == 0) {
        self(self, j + 1, residue, u, prod);
      } else {
        const std::uint64_t abs_m = static_cast<std::uint64_t>(m < 0 ? -m : m);
        self(self, j + 1, (residue + term) & mask, u | (Subset{1} << j),
             prod * inverse_power[abs_m]);
      }
    }
  };
  recurse(recurse, 0, 0, 0, 1.0);
  return total;
}

double h_direct(const WeightScheme& scheme, const GeneratingVector& gv, const Limits& limits) {
  return h_sum(scheme, gv, false, limits);
}

double h_direct_enumerated(const WeightScheme& scheme, const GeneratingVector& gv,
                           const Limits& limits) {
  return h_sum(scheme, gv, true, limits);
}

double bernoulli_kernel(int alpha, double x) {
  using std::numbers::pi;
  switch (alpha) {
    case 2: {
      const double b2 = x * x - x + 1.0 / 6.0;
      return 2.0 * pi * pi * b2;
    }
    case 4: {
      const double b4 = x * x * (x * (x - 2.0) + 1.0) - 1.0 / 30.0;
      return -std::pow(2.0 * pi, 4) / 24.0 * b4;
    }
    case 6: {
      const double x2 = x * x;
      const double b6 = x2 * x2 * x2 - 3.0 * x2 * x2 * x + 2.5 * x2 * x2 - 0.5 * x2 + 1.0 / 42.0;
      return std::pow(2.0 * pi, 6) / 720.0 * b6;
    }
    default:
      throw ValidationError("unsupported smoothness alpha = " + std::to_string(alpha) +
                            " (closed form available for 2, 4, 6)");
  }
}

double dual_error_even_alpha(int alpha, const WeightScheme& scheme, const GeneratingVector& gv,
                             const Limits& limits) {
  bernoulli_kernel(alpha, 0.0);  // validates alpha
  const int s = gv.dimension();
  SubsetAccumulator accumulate(scheme, s, false, limits);
  std::vector<double> b(s);
  const std::uint64_t mask = gv.points() - 1;
  double total = 0.0;
  for (std::uint64_t k = 0; k < gv.points(); ++k) {
    for (int j = 0; j < s; ++j) {
      const double x = std::ldexp(static_cast<double>((k * gv.components()[j]) & mask),
                                  -gv.digits());
      b[j] = bernoulli_kernel(alpha, x);
    }
    total += accumulate(b);
  }
  // Rounding can leave a tiny negative value when the exact sum is 0 (it never is for s >= 1).
  return std::max(0.0, total / static_cast<double>(gv.points()));
}

double qmc_integrate(const GeneratingVector& gv,
                     const std::function<double(std::span<const double>)>& f) {
  double total = 0.0;
  for (std::uint64_t k = 0; k < gv.points(); ++k) total += f(lattice_point(gv, k));
  return total / static_cast<double>(gv.points());
}

}  // namespace cbcdbd
