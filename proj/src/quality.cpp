#include "cbcdbd/quality.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "cbcdbd/lattice.hpp"

namespace cbcdbd {

namespace {

std::uint64_t pow2(int e) { return std::uint64_t{1} << e; }

void require_odd(std::uint64_t x, const char* what) {
  if (x % 2 == 0) throw ValidationError(std::string(what) + ": candidate must be odd");
}

// L(k, x, v) for odd k < 2^v, indexed by (k - 1) / 2.
std::vector<double> digit_log_table(const LogSineTable& logs, std::uint64_t x, int v) {
  const std::uint64_t half = pow2(v - 1);
  std::vector<double> table(half);
  for (std::uint64_t i = 0; i < half; ++i) table[i] = logs((2 * i + 1) * x, v);
  return table;
}

void check_step(int r, int v, int n, int s) {
  if (r < 2 || r > s) {
    throw ValidationError("quality: component r = " + std::to_string(r) + " outside 2.." +
                          std::to_string(s));
  }
  if (v < 2 || v > n) {
    throw ValidationError("quality: digit v = " + std::to_string(v) + " outside 2.." +
                          std::to_string(n));
  }
}

// Splits every candidate's h into a part shared by all candidates and a part depending on x.
// Callers add the two at the end so that equal x-dependent parts give bit-identical h values.
struct QualityAccumulator {
  QualityAccumulator(const LogSineTable& sines, int v, std::span<const std::uint64_t> candidates)
      : sines(sines), v(v) {
    for (std::uint64_t x : candidates) {
      require_odd(x, "quality");
      logs.push_back(digit_log_table(sines, x, v));
    }
    varying.assign(candidates.size(), 0.0);
  }

  // Adds level t given sum_k a(k) of the x-independent values and the cross factors b(k).
  void add_level(int t, double level_common, std::span<const double> b) {
    const double weight = std::ldexp(1.0, v - t);
    const std::uint64_t wrap = pow2(v - 1) - 1;
    common += weight * level_common;
    // b has 2^(t-1) entries; the candidate tables repeat with period 2^(v-1).
    const std::size_t period = wrap + 1;
    if (logs.size() == 2) {
      const double* l0 = logs[0].data();
      const double* l1 = logs[1].data();
      double v0 = 0.0, v1 = 0.0;
      for (std::size_t block = 0; block < b.size(); block += period) {
        const double* bb = b.data() + block;
        for (std::size_t j = 0; j < period; ++j) {
          v0 += l0[j] * bb[j];
          v1 += l1[j] * bb[j];
        }
      }
      varying[0] += weight * v0;
      varying[1] += weight * v1;
      return;
    }
    for (std::size_t c = 0; c < logs.size(); ++c) {
      const double* table = logs[c].data();
      double level_varying = 0.0;
      for (std::size_t block = 0; block < b.size(); block += period) {
        const double* bb = b.data() + block;
        for (std::size_t j = 0; j < period; ++j) level_varying += table[j] * bb[j];
      }
      varying[c] += weight * level_varying;
    }
  }

  // Multiplying by an odd x only permutes the odd residues, so sum_k L(k, x, v) is shared.
  std::vector<double> finish(int n, double gamma_r, double gamma_single) const {
    const double shared =
        common + gamma_single * static_cast<double>(n - v + 1) * sines.odd_residue_sum(v);
    std::vector<double> h(varying.size());
    for (std::size_t c = 0; c < h.size(); ++c) h[c] = shared + gamma_r * varying[c];
    return h;
  }

  const LogSineTable& sines;
  int v;
  double common = 0.0;
  std::vector<std::vector<double>> logs;
  std::vector<double> varying;
};

}  // namespace

LogSineTable::LogSineTable(int n) : n_(n), values_(pow2(n - 1) + 1), odd_sums_(n + 1, 0.0) {
  if (n < 1 || n > 40) throw ValidationError("LogSineTable: n must lie in 1..40");
  values_[0] = std::numeric_limits<double>::infinity();
  for (std::uint64_t a = 1; a < values_.size(); ++a) values_[a] = log_inv_sin2(a, n);
  for (int v = 1; v <= n; ++v) {
    double sum = 0.0;
    for (std::uint64_t a = 1; a < pow2(v); a += 2) sum += (*this)(a, v);
    odd_sums_[v] = sum;
  }
}

SinLogTable::SinLogTable(std::uint64_t z, int n) : n_(n), values_(pow2(n) - 1) {
  require_odd(z, "SinLogTable");
  if (n < 1 || n > 40) throw ValidationError("SinLogTable: n must lie in 1..40");
  for (int t = 1; t <= n; ++t) {
    const std::uint64_t half = pow2(t - 1);
    double* out = values_.data() + (half - 1);
    for (std::uint64_t i = 0; i < half; ++i) out[i] = log_inv_sin2((2 * i + 1) * z, t);
  }
}

std::span<const double> SinLogTable::level(int t) const {
  if (t < 1 || t > n_) throw ValidationError("SinLogTable: level out of range");
  const std::uint64_t half = pow2(t - 1);
  return {values_.data() + (half - 1), half};
}

double SinLogTable::at(int t, std::uint64_t k) const {
  require_odd(k, "SinLogTable::at");
  if (k >= pow2(t)) throw ValidationError("SinLogTable::at: k must be below 2^t");
  return level(t)[(k - 1) / 2];
}

NaiveQuality::NaiveQuality(const WeightScheme& scheme, int n,
                           std::span<const std::uint64_t> previous, const Limits& limits)
    : n_(n), r_(static_cast<int>(previous.size()) + 1) {
  if (r_ > scheme.dimension_bound()) {
    throw ValidationError("h_naive: component r exceeds the weight dimension bound");
  }
  require_enumerable(r_ - 1, limits, "h_naive");
  tables_.reserve(previous.size());
  for (std::uint64_t z : previous) tables_.emplace_back(z, n);
  const std::size_t count = pow2(r_ - 1);
  own_.resize(count);
  with_r_.resize(count);
  const Subset r_bit = Subset{1} << (r_ - 1);
  for (std::size_t u = 0; u < count; ++u) {
    own_[u] = scheme.gamma(u);
    with_r_[u] = scheme.gamma(u | r_bit);
  }
}

double NaiveQuality::operator()(int v, std::uint64_t x) const {
  require_odd(x, "h_naive");
  if (v < 1 || v > n_) throw ValidationError("h_naive: digit v out of range");
  const std::size_t count = own_.size();
  std::vector<double> w(tables_.size());
  std::vector<double> prod(count);
  double total = 0.0;
  for (int t = n_; t >= v; --t) {
    const std::uint64_t half = pow2(t - 1);
    double level_sum = 0.0;
    for (std::uint64_t i = 0; i < half; ++i) {
      const std::uint64_t k = 2 * i + 1;
      for (std::size_t j = 0; j < tables_.size(); ++j) w[j] = tables_[j].level(t)[i];
      prod[0] = 1.0;
      double fixed = 0.0;
      double cross = with_r_[0];
      for (std::size_t u = 1; u < count; ++u) {
        prod[u] = prod[u & (u - 1)] * w[std::countr_zero(u)];
        fixed += own_[u] * prod[u];
        cross += with_r_[u] * prod[u];
      }
      level_sum += fixed + log_inv_sin2(k * x, v) * cross;
    }
    total += std::ldexp(level_sum, v - t);
  }
  return total;
}

double h_naive(const WeightScheme& scheme, int n, int v, std::span<const std::uint64_t> previous,
               std::uint64_t x, const Limits& limits) {
  return NaiveQuality(scheme, n, previous, limits)(v, x);
}

PodStateTable::PodStateTable(const WeightScheme& scheme, int n, int s)
    : n_(n), s_(s), logs_((n < 1 || n > 40) ? 1 : n) {
  if (n < 1 || n > 40) throw ValidationError("PodStateTable: n must lie in 1..40");
  if (s < 1 || s > scheme.dimension_bound()) {
    throw ValidationError("PodStateTable: s must lie in 1..dimension bound");
  }
  if (scheme.kind() == WeightScheme::Kind::pod) {
    gammas_ = scheme.as_pod().gammas;
    gamma_order_ = scheme.as_pod().order_weights;
  } else if (scheme.kind() == WeightScheme::Kind::product) {
    gammas_ = scheme.as_product().gammas;
    gamma_order_.assign(gammas_.size() + 1, 1.0);
  } else {
    throw ValidationError("fast POD path requires POD or product weights");
  }
  levels_.resize(n + 1);
  for (int t = 2; t <= n; ++t) levels_[t].assign(static_cast<std::size_t>(s) * pow2(t - 1), 0.0);
  stamp_.assign(n + 1, 0);
}

int PodStateTable::level_component(int t) const {
  if (t < 2 || t > n_) throw ValidationError("PodStateTable: level out of range");
  return stamp_[t];
}

std::span<double> PodStateTable::row(int l, int t) {
  const std::uint64_t half = pow2(t - 1);
  return {levels_[t].data() + static_cast<std::size_t>(l - 1) * half, half};
}

std::span<const double> PodStateTable::row(int l, int t) const {
  const std::uint64_t half = pow2(t - 1);
  return {levels_[t].data() + static_cast<std::size_t>(l - 1) * half, half};
}

double PodStateTable::value(int l, int t, std::uint64_t k) const {
  level_component(t);
  require_odd(k, "PodStateTable::value");
  if (k >= pow2(t)) throw ValidationError("PodStateTable::value: k must be below 2^t");
  if (l == 0) return 1.0;
  if (l < 0 || l > s_) return 0.0;
  return row(l, t)[(k - 1) / 2];
}

std::size_t PodStateTable::table_doubles() const {
  std::size_t total = logs_.size();
  for (const auto& level : levels_) total += level.size();
  return total;
}

void PodStateTable::require_stale_from(int r, int v) const {
  for (int t = v; t <= n_; ++t) {
    if (stamp_[t] != r - 1) {
      throw ValidationError("PodStateTable: level " + std::to_string(t) + " holds component " +
                            std::to_string(stamp_[t]) + ", expected " + std::to_string(r - 1));
    }
  }
}

void PodStateTable::update(int r, int v, std::uint64_t z_rv) {
  if (r < 1 || r > s_) throw ValidationError("pod_update: component out of range");
  if (v < 2 || v > n_) throw ValidationError("pod_update: level out of range");
  require_odd(z_rv, "pod_update");
  if (z_rv >= pow2(v)) throw ValidationError("pod_update: z_{r,v} must be below 2^v");
  if (stamp_[v] != r - 1) {
    throw ValidationError("pod_update: level " + std::to_string(v) + " holds component " +
                          std::to_string(stamp_[v]) + ", expected " + std::to_string(r - 1));
  }
  const std::uint64_t half = pow2(v - 1);
  std::vector<double> w(half);
  const double gamma_r = gammas_[r - 1];
  for (std::uint64_t i = 0; i < half; ++i) w[i] = gamma_r * logs_((2 * i + 1) * z_rv, v);
  for (int l = std::min(r, s_); l >= 2; --l) {
    const double ratio = gamma_order_[l] / gamma_order_[l - 1];
    auto target = row(l, v);
    auto lower = row(l - 1, v);
    for (std::uint64_t i = 0; i < half; ++i) target[i] += ratio * w[i] * lower[i];
  }
  auto first = row(1, v);
  for (std::uint64_t i = 0; i < half; ++i) first[i] += gamma_order_[1] * w[i];
  stamp_[v] = r;
}

std::vector<double> PodStateTable::quality(int r, int v,
                                           std::span<const std::uint64_t> candidates) const {
  check_step(r, v, n_, s_);
  require_stale_from(r, v);
  QualityAccumulator acc(logs_, v, candidates);
  // s1(k) = sum_l (Gamma_{l+1} / Gamma_l) P_l(k); the P_l themselves only enter through their sum.
  std::vector<double> s1;
  for (int t = n_; t >= v; --t) {
    const std::uint64_t half = pow2(t - 1);
    const auto first = row(1, t);
    const double first_ratio = gamma_order_[2] / gamma_order_[1];
    s1.resize(half);
    double s0 = 0.0;
    for (std::uint64_t i = 0; i < half; ++i) {
      s0 += first[i];
      s1[i] = first_ratio * first[i];
    }
    for (int l = 2; l <= r - 1; ++l) {
      const double ratio = gamma_order_[l + 1] / gamma_order_[l];
      const auto p = row(l, t);
      for (std::uint64_t i = 0; i < half; ++i) {
        s0 += p[i];
        s1[i] += ratio * p[i];
      }
    }
    acc.add_level(t, s0, s1);
  }
  const double gamma_r = gammas_[r - 1];
  return acc.finish(n_, gamma_r, gamma_order_[1] * gamma_r);
}

double h_fast_pod(const PodStateTable& state, int r, int v, std::uint64_t x) {
  const std::uint64_t candidates[] = {x};
  return state.quality(r, v, candidates)[0];
}

std::array<double, 2> h_fast_pod_pair(const PodStateTable& state, int r, int v, std::uint64_t x0,
                                      std::uint64_t x1) {
  const std::uint64_t candidates[] = {x0, x1};
  const auto h = state.quality(r, v, candidates);
  return {h[0], h[1]};
}

void pod_update(PodStateTable& state, int r, int v, std::uint64_t z_rv) {
  state.update(r, v, z_rv);
}

ProductStateTable::ProductStateTable(const WeightScheme& scheme, int n, int s)
    : n_(n), s_(s), logs_((n < 1 || n > 40) ? 1 : n) {
  if (n < 1 || n > 40) throw ValidationError("ProductStateTable: n must lie in 1..40");
  if (s < 1 || s > scheme.dimension_bound()) {
    throw ValidationError("ProductStateTable: s must lie in 1..dimension bound");
  }
  gammas_ = scheme.as_product().gammas;
  levels_.resize(n + 1);
  for (int t = 2; t <= n; ++t) levels_[t].assign(pow2(t - 1), 0.0);
  stamp_.assign(n + 1, 0);
}

int ProductStateTable::level_component(int t) const {
  if (t < 2 || t > n_) throw ValidationError("ProductStateTable: level out of range");
  return stamp_[t];
}

double ProductStateTable::value(int t, std::uint64_t k) const {
  level_component(t);
  require_odd(k, "ProductStateTable::value");
  if (k >= pow2(t)) throw ValidationError("ProductStateTable::value: k must be below 2^t");
  return levels_[t][(k - 1) / 2];
}

std::size_t ProductStateTable::table_doubles() const {
  std::size_t total = logs_.size();
  for (const auto& level : levels_) total += level.size();
  return total;
}

void ProductStateTable::update(int r, int v, std::uint64_t z_rv) {
  if (r < 1 || r > s_) throw ValidationError("product update: component out of range");
  if (v < 2 || v > n_) throw ValidationError("product update: level out of range");
  require_odd(z_rv, "product update");
  if (z_rv >= pow2(v)) throw ValidationError("product update: z_{r,v} must be below 2^v");
  if (stamp_[v] != r - 1) throw ValidationError("product update: level holds the wrong component");
  const double gamma_r = gammas_[r - 1];
  auto& q = levels_[v];
  for (std::uint64_t i = 0; i < q.size(); ++i) {
    const double term = gamma_r * logs_((2 * i + 1) * z_rv, v);
    q[i] = q[i] * (1.0 + term) + term;
  }
  stamp_[v] = r;
}

std::vector<double> ProductStateTable::quality(int r, int v,
                                               std::span<const std::uint64_t> candidates) const {
  check_step(r, v, n_, s_);
  for (int t = v; t <= n_; ++t) {
    if (stamp_[t] != r - 1) {
      throw ValidationError("ProductStateTable: level " + std::to_string(t) +
                            " does not hold component r-1");
    }
  }
  QualityAccumulator acc(logs_, v, candidates);
  for (int t = n_; t >= v; --t) {
    double level_sum = 0.0;
    for (double q : levels_[t]) level_sum += q;
    acc.add_level(t, level_sum, levels_[t]);
  }
  const double gamma_r = gammas_[r - 1];
  return acc.finish(n_, gamma_r, gamma_r);
}

}  // namespace cbcdbd
