#include "cbcdbd/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace cbcdbd {

namespace {

void require_positive(double value, const std::string& what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(what + " must be a finite, strictly positive number");
  }
}

void require_dimension(int s, const char* what) {
  if (s < 0 || s > kMaxDimension) {
    throw ValidationError(std::string(what) + ": dimension must lie in 0.." +
                          std::to_string(kMaxDimension));
  }
}

// Factored schemes never index subsets by bitmask, so only emptiness is rejected.
void require_nonempty(std::size_t s, const char* what) {
  if (s == 0 || s > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw ValidationError(std::string(what) + ": need at least one component");
  }
}

Subset lowest_bit(Subset u) { return u & (~u + 1); }

// Elementary symmetric polynomials e_0..e_s of the given values.
std::vector<double> elementary_symmetric(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    for (std::size_t l = j + 1; l >= 1; --l) e[l] += values[j] * e[l - 1];
  }
  return e;
}

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

}  // namespace

Subset make_subset(std::span<const int> components) {
  Subset u = 0;
  for (int j : components) {
    if (j < 1 || j > kMaxDimension) {
      throw ValidationError("subset component " + std::to_string(j) + " out of range");
    }
    u |= Subset{1} << (j - 1);
  }
  return u;
}

std::vector<int> subset_members(Subset u) {
  std::vector<int> out;
  while (u != 0) {
    out.push_back(std::countr_zero(u) + 1);
    u &= u - 1;
  }
  return out;
}

int subset_size(Subset u) { return std::popcount(u); }

Subset leading_subset(int s) {
  require_dimension(s, "leading_subset");
  return s == 64 ? ~Subset{0} : (Subset{1} << s) - 1;
}

void require_enumerable(int s, const Limits& limits, const char* what) {
  if (s > limits.subset_enumeration_cap) {
    throw BudgetExceeded(std::string(what) + ": subset enumeration over " + std::to_string(s) +
                         " components exceeds the cap of " +
                         std::to_string(limits.subset_enumeration_cap));
  }
}

WeightScheme WeightScheme::product(std::vector<double> gammas) {
  require_nonempty(gammas.size(), "product weights");
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    require_positive(gammas[j], "gamma_" + std::to_string(j + 1));
  }
  return WeightScheme(ProductWeights{std::move(gammas)});
}

WeightScheme WeightScheme::pod(std::vector<double> order_weights, std::vector<double> gammas) {
  require_nonempty(gammas.size(), "POD weights");
  if (order_weights.size() != gammas.size() + 1) {
    throw ValidationError("POD weights need Gamma_0..Gamma_s (" +
                          std::to_string(gammas.size() + 1) + " values), got " +
                          std::to_string(order_weights.size()));
  }
  if (order_weights[0] != 1.0) throw ValidationError("POD weights require Gamma_0 = 1");
  for (std::size_t l = 0; l < order_weights.size(); ++l) {
    require_positive(order_weights[l], "Gamma_" + std::to_string(l));
  }
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    require_positive(gammas[j], "gamma_" + std::to_string(j + 1));
  }
  return WeightScheme(PodWeights{std::move(order_weights), std::move(gammas)});
}

WeightScheme WeightScheme::general(int s_max,
                                   const std::vector<std::pair<std::vector<int>, double>>& values,
                                   const Limits& limits) {
  require_dimension(s_max, "general weights");
  require_enumerable(s_max, limits, "general weights");
  const std::size_t count = std::size_t{1} << s_max;
  std::vector<double> table(count, 0.0);
  std::vector<bool> seen(count, false);
  table[0] = 1.0;
  seen[0] = true;
  for (const auto& [members, value] : values) {
    if (members.empty()) throw ValidationError("general weights: empty subset is implicit (1)");
    if (!std::is_sorted(members.begin(), members.end()) ||
        std::adjacent_find(members.begin(), members.end()) != members.end()) {
      throw ValidationError("general weights: subsets must be sorted without repeats");
    }
    if (members.front() < 1 || members.back() > s_max) {
      throw ValidationError("general weights: subset outside {1.." + std::to_string(s_max) + "}");
    }
    const Subset u = make_subset(members);
    if (seen[u]) throw ValidationError("general weights: duplicate subset");
    require_positive(value, "general weight value");
    seen[u] = true;
    table[u] = value;
  }
  for (std::size_t u = 1; u < count; ++u) {
    if (!seen[u]) {
      std::string list;
      for (int j : subset_members(u)) list += (list.empty() ? "" : ",") + std::to_string(j);
      throw ValidationError("general weights: missing value for subset {" + list + "}");
    }
  }
  return WeightScheme(GeneralWeights{s_max, std::move(table)});
}

WeightScheme WeightScheme::general_from_table(int s_max, std::vector<double> table,
                                              const Limits& limits) {
  require_dimension(s_max, "general weights");
  require_enumerable(s_max, limits, "general weights");
  if (table.size() != (std::size_t{1} << s_max)) {
    throw ValidationError("general weights: table size must be 2^s_max");
  }
  if (table[0] != 1.0) throw ValidationError("general weights: gamma of the empty set must be 1");
  for (double value : table) require_positive(value, "general weight value");
  return WeightScheme(GeneralWeights{s_max, std::move(table)});
}

WeightScheme WeightScheme::shifted(Subset v) const {
  if (dimension_bound() < 64 && (v >> dimension_bound()) != 0) {
    throw ValidationError("shift set exceeds the dimension bound");
  }
  return WeightScheme(Shifted{std::make_shared<const WeightScheme>(*this), v});
}

WeightScheme::Kind WeightScheme::kind() const { return static_cast<Kind>(repr_.index()); }

int WeightScheme::dimension_bound() const {
  struct {
    int operator()(const ProductWeights& w) const { return static_cast<int>(w.gammas.size()); }
    int operator()(const PodWeights& w) const { return static_cast<int>(w.gammas.size()); }
    int operator()(const GeneralWeights& w) const { return w.s_max; }
    int operator()(const Shifted& w) const { return w.base->dimension_bound(); }
  } visitor;
  return std::visit(visitor, repr_);
}

double WeightScheme::gamma(Subset u) const {
  const int bound = dimension_bound();
  if (bound < 64 && (u >> bound) != 0) {
    throw ValidationError("subset exceeds the weight dimension bound " + std::to_string(bound));
  }
  struct {
    Subset u;
    double operator()(const ProductWeights& w) const {
      double g = 1.0;
      for (Subset rest = u; rest != 0; rest &= rest - 1) g *= w.gammas[std::countr_zero(rest)];
      return g;
    }
    double operator()(const PodWeights& w) const {
      double g = w.order_weights[std::popcount(u)];
      for (Subset rest = u; rest != 0; rest &= rest - 1) g *= w.gammas[std::countr_zero(rest)];
      return g;
    }
    double operator()(const GeneralWeights& w) const { return w.table[u]; }
    double operator()(const Shifted& w) const { return w.base->gamma(u | w.shift); }
  } visitor{u};
  return std::visit(visitor, repr_);
}

const ProductWeights& WeightScheme::as_product() const {
  if (kind() != Kind::product) throw ValidationError("weight scheme is not of product form");
  return std::get<ProductWeights>(repr_);
}

const PodWeights& WeightScheme::as_pod() const {
  if (kind() != Kind::pod) throw ValidationError("weight scheme is not of POD form");
  return std::get<PodWeights>(repr_);
}

const GeneralWeights& WeightScheme::as_general() const {
  if (kind() != Kind::general) throw ValidationError("weight scheme is not a general table");
  return std::get<GeneralWeights>(repr_);
}

const WeightScheme& WeightScheme::shift_base() const {
  if (kind() != Kind::shifted) throw ValidationError("weight scheme is not a shifted view");
  return *std::get<Shifted>(repr_).base;
}

Subset WeightScheme::shift_set() const {
  if (kind() != Kind::shifted) throw ValidationError("weight scheme is not a shifted view");
  return std::get<Shifted>(repr_).shift;
}

std::vector<double> subset_table(const WeightScheme& scheme, int s, const Limits& limits) {
  if (s > scheme.dimension_bound()) throw ValidationError("subset_table: s exceeds dimension bound");
  require_enumerable(s, limits, "subset_table");
  const std::size_t count = std::size_t{1} << s;
  std::vector<double> table(count);
  switch (scheme.kind()) {
    case WeightScheme::Kind::product:
    case WeightScheme::Kind::pod: {
      const auto& gammas = scheme.kind() == WeightScheme::Kind::product
                               ? scheme.as_product().gammas
                               : scheme.as_pod().gammas;
      table[0] = 1.0;
      for (std::size_t u = 1; u < count; ++u) {
        const Subset low = lowest_bit(u);
        table[u] = table[u ^ low] * gammas[std::countr_zero(low)];
      }
      if (scheme.kind() == WeightScheme::Kind::pod) {
        const auto& order = scheme.as_pod().order_weights;
        for (std::size_t u = 1; u < count; ++u) table[u] *= order[std::popcount(u)];
      }
      break;
    }
    case WeightScheme::Kind::general:
      std::copy_n(scheme.as_general().table.begin(), count, table.begin());
      break;
    case WeightScheme::Kind::shifted:
      for (std::size_t u = 0; u < count; ++u) table[u] = scheme.gamma(u);
      break;
  }
  return table;
}

double tilde_gamma(const WeightScheme& scheme, int j, const Limits& limits) {
  if (j < 1 || j > scheme.dimension_bound()) {
    throw ValidationError("tilde_gamma: component " + std::to_string(j) + " out of range");
  }
  switch (scheme.kind()) {
    case WeightScheme::Kind::product:
      return scheme.as_product().gammas[j - 1];
    case WeightScheme::Kind::pod: {
      const auto& w = scheme.as_pod();
      double best = 0.0;
      for (int l = 0; l <= j - 1; ++l) {
        best = std::max(best, w.order_weights[l + 1] / w.order_weights[l]);
      }
      return w.gammas[j - 1] * best;
    }
    default:
      break;
  }
  require_enumerable(j - 1, limits, "tilde_gamma");
  const Subset with_j = Subset{1} << (j - 1);
  double best = 0.0;
  for (Subset v = 0; v < with_j; ++v) {
    best = std::max(best, scheme.gamma(v | with_j) / scheme.gamma(v));
  }
  return best;
}

WeightScheme pow_weights(const WeightScheme& scheme, double exponent, const Limits& limits) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw ValidationError("pow_weights: exponent must be positive");
  }
  auto powered = [exponent](std::vector<double> values) {
    for (double& x : values) x = std::pow(x, exponent);
    return values;
  };
  switch (scheme.kind()) {
    case WeightScheme::Kind::product:
      return WeightScheme::product(powered(scheme.as_product().gammas));
    case WeightScheme::Kind::pod:
      return WeightScheme::pod(powered(scheme.as_pod().order_weights),
                               powered(scheme.as_pod().gammas));
    case WeightScheme::Kind::general:
      return WeightScheme::general_from_table(scheme.as_general().s_max,
                                              powered(scheme.as_general().table), limits);
    case WeightScheme::Kind::shifted:
      break;
  }
  return pow_weights(scheme.shift_base(), exponent, limits).shifted(scheme.shift_set());
}

std::vector<double> order_profile(const WeightScheme& scheme, int s, double c,
                                  const Limits& limits) {
  if (s < 0 || s > scheme.dimension_bound()) {
    throw ValidationError("order_profile: s exceeds dimension bound");
  }
  if (scheme.is_factored()) {
    const auto& gammas = scheme.kind() == WeightScheme::Kind::product ? scheme.as_product().gammas
                                                                      : scheme.as_pod().gammas;
    std::vector<double> scaled(gammas.begin(), gammas.begin() + s);
    for (double& g : scaled) g *= c;
    auto e = elementary_symmetric(scaled);
    if (scheme.kind() == WeightScheme::Kind::pod) {
      const auto& order = scheme.as_pod().order_weights;
      for (int l = 0; l <= s; ++l) e[l] *= order[l];
    }
    return e;
  }
  require_enumerable(s, limits, "order_profile");
  std::vector<double> powers(s + 1, 1.0);
  for (int l = 1; l <= s; ++l) powers[l] = powers[l - 1] * c;
  std::vector<double> profile(s + 1, 0.0);
  const auto table = subset_table(scheme, s, limits);
  for (std::size_t u = 0; u < table.size(); ++u) {
    const int size = std::popcount(u);
    profile[size] += table[u] * powers[size];
  }
  return profile;
}

std::uint64_t fingerprint(const WeightScheme& scheme) {
  Fnv h;
  h.u64(static_cast<std::uint64_t>(scheme.kind()));
  switch (scheme.kind()) {
    case WeightScheme::Kind::product:
      for (double g : scheme.as_product().gammas) h.f64(g);
      break;
    case WeightScheme::Kind::pod:
      for (double g : scheme.as_pod().order_weights) h.f64(g);
      h.u64(0xfeedULL);
      for (double g : scheme.as_pod().gammas) h.f64(g);
      break;
    case WeightScheme::Kind::general:
      h.u64(static_cast<std::uint64_t>(scheme.as_general().s_max));
      for (double g : scheme.as_general().table) h.f64(g);
      break;
    case WeightScheme::Kind::shifted:
      h.u64(fingerprint(scheme.shift_base()));
      h.u64(scheme.shift_set());
      break;
  }
  return h.h;
}

}  // namespace cbcdbd
