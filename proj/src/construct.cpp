#include "cbcdbd/construct.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>

#include "cbcdbd/quality.hpp"

namespace cbcdbd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate(const ConstructionConfig& config) {
  if (config.n < 1 || config.n > 40) throw ValidationError("construction: n must lie in 1..40");
  if (config.s < 1 || config.s > kMaxDimension) {
    throw ValidationError("construction: s must lie in 1.." + std::to_string(kMaxDimension));
  }
  if (config.s > config.weights.dimension_bound()) {
    throw ValidationError("construction: s = " + std::to_string(config.s) +
                          " exceeds the weight dimension bound " +
                          std::to_string(config.weights.dimension_bound()));
  }
}

class NaiveEngine {
 public:
  explicit NaiveEngine(const ConstructionConfig& config) : config_(config) {
    require_enumerable(config.s - 1, config.limits, "naive construction");
  }
  void start() {}
  void begin(int, std::span<const std::uint64_t> previous) {
    quality_.emplace(config_.weights, config_.n, previous, config_.limits);
  }
  std::array<double, 2> evaluate(int, int v, std::uint64_t x0, std::uint64_t x1) const {
    return {(*quality_)(v, x0), (*quality_)(v, x1)};
  }
  void update(int, int, std::uint64_t) {}
  std::size_t table_doubles() const { return 0; }

 private:
  const ConstructionConfig& config_;
  std::optional<NaiveQuality> quality_;
};

class PodEngine {
 public:
  explicit PodEngine(const ConstructionConfig& config)
      : n_(config.n), state_(config.weights, config.n, config.s) {}
  void start() {
    for (int t = 2; t <= n_; ++t) state_.update(1, t, 1);
  }
  void begin(int, std::span<const std::uint64_t>) {}
  std::array<double, 2> evaluate(int r, int v, std::uint64_t x0, std::uint64_t x1) const {
    return h_fast_pod_pair(state_, r, v, x0, x1);
  }
  void update(int r, int v, std::uint64_t z) { pod_update(state_, r, v, z); }
  std::size_t table_doubles() const { return state_.table_doubles(); }

 private:
  int n_;
  PodStateTable state_;
};

class ProductEngine {
 public:
  explicit ProductEngine(const ConstructionConfig& config)
      : n_(config.n), state_(config.weights, config.n, config.s) {}
  void start() {
    for (int t = 2; t <= n_; ++t) state_.update(1, t, 1);
  }
  void begin(int, std::span<const std::uint64_t>) {}
  std::array<double, 2> evaluate(int r, int v, std::uint64_t x0, std::uint64_t x1) const {
    const std::uint64_t candidates[] = {x0, x1};
    const auto h = state_.quality(r, v, candidates);
    return {h[0], h[1]};
  }
  void update(int r, int v, std::uint64_t z) { state_.update(r, v, z); }
  std::size_t table_doubles() const { return state_.table_doubles(); }

 private:
  int n_;
  ProductStateTable state_;
};

void fill_diagnostics(const ConstructionConfig& config, const GeneratingVector& gv,
                      Diagnostics& diagnostics) {
  if (!config.with_diagnostics) return;
  const auto start = Clock::now();
  try {
    diagnostics.h_value = h_direct(config.weights, gv, config.limits);
    const auto profile = order_profile(config.weights, config.s, std::log(4.0), config.limits);
    double sum = 0.0;
    for (std::size_t l = 1; l < profile.size(); ++l) sum += profile[l];
    diagnostics.bound_values["hbound_rhs"] = static_cast<double>(gv.points()) * sum;
  } catch (const BudgetExceeded&) {
    diagnostics.h_value.reset();
  }
  diagnostics.timing_seconds["h_direct"] = seconds_since(start);
}

template <class Engine>
ConstructionResult run(const ConstructionConfig& config, Engine& engine, ConstructionPath path,
                       const StepObserver& observer) {
  const auto start = Clock::now();
  const int n = config.n;
  std::vector<std::uint64_t> z{1};
  std::vector<std::vector<std::uint64_t>> history{std::vector<std::uint64_t>(n, 1)};
  Diagnostics diagnostics;
  diagnostics.path = to_string(path);

  engine.start();
  for (int r = 2; r <= config.s; ++r) {
    engine.begin(r, z);
    std::uint64_t z_r = 1;
    std::vector<std::uint64_t> digits{1};
    for (int v = 2; v <= n; ++v) {
      DigitStep step;
      step.r = r;
      step.v = v;
      step.candidates = {z_r, z_r + (std::uint64_t{1} << (v - 1))};
      step.quality = engine.evaluate(r, v, step.candidates[0], step.candidates[1]);
      diagnostics.quality_evaluations += 2;
      step.chosen = prefers_upper_digit(step.quality[0], step.quality[1]) ? 1 : 0;
      step.previous = z;
      z_r = step.candidates[step.chosen];
      if (observer) observer(step);
      engine.update(r, v, z_r);
      digits.push_back(z_r);
    }
    z.push_back(z_r);
    history.push_back(std::move(digits));
  }
  diagnostics.table_doubles = engine.table_doubles();
  diagnostics.timing_seconds["construct"] = seconds_since(start);

  GeneratingVector gv(n, std::move(z), std::move(history));
  fill_diagnostics(config, gv, diagnostics);
  return {std::move(gv), std::move(diagnostics)};
}

}  // namespace

std::string to_string(ConstructionPath path) {
  switch (path) {
    case ConstructionPath::automatic: return "auto";
    case ConstructionPath::naive: return "naive";
    case ConstructionPath::fast_pod: return "fast-pod";
    case ConstructionPath::fast_product: return "fast-product";
  }
  return "unknown";
}

ConstructionPath parse_construction_path(const std::string& name) {
  if (name == "auto") return ConstructionPath::automatic;
  if (name == "naive") return ConstructionPath::naive;
  if (name == "fast-pod") return ConstructionPath::fast_pod;
  if (name == "fast-product") return ConstructionPath::fast_product;
  throw ValidationError("unknown construction path '" + name + "'");
}

ConstructionResult cbc_dbd_naive(const ConstructionConfig& config, const StepObserver& observer) {
  validate(config);
  NaiveEngine engine(config);
  return run(config, engine, ConstructionPath::naive, observer);
}

ConstructionResult cbc_dbd_fast_pod(const ConstructionConfig& config,
                                    const StepObserver& observer) {
  validate(config);
  PodEngine engine(config);
  return run(config, engine, ConstructionPath::fast_pod, observer);
}

ConstructionResult cbc_dbd_fast_product(const ConstructionConfig& config,
                                        const StepObserver& observer) {
  validate(config);
  if (config.weights.kind() != WeightScheme::Kind::product) {
    throw ValidationError("fast product path requires product weights");
  }
  ProductEngine engine(config);
  return run(config, engine, ConstructionPath::fast_product, observer);
}

ConstructionResult construct(const ConstructionConfig& config, const StepObserver& observer) {
  switch (config.path) {
    case ConstructionPath::naive: return cbc_dbd_naive(config, observer);
    case ConstructionPath::fast_pod: return cbc_dbd_fast_pod(config, observer);
    case ConstructionPath::fast_product: return cbc_dbd_fast_product(config, observer);
    case ConstructionPath::automatic: break;
  }
  switch (config.weights.kind()) {
    case WeightScheme::Kind::product: return cbc_dbd_fast_product(config, observer);
    case WeightScheme::Kind::pod: return cbc_dbd_fast_pod(config, observer);
    default: return cbc_dbd_naive(config, observer);
  }
}

}  // namespace cbcdbd
