#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cbcdbd/construct.hpp"
#include "cbcdbd/errors.hpp"
#include "cbcdbd/weights.hpp"

namespace cbcdbd {

/// Worker count from CBCDBD_WORKERS, else the hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count) on `workers` threads. Results must be stored by index.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

/// Deterministic per-instance seed.
std::uint64_t instance_seed(std::uint64_t seed, int n, int s, int draw);

enum class WeightFamily { product, pod, general, mixed };

WeightFamily parse_weight_family(const std::string& name);
std::string to_string(WeightFamily family);

/// Random positive weights on s components:
///   product: gamma_j log-uniform in [0.01, 1];
///   pod:     same gamma_j and Gamma_l one of {1, l!, 1/l!} (chosen per draw);
///   general: every gamma_u log-uniform in [0.01, 1].
/// `mixed` cycles product, pod, general by draw index (general only for s <= 8).
WeightScheme draw_weights(WeightFamily family, int s, int draw, std::mt19937_64& rng);

/// Checks understood by run_campaigns, in output order.
inline const std::vector<std::string> kCampaigns = {"thm2", "induction", "hbound", "prop1"};

struct CampaignConfig {
  std::vector<std::string> campaigns;
  int n_min = 1;
  int n_max = 1;
  int s_min = 1;
  int s_max = 1;
  int draws = 0;
  std::uint64_t seed = 0;
  WeightFamily family = WeightFamily::mixed;
  Limits limits;
  unsigned workers = 0;  // 0: worker_count()
};

enum class RowStatus { satisfied, violated, skipped };

struct CampaignRow {
  std::string campaign;
  std::string theorem;
  int n = 0;
  int s = 0;
  int draw = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  RowStatus status = RowStatus::skipped;
  std::uint64_t seed = 0;
  std::string note;
};

/// Constructs one vector per (n, s, draw) and checks the selected inequalities on it.
/// Rows are ordered by (campaign, n, s, draw) regardless of scheduling.
std::vector<CampaignRow> run_campaigns(const CampaignConfig& config);

std::string campaign_csv(const std::vector<CampaignRow>& rows);

struct ConvergencePoint {
  int n = 0;
  std::uint64_t points = 0;
  double dual_error = 0.0;
  std::vector<std::uint64_t> z;
};

/// One construction per n in [n_lo, n_hi], error measured in the space with weights `target`.
/// The vector is built for target^(1/alpha) unless `universal` (then built for target itself
/// and measured with target^alpha).
std::vector<ConvergencePoint> convergence_series(int alpha, const WeightScheme& target, int s,
                                                 int n_lo, int n_hi, bool universal,
                                                 const Limits& limits = {});

/// Least-squares slope of log(error) against log(N).
double fitted_slope(const std::vector<ConvergencePoint>& series);

struct BenchRow {
  ConstructionPath path = ConstructionPath::fast_pod;
  int n = 0;
  int s = 0;
  double median_seconds = 0.0;
  std::size_t table_doubles = 0;
};

/// Weights used for timing: gamma_j = 1/j^2 and, for POD, Gamma_l = l!.
WeightScheme bench_weights(ConstructionPath path, int s);

BenchRow bench_construction(ConstructionPath path, int n, int s, int repeats);

}  // namespace cbcdbd
