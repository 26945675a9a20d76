#include "cbcdbd/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "cbcdbd/bounds.hpp"
#include "cbcdbd/io.hpp"
#include "cbcdbd/lattice.hpp"

namespace cbcdbd {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> unit(std::log(lo), std::log(hi));
  return std::exp(unit(rng));
}

CampaignRow row_from(const std::string& campaign, const BoundReport& report, int draw,
                     std::uint64_t seed) {
  CampaignRow row;
  row.campaign = campaign;
  row.theorem = report.name;
  row.n = report.context.n;
  row.s = report.context.s;
  row.draw = draw;
  row.lhs = report.lhs;
  row.rhs = report.rhs;
  row.status = report.satisfied ? RowStatus::satisfied : RowStatus::violated;
  row.seed = seed;
  row.note = report.annotation;
  return row;
}

CampaignRow skipped_row(const std::string& campaign, const std::string& theorem, int n, int s,
                        int draw, std::uint64_t seed, const std::string& why) {
  CampaignRow row;
  row.campaign = campaign;
  row.theorem = theorem;
  row.n = n;
  row.s = s;
  row.draw = draw;
  row.lhs = std::nan("");
  row.rhs = std::nan("");
  row.status = RowStatus::skipped;
  row.seed = seed;
  row.note = why;
  return row;
}

// Rows for one campaign on one constructed instance.
std::vector<CampaignRow> check_instance(const std::string& campaign, const WeightScheme& weights,
                                        const GeneratingVector& gv, int draw, std::uint64_t seed,
                                        const Limits& limits) {
  std::vector<CampaignRow> rows;
  const int n = gv.digits();
  const int s = gv.dimension();
  auto guarded = [&](const std::string& theorem, auto&& check) {
    try {
      rows.push_back(row_from(campaign, check(), draw, seed));
    } catch (const BudgetExceeded& e) {
      rows.push_back(skipped_row(campaign, theorem, n, s, draw, seed, e.what()));
    }
  };
  if (campaign == "thm2") {
    guarded("thm2", [&] { return check_thm2(weights, gv, limits); });
  } else if (campaign == "induction") {
    for (int r = 2; r <= s; ++r) {
      guarded("induction[r=" + std::to_string(r) + "]",
              [&] { return check_h_induction(weights, gv, r, limits); });
    }
  } else if (campaign == "hbound") {
    guarded("hbound", [&] { return check_h_bound_general(weights, gv, limits); });
  } else if (campaign == "prop1") {
    guarded("prop1[alpha=2]", [&] { return check_prop1(2, weights, gv, limits); });
  } else {
    throw ValidationError("unknown campaign '" + campaign + "'");
  }
  return rows;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("CBCDBD_WORKERS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value >= 1) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t instance_seed(std::uint64_t seed, int n, int s, int draw) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ static_cast<std::uint64_t>(n));
  h = splitmix(h ^ static_cast<std::uint64_t>(s));
  return splitmix(h ^ static_cast<std::uint64_t>(draw));
}

WeightFamily parse_weight_family(const std::string& name) {
  if (name == "product") return WeightFamily::product;
  if (name == "pod") return WeightFamily::pod;
  if (name == "general") return WeightFamily::general;
  if (name == "mixed") return WeightFamily::mixed;
  throw ValidationError("unknown weight family '" + name + "'");
}

std::string to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::product: return "product";
    case WeightFamily::pod: return "pod";
    case WeightFamily::general: return "general";
    case WeightFamily::mixed: return "mixed";
  }
  return "unknown";
}

WeightScheme draw_weights(WeightFamily family, int s, int draw, std::mt19937_64& rng) {
  if (family == WeightFamily::mixed) {
    static constexpr WeightFamily cycle[] = {WeightFamily::product, WeightFamily::pod,
                                             WeightFamily::general};
    family = cycle[draw % 3];
    if (family == WeightFamily::general && s > 8) family = WeightFamily::pod;
  }
  std::vector<double> gammas(s);
  for (double& g : gammas) g = log_uniform(rng, 0.01, 1.0);
  switch (family) {
    case WeightFamily::product:
      return WeightScheme::product(std::move(gammas));
    case WeightFamily::pod: {
      const int shape = std::uniform_int_distribution<int>(0, 2)(rng);
      std::vector<double> order(s + 1, 1.0);
      double factorial = 1.0;
      for (int l = 1; l <= s; ++l) {
        factorial *= l;
        order[l] = shape == 0 ? 1.0 : shape == 1 ? factorial : 1.0 / factorial;
      }
      return WeightScheme::pod(std::move(order), std::move(gammas));
    }
    case WeightFamily::general: {
      std::vector<double> table(std::size_t{1} << s, 1.0);
      for (std::size_t u = 1; u < table.size(); ++u) table[u] = log_uniform(rng, 0.01, 1.0);
      return WeightScheme::general_from_table(s, std::move(table));
    }
    case WeightFamily::mixed:
      break;
  }
  throw ValidationError("draw_weights: unreachable family");
}

std::vector<CampaignRow> run_campaigns(const CampaignConfig& config) {
  for (const auto& c : config.campaigns) {
    if (std::find(kCampaigns.begin(), kCampaigns.end(), c) == kCampaigns.end()) {
      throw ValidationError("unknown campaign '" + c + "'");
    }
  }
  if (config.n_min < 1 || config.n_max > 40 || config.s_min < 1 || config.s_max > kMaxDimension ||
      config.draws < 0) {
    throw ValidationError("campaign grid out of range");
  }
  struct Instance {
    int n, s, draw;
  };
  std::vector<Instance> instances;
  for (int n = config.n_min; n <= config.n_max; ++n) {
    for (int s = config.s_min; s <= config.s_max; ++s) {
      for (int d = 0; d < config.draws; ++d) instances.push_back({n, s, d});
    }
  }
  // Ordered campaign list without duplicates.
  std::vector<std::string> campaigns;
  for (const auto& c : kCampaigns) {
    if (std::find(config.campaigns.begin(), config.campaigns.end(), c) != config.campaigns.end()) {
      campaigns.push_back(c);
    }
  }

  std::vector<std::vector<std::vector<CampaignRow>>> results(
      instances.size(), std::vector<std::vector<CampaignRow>>(campaigns.size()));
  parallel_for(instances.size(), config.workers == 0 ? worker_count() : config.workers,
               [&](std::size_t i) {
                 const auto [n, s, draw] = instances[i];
                 const std::uint64_t seed = instance_seed(config.seed, n, s, draw);
                 std::mt19937_64 rng(seed);
                 const auto weights = draw_weights(config.family, s, draw, rng);
                 try {
                   const auto built = construct(
                       {.n = n, .s = s, .weights = weights, .limits = config.limits,
                        .with_diagnostics = false});
                   for (std::size_t c = 0; c < campaigns.size(); ++c) {
                     results[i][c] = check_instance(campaigns[c], weights, built.vector, draw,
                                                    seed, config.limits);
                   }
                 } catch (const BudgetExceeded& e) {
                   for (std::size_t c = 0; c < campaigns.size(); ++c) {
                     results[i][c] = {skipped_row(campaigns[c], campaigns[c], n, s, draw, seed,
                                                  e.what())};
                   }
                 }
               });

  std::vector<CampaignRow> rows;
  for (std::size_t c = 0; c < campaigns.size(); ++c) {
    for (auto& per_instance : results) {
      for (auto& row : per_instance[c]) rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string campaign_csv(const std::vector<CampaignRow>& rows) {
  std::string out = "campaign,theorem,n,s,lhs,rhs,satisfied,seed\n";
  for (const auto& row : rows) {
    const char* status = row.status == RowStatus::satisfied ? "true"
                         : row.status == RowStatus::violated ? "false"
                                                             : "skipped";
    out += row.campaign + "," + row.theorem + "," + std::to_string(row.n) + "," +
           std::to_string(row.s) + "," +
           (row.status == RowStatus::skipped ? "" : io::format_double(row.lhs)) + "," +
           (row.status == RowStatus::skipped ? "" : io::format_double(row.rhs)) + "," + status +
           "," + std::to_string(row.seed) + "\n";
  }
  return out;
}

std::vector<ConvergencePoint> convergence_series(int alpha, const WeightScheme& target, int s,
                                                 int n_lo, int n_hi, bool universal,
                                                 const Limits& limits) {
  bernoulli_kernel(alpha, 0.0);
  if (n_lo < 1 || n_hi < n_lo) throw ValidationError("convergence: empty n-range");
  const WeightScheme build = universal ? target : pow_weights(target, 1.0 / alpha, limits);
  const WeightScheme measure = universal ? pow_weights(target, alpha, limits) : target;
  std::vector<ConvergencePoint> series;
  for (int n = n_lo; n <= n_hi; ++n) {
    const auto built =
        construct({.n = n, .s = s, .weights = build, .limits = limits, .with_diagnostics = false});
    ConvergencePoint point;
    point.n = n;
    point.points = built.vector.points();
    point.dual_error = dual_error_even_alpha(alpha, measure, built.vector, limits);
    point.z.assign(built.vector.components().begin(), built.vector.components().end());
    series.push_back(std::move(point));
  }
  return series;
}

double fitted_slope(const std::vector<ConvergencePoint>& series) {
  if (series.size() < 2) throw ValidationError("fitted_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& p : series) {
    mx += std::log(static_cast<double>(p.points));
    my += std::log(p.dual_error);
  }
  mx /= static_cast<double>(series.size());
  my /= static_cast<double>(series.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : series) {
    const double dx = std::log(static_cast<double>(p.points)) - mx;
    sxy += dx * (std::log(p.dual_error) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

WeightScheme bench_weights(ConstructionPath path, int s) {
  std::vector<double> gammas(s);
  for (int j = 1; j <= s; ++j) gammas[j - 1] = 1.0 / (static_cast<double>(j) * j);
  if (path == ConstructionPath::fast_product) return WeightScheme::product(std::move(gammas));
  std::vector<double> order(s + 1, 1.0);
  for (int l = 1; l <= s; ++l) order[l] = order[l - 1] * l;
  return WeightScheme::pod(std::move(order), std::move(gammas));
}

BenchRow bench_construction(ConstructionPath path, int n, int s, int repeats) {
  if (path != ConstructionPath::fast_pod && path != ConstructionPath::fast_product) {
    throw ValidationError("bench: path must be fast-pod or fast-product");
  }
  if (repeats < 1) throw ValidationError("bench: repeats must be positive");
  const auto weights = bench_weights(path, s);
  std::vector<double> times;
  BenchRow row{path, n, s, 0.0, 0};
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const auto built = construct(
        {.n = n, .s = s, .weights = weights, .path = path, .limits = {},
         .with_diagnostics = false});
    times.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    row.table_doubles = built.diagnostics.table_doubles;
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  row.median_seconds = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  return row;
}

}  // namespace cbcdbd
