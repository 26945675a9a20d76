#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "cbcdbd/errors.hpp"
#include "cbcdbd/lattice.hpp"
#include "cbcdbd/weights.hpp"

namespace cbcdbd {

enum class ConstructionPath { automatic, naive, fast_pod, fast_product };

std::string to_string(ConstructionPath path);
ConstructionPath parse_construction_path(const std::string& name);

struct ConstructionConfig {
  int n = 1;
  int s = 1;
  WeightScheme weights;
  ConstructionPath path = ConstructionPath::automatic;
  Limits limits;
  /// Compute H of the final vector (and the general H bound) into the diagnostics.
  bool with_diagnostics = true;
};

/// One digit decision of the search: candidates z_{r,v-1} and z_{r,v-1} + 2^{v-1}.
struct DigitStep {
  int r = 0;
  int v = 0;
  std::array<std::uint64_t, 2> candidates{};
  std::array<double, 2> quality{};
  int chosen = 0;
  std::span<const std::uint64_t> previous;  // z_1..z_{r-1}
};

/// Relative gap below which two candidate qualities count as tied. Exact mathematical ties
/// occur (e.g. r = 2, z_1 = 1, candidates 5 and 13 at v = 4) and different evaluation orders
/// round them differently; a few ulps of slack makes every path break them the same way.
inline constexpr double kTieTolerance = 1e-13;

/// True when the candidate with digit 1 is strictly better beyond the tie tolerance.
inline bool prefers_upper_digit(double h0, double h1) {
  return h1 < h0 - kTieTolerance * std::max(std::fabs(h0), std::fabs(h1));
}

using StepObserver = std::function<void(const DigitStep&)>;

struct ConstructionResult {
  GeneratingVector vector;
  Diagnostics diagnostics;
};

/// Component-by-component digit-by-digit construction, dispatching on config.path.
/// `automatic` picks fast_product for product weights, fast_pod for POD, naive otherwise.
/// Ties between the two digit candidates (within kTieTolerance) go to the smaller digit.
ConstructionResult construct(const ConstructionConfig& config, const StepObserver& observer = {});

/// Generic construction evaluating the quality function from its definition.
ConstructionResult cbc_dbd_naive(const ConstructionConfig& config,
                                 const StepObserver& observer = {});
/// Fast construction for POD weights (product weights run with Gamma = 1).
ConstructionResult cbc_dbd_fast_pod(const ConstructionConfig& config,
                                    const StepObserver& observer = {});
/// Fast construction for product weights with one accumulator per level.
ConstructionResult cbc_dbd_fast_product(const ConstructionConfig& config,
                                        const StepObserver& observer = {});

}  // namespace cbcdbd
