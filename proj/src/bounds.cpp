#include "cbcdbd/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace cbcdbd {

namespace {

double weighted_sum(const std::vector<double>& profile, auto&& size_factor) {
  double sum = 0.0;
  for (std::size_t l = 1; l < profile.size(); ++l) {
    sum += profile[l] * size_factor(static_cast<int>(l));
  }
  return sum;
}

}  // namespace

bool within_bound(double lhs, double rhs) {
  return lhs <= rhs + kBoundSlack * std::max(1.0, std::fabs(rhs));
}

BoundReport make_report(std::string name, double lhs, double rhs, const WeightScheme& scheme,
                        const GeneratingVector& gv) {
  BoundReport report;
  report.name = std::move(name);
  report.lhs = lhs;
  report.rhs = rhs;
  report.satisfied = within_bound(lhs, rhs);
  report.context = {gv.digits(), gv.dimension(), fingerprint(scheme), fingerprint(gv)};
  return report;
}

double prop1_factor(double alpha, const WeightScheme& scheme, int s, const Limits& limits) {
  if (!(alpha > 1.0)) throw ValidationError("prop1: alpha must exceed 1");
  const double c = 4.0 * std::riemann_zeta(alpha);
  return weighted_sum(order_profile(scheme, s, c, limits), [](int) { return 1.0; });
}

double thm2_rhs(const WeightScheme& scheme, int s, int n, double h_value, const Limits& limits) {
  const double big_n = std::ldexp(1.0, n);
  const double log_n = std::log(big_n);
  const double log4 = std::log(4.0);
  // Each term is sum_u gamma_u c^|u| f(|u|); the profile supplies sum_{|u|=l} gamma_u.
  const auto weights = order_profile(scheme, s, 1.0, limits);
  const auto power_sum = [&](double c, auto&& f) {
    double sum = 0.0;
    for (std::size_t l = 1; l < weights.size(); ++l) {
      sum += weights[l] * std::pow(c, static_cast<double>(l)) * f(static_cast<int>(l));
    }
    return sum;
  };
  const auto one = [](int) { return 1.0; };
  const double first = power_sum(log4 + 2.0 * (1.0 + log_n), one) / big_n;
  const double second = power_sum(log4, one);
  const double third =
      power_sum(1.0 + 2.0 * log_n, [](int l) { return 2.0 * l; }) * (1.0 + log_n) / big_n;
  return first - second + third + h_value / big_n;
}

BoundReport check_thm2(const WeightScheme& scheme, const GeneratingVector& gv,
                       const Limits& limits) {
  const double t1 = t_brute_force(1.0, scheme, gv, limits);
  const double h = h_direct(scheme, gv, limits);
  return make_report("thm2", t1, thm2_rhs(scheme, gv.dimension(), gv.digits(), h, limits), scheme,
                     gv);
}

BoundReport check_h_induction(const WeightScheme& scheme, const GeneratingVector& gv, int r,
                              const Limits& limits) {
  if (r < 2 || r > gv.dimension()) throw ValidationError("H induction: r must lie in 2..s");
  const auto current = gv.leading(r);
  const auto previous = gv.leading(r - 1);
  const Subset r_set = Subset{1} << (r - 1);
  const double big_n = static_cast<double>(gv.points());
  const double lhs = h_direct(scheme, current, limits);
  const double rhs =
      h_direct(scheme, previous, limits) +
      std::log(4.0) * (scheme.gamma(r_set) * big_n + h_direct(scheme.shifted(r_set), previous, limits));
  auto report = make_report("induction[r=" + std::to_string(r) + "]", lhs, rhs, scheme, gv);
  if (!gv.has_digit_history()) {
    report.annotation = "vector has no digit provenance; inequality only guaranteed for constructed vectors";
  }
  return report;
}

double h_bound_general_rhs(const WeightScheme& scheme, int s, int n, const Limits& limits) {
  const auto profile = order_profile(scheme, s, std::log(4.0), limits);
  return std::ldexp(weighted_sum(profile, [](int) { return 1.0; }), n);
}

BoundReport check_h_bound_general(const WeightScheme& scheme, const GeneratingVector& gv,
                                  const Limits& limits) {
  auto report = make_report("hbound", h_direct(scheme, gv, limits),
                            h_bound_general_rhs(scheme, gv.dimension(), gv.digits(), limits),
                            scheme, gv);
  if (!gv.has_digit_history()) {
    report.annotation = "vector has no digit provenance; inequality only guaranteed for constructed vectors";
  }
  return report;
}

BoundReport check_prop1(int alpha, const WeightScheme& scheme, const GeneratingVector& gv,
                        const Limits& limits) {
  const double dual = dual_error_even_alpha(alpha, scheme, gv, limits);
  const double truncated = t_brute_force(alpha, scheme, gv, limits);
  const double rhs = prop1_factor(alpha, scheme, gv.dimension(), limits) /
                     std::pow(static_cast<double>(gv.points()), alpha);
  return make_report("prop1[alpha=" + std::to_string(alpha) + "]", dual - truncated, rhs, scheme,
                     gv);
}

double summability_diagnostic(const WeightScheme& scheme, int s, const Limits& limits) {
  double sum = 0.0;
  for (int j = 1; j <= s; ++j) sum += tilde_gamma(scheme, j, limits);
  return sum;
}

}  // namespace cbcdbd
