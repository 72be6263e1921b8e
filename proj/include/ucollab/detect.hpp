#pragma once

#include <cstdint>

#include "ucollab/collaboration.hpp"

namespace ucollab {

/// Standard normal CDF and upper tail Q(x) = 1 - Phi(x).
double normal_cdf(double x);
double normal_tail(double x);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Power of the matched statistic (P_w s)^T x at false-alarm rate pfa:
/// Q(Q^{-1}(pfa) - ||P_w s|| / sigma).
double pd_closed_form(const Matrix& w, const Vector& s, double sigma, double pfa,
                      RankPolicy policy = RankPolicy::Strict);

struct DetectionResult {
  Index signal_index = 0;
  double deflection = 0.0;  // ||P_w s||^2 / sigma^2
  double pfa = 0.0;
  double pd_closed_form = 0.0;
  double pd_monte_carlo = 0.0;
  double pd_half_width = 0.0;  // 95% Wilson half-width
  double pfa_monte_carlo = 0.0;
  Index trials = 0;  // total, split evenly between the hypotheses

  bool consistent() const;
};

/// Simulates x = n and x = s + n with n ~ N(0, sigma^2 I), forms y = W x and
/// thresholds the normalized matched statistic at the analytic level for pfa.
/// Trials are generated in fixed-size blocks, each seeded from (seed, block).
DetectionResult simulate_detection(const CollaborationMatrix& w, const SignalClass& signal_class,
                                   Index signal_index, double sigma, double pfa, Index trials,
                                   std::uint64_t seed);

}  // namespace ucollab
