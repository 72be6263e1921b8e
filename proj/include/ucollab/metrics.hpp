#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ucollab/collaboration.hpp"

namespace ucollab {

struct Deflection {
  double cdc = 0.0;
  Vector per_signal;  // s_i^T P_w s_i
};

/// Cumulative deflection coefficient: sum_i s_i^T P_w s_i.
Deflection cumulative_dc(const Matrix& w, const SignalClass& signal_class,
                         RankPolicy policy = RankPolicy::Strict);
Deflection cumulative_dc(const CollaborationMatrix& w, const SignalClass& signal_class);

/// C-DC divided by sum_i ||s_i||^2. Throws ZeroSignalClass for an all-zero class.
double cost_of_universality(const Matrix& w, const SignalClass& signal_class,
                            RankPolicy policy = RankPolicy::Strict);
double cost_of_universality(const CollaborationMatrix& w, const SignalClass& signal_class);

double cost_of_collaboration(const DesignSpec& spec);

/// Fraction of entries with |w| > zero_tol. The default tolerance is
/// 1e-8 * max|W|.
double active_link_ratio(const Matrix& w, std::optional<double> zero_tol = std::nullopt);

struct MetricsReport {
  double cdc = 0.0;
  Vector per_signal_dc;
  double cdc_upper_bound = 0.0;
  double cost_universality = 0.0;
  double cost_collaboration = 0.0;
  double active_link_ratio = 0.0;
  /// C-DC relative to the cost-free optimum for the same class and M.
  double normalized_cdc = 0.0;
};

MetricsReport evaluate(const CollaborationMatrix& w, const SignalClass& signal_class);

nlohmann::json to_json(const MetricsReport& report);
/// Flat "key,value" record, one metric per line after a header.
std::string to_csv(const MetricsReport& report);

}  // namespace ucollab
