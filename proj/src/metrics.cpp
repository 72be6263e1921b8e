#include "ucollab/metrics.hpp"

#include <cmath>

#include "ucollab/csv.hpp"
#include "ucollab/errors.hpp"

namespace ucollab {

Deflection cumulative_dc(const Matrix& w, const SignalClass& signal_class, RankPolicy policy) {
  require(w.cols() == signal_class.dimension(), "W and signal class disagree on N");
  const Projector p = projector_of(w, policy);
  const Matrix& s = signal_class.signals();
  // Row i of S P is (P s_i)^T since P is symmetric.
  const Matrix projected = s * p.matrix;
  Deflection out;
  out.per_signal = projected.rowwise().squaredNorm();
  out.cdc = out.per_signal.sum();
  return out;
}

Deflection cumulative_dc(const CollaborationMatrix& w, const SignalClass& signal_class) {
  return cumulative_dc(w.weights, signal_class, w.rank_policy());
}

double cost_of_universality(const Matrix& w, const SignalClass& signal_class, RankPolicy policy) {
  const double energy = signal_class.total_energy();
  if (energy == 0.0) fail(ErrorKind::ZeroSignalClass, "every signal in the class is zero");
  return cumulative_dc(w, signal_class, policy).cdc / energy;
}

double cost_of_universality(const CollaborationMatrix& w, const SignalClass& signal_class) {
  return cost_of_universality(w.weights, signal_class, w.rank_policy());
}

double cost_of_collaboration(const DesignSpec& spec) { return spec.gammas.cwiseAbs().sum(); }

double active_link_ratio(const Matrix& w, std::optional<double> zero_tol) {
  if (w.size() == 0) return 0.0;
  const double tol = zero_tol ? *zero_tol : 1e-8 * w.cwiseAbs().maxCoeff();
  require(tol >= 0.0, "zero tolerance must be >= 0");
  const auto active = (w.array().abs() > tol).count();
  return static_cast<double>(active) / static_cast<double>(w.size());
}

MetricsReport evaluate(const CollaborationMatrix& w, const SignalClass& signal_class) {
  MetricsReport r;
  const Deflection d = cumulative_dc(w, signal_class);
  r.cdc = d.cdc;
  r.per_signal_dc = d.per_signal;
  r.cdc_upper_bound = signal_class.total_energy();
  if (r.cdc_upper_bound == 0.0) fail(ErrorKind::ZeroSignalClass, "every signal in the class is zero");
  r.cost_universality = r.cdc / r.cdc_upper_bound;
  r.cost_collaboration = cost_of_collaboration(w.spec);
  r.active_link_ratio = active_link_ratio(w.weights);

  // Cost-free optimum for the same M: the M largest eigenvalues of Omega,
  // equivalently of S S^T.
  const Matrix& s = signal_class.signals();
  const Eigen::SelfAdjointEigenSolver<Matrix> small(s * s.transpose(), Eigen::EigenvaluesOnly);
  const Vector lambdas = small.eigenvalues().reverse();
  const Index top = std::min<Index>(w.rows(), lambdas.size());
  const double optimum = lambdas.head(top).sum();
  r.normalized_cdc = optimum > 0.0 ? r.cdc / optimum : std::nan("");
  return r;
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json j;
  j["cdc"] = report.cdc;
  nlohmann::json per = nlohmann::json::array();
  for (Index k = 0; k < report.per_signal_dc.size(); ++k) per.push_back(report.per_signal_dc(k));
  j["per_signal_dc"] = per;
  j["cdc_upper_bound"] = report.cdc_upper_bound;
  j["cost_universality"] = report.cost_universality;
  j["cost_collaboration"] = report.cost_collaboration;
  j["active_link_ratio"] = report.active_link_ratio;
  j["normalized_cdc"] = report.normalized_cdc;
  return j;
}

std::string to_csv(const MetricsReport& report) {
  csv::Table t;
  t.columns = {"key", "value"};
  auto add = [&t](const std::string& key, double v) { t.add_row({key, csv::format_number(v)}); };
  add("cdc", report.cdc);
  add("cdc_upper_bound", report.cdc_upper_bound);
  add("cost_universality", report.cost_universality);
  add("cost_collaboration", report.cost_collaboration);
  add("active_link_ratio", report.active_link_ratio);
  add("normalized_cdc", report.normalized_cdc);
  for (Index k = 0; k < report.per_signal_dc.size(); ++k)
    add("dc_" + std::to_string(k), report.per_signal_dc(k));
  return t.to_string();
}

}  // namespace ucollab
