#include "ucollab/detect.hpp"

#include <cmath>
#include <numbers>

#include "ucollab/errors.hpp"
#include "ucollab/rng.hpp"

namespace ucollab {

namespace {

constexpr Index kBlockSize = 4096;  // samples per hypothesis per RNG block
constexpr double kZ95 = 1.959963984540054;

double wilson_half_width(double p, double n) {
  const double z2 = kZ95 * kZ95;
  return kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal_quantile needs p in (0, 1)");
  // Acklam's rational approximation (relative error ~1e-9) refined by one
  // Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double pd_closed_form(const Matrix& w, const Vector& s, double sigma, double pfa, RankPolicy policy) {
  require(sigma > 0.0, "sigma must be positive");
  require(pfa > 0.0 && pfa < 1.0, "pfa must lie in (0, 1)");
  require(s.size() == w.cols(), "signal length does not match W");
  const Projector p = projector_of(w, policy);
  const double d = (p.matrix * s).norm() / sigma;
  return normal_tail(-normal_quantile(pfa) - d);
}

bool DetectionResult::consistent() const {
  return std::abs(pd_closed_form - pd_monte_carlo) <= 3.0 * pd_half_width;
}

DetectionResult simulate_detection(const CollaborationMatrix& w, const SignalClass& signal_class,
                                   Index signal_index, double sigma, double pfa, Index trials,
                                   std::uint64_t seed) {
  require(trials >= 100, "simulate_detection needs at least 100 trials");
  require(signal_index >= 0 && signal_index < signal_class.count(), "signal index out of range");
  require(sigma > 0.0, "sigma must be positive");
  require(pfa > 0.0 && pfa < 1.0, "pfa must lie in (0, 1)");
  require(w.cols() == signal_class.dimension(), "W and signal class disagree on N");

  const Matrix& weights = w.weights;
  const Vector s = signal_class.signal(signal_index);
  const Projector proj = projector_of(weights, w.rank_policy());
  require(proj.rank >= 1, "W has no usable rows");

  // Matched direction in the row space; when s is annihilated any unit
  // row-space direction gives a statistic with identical H0/H1 laws.
  Vector h = proj.matrix * s;
  if (h.norm() <= 1e-12 * std::max(1.0, s.norm())) {
    Index col = 0;
    proj.matrix.colwise().norm().maxCoeff(&col);
    h = proj.matrix.col(col);
  }
  h.normalize();
  // Fusion-center weights g with g^T W = h^T, so g^T y = h^T x.
  const Vector g = weights.transpose().completeOrthogonalDecomposition().solve(h);
  const double threshold = -normal_quantile(pfa);

  DetectionResult r;
  r.signal_index = signal_index;
  r.deflection = (proj.matrix * s).squaredNorm() / (sigma * sigma);
  r.pfa = pfa;
  r.pd_closed_form = normal_tail(threshold - std::sqrt(r.deflection));
  r.trials = trials;

  const Index n0 = trials / 2;
  const Index n1 = trials - n0;
  Index false_alarms = 0, detections = 0;
  const Index blocks = (std::max(n0, n1) + kBlockSize - 1) / kBlockSize;
  for (Index b = 0; b < blocks; ++b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const Index begin = b * kBlockSize;
    for (Index k = 0; k < kBlockSize; ++k) {
      const Index sample = begin + k;
      if (sample >= n0 && sample >= n1) break;
      const Index n = signal_class.dimension();
      if (sample < n0) {
        const Vector x = sigma * rng.normal_matrix(n, 1).col(0);
        false_alarms += g.dot(weights * x) / sigma > threshold;
      }
      if (sample < n1) {
        const Vector x = s + sigma * rng.normal_matrix(n, 1).col(0);
        detections += g.dot(weights * x) / sigma > threshold;
      }
    }
  }
  r.pfa_monte_carlo = static_cast<double>(false_alarms) / static_cast<double>(n0);
  r.pd_monte_carlo = static_cast<double>(detections) / static_cast<double>(n1);
  r.pd_half_width = wilson_half_width(r.pd_monte_carlo, static_cast<double>(n1));
  return r;
}

}  // namespace ucollab
