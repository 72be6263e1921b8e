#include "ucollab/model.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "ucollab/csv.hpp"
#include "ucollab/errors.hpp"
#include "ucollab/rng.hpp"

namespace ucollab {

SignalClass::SignalClass(Matrix signals) : signals_(std::move(signals)) {
  require(signals_.rows() >= 1 && signals_.cols() >= 1, "signal class needs I >= 1 and N >= 1");
  require(signals_.allFinite(), "signal class entries must be finite");
}

NoiseModel::NoiseModel(double sigma) : sigma_(sigma) {
  require(std::isfinite(sigma) && sigma > 0.0, "noise sigma must be positive");
}

std::string_view to_string(Penalty p) {
  switch (p) {
    case Penalty::None: return "none";
    case Penalty::L0: return "l0";
    case Penalty::L1: return "l1";
  }
  return "none";
}

Penalty parse_penalty(std::string_view text) {
  if (text == "none") return Penalty::None;
  if (text == "l0") return Penalty::L0;
  if (text == "l1") return Penalty::L1;
  fail(ErrorKind::InvalidArgument, "unknown penalty '" + std::string(text) + "'");
}

DesignSpec DesignSpec::uniform(Index N, Index M, double gamma, Penalty penalty) {
  DesignSpec spec;
  spec.N = N;
  spec.M = M;
  spec.gammas = Vector::Constant(std::max<Index>(M, 0), gamma);
  spec.penalty = penalty;
  spec.y_diag = Vector::Ones(std::max<Index>(M, 0));
  spec.validate();
  return spec;
}

void DesignSpec::validate() const {
  require(M >= 1 && M <= N, "design needs 1 <= M <= N");
  require(gammas.size() == M, "gammas must have length M");
  require(y_diag.size() == M, "y_diag must have length M");
  require(gammas.allFinite() && (gammas.array() >= 0.0).all(), "gammas must be >= 0");
  require(y_diag.allFinite() && (y_diag.array() > 0.0).all(), "y_diag entries must be > 0");
}

SignalClass generate_signal_class(Index count, Index dimension, std::uint64_t seed) {
  require(count >= 1 && dimension >= 1, "signal class needs I >= 1 and N >= 1");
  Rng rng(seed);
  return SignalClass(rng.normal_matrix(count, dimension));
}

Omega build_omega(const SignalClass& signal_class) {
  const Matrix& s = signal_class.signals();
  Omega omega;
  omega.matrix = s.transpose() * s;
  omega.matrix = 0.5 * (omega.matrix + omega.matrix.transpose()).eval();

  // Numerical rank from the singular values of S: sigma^2 are Omega's eigenvalues.
  const Eigen::JacobiSVD<Matrix> svd(s);
  const Vector& sv = svd.singularValues();
  const double lambda_max = sv.size() ? sv(0) * sv(0) : 0.0;
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k)
    if (lambda_max > 0.0 && sv(k) * sv(k) > 1e-10 * lambda_max) ++rank;
  omega.rank_estimate = rank;
  return omega;
}

SignalClass read_signal_class(std::istream& in) { return SignalClass(csv::read_matrix(in)); }

SignalClass read_signal_class(const std::filesystem::path& path) {
  return SignalClass(csv::read_matrix(path));
}

void write_signal_class(const std::filesystem::path& path, const SignalClass& signal_class) {
  csv::write_matrix(path, signal_class.signals());
}

}  // namespace ucollab
