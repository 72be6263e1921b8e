#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include <Eigen/Dense>

namespace ucollab {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A class of I known deterministic signals in R^N, stored as the rows of an
/// I x N matrix. The same matrix serves as the factor A with A^T A = Omega.
class SignalClass {
 public:
  explicit SignalClass(Matrix signals);

  const Matrix& signals() const noexcept { return signals_; }
  Index count() const noexcept { return signals_.rows(); }
  Index dimension() const noexcept { return signals_.cols(); }
  Vector signal(Index i) const { return signals_.row(i).transpose(); }

  /// Sum of squared signal norms; the per-signal-optimal total deflection.
  double total_energy() const { return signals_.squaredNorm(); }

 private:
  Matrix signals_;
};

/// Omega = sum_i s_i s_i^T together with its numerical rank.
struct Omega {
  Matrix matrix;
  Index rank_estimate = 0;
};

class NoiseModel {
 public:
  explicit NoiseModel(double sigma);
  double sigma() const noexcept { return sigma_; }

 private:
  double sigma_;
};

enum class Penalty { None, L0, L1 };

std::string_view to_string(Penalty p);
Penalty parse_penalty(std::string_view text);

/// Problem dimensions and per-row cost penalties.
struct DesignSpec {
  Index N = 0;
  Index M = 0;
  Vector gammas;  // length M, >= 0
  Penalty penalty = Penalty::None;
  Vector y_diag;  // length M, > 0

  /// Same gamma on every row, Y = I.
  static DesignSpec uniform(Index N, Index M, double gamma, Penalty penalty);

  void validate() const;
};

SignalClass generate_signal_class(Index count, Index dimension, std::uint64_t seed);

Omega build_omega(const SignalClass& signal_class);

SignalClass read_signal_class(const std::filesystem::path& path);
SignalClass read_signal_class(std::istream& in);
void write_signal_class(const std::filesystem::path& path, const SignalClass& signal_class);

}  // namespace ucollab
