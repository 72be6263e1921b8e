#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include <Eigen/Dense>

namespace ucollab {

/// Seedable generator with a platform-independent normal sampler.
///
/// std::normal_distribution differs between standard libraries, so normals
/// are produced here by Box-Muller over 53-bit uniforms drawn from
/// mt19937_64, whose raw output sequence is fixed by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

  /// Fills row by row, so the first k rows of an (r x c) draw equal a
  /// (k x c) draw from the same seed.
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Mixes a base seed with a stream index (splitmix64 finalizer) so that
/// independent tasks can be seeded without coordinating.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace ucollab
