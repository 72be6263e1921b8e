#pragma once

#include <cstdint>
#include <vector>

#include "ucollab/collaboration.hpp"

namespace ucollab {

// Penalized sparse PCA over the Stiefel manifold.
//
// Notation: A is an I x N factor with A^T A = Omega (the signal matrix
// itself), a_j its columns, U an I x M matrix with orthonormal columns u_i,
// gamma_i and y_i the per-row penalty and scale. With p_ij = y_i a_j^T u_i,
//
//   l1:  F(U) = sum_ij [ |p_ij| - gamma_i ]_+^2
//   l0:  F(U) = sum_ij [ p_ij^2 - gamma_i ]_+
//
// Both are convex in U, so iterating U <- polar(grad F(U)) ascends.

double objective_l1(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag);
double objective_l0(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag);

/// Column i: sum_j 2 [y_i|a_j^T u_i| - gamma_i]_+ y_i sign(a_j^T u_i) a_j.
/// The kink a_j^T u_i = 0 contributes zero.
Matrix gradient_l1(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag);
/// Column i: sum_j 2 y_i^2 (a_j^T u_i) a_j over terms strictly above gamma_i.
Matrix gradient_l0(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag);

struct InitStrategy {
  enum class Kind { PcaWarmStart, Random, Given };
  Kind kind = Kind::PcaWarmStart;
  std::uint64_t seed = 0;
  Matrix u0;

  static InitStrategy pca() { return {}; }
  static InitStrategy random(std::uint64_t seed) { return {Kind::Random, seed, {}}; }
  static InitStrategy given(Matrix u0) { return {Kind::Given, 0, std::move(u0)}; }
};

struct SolverState {
  Matrix u;
  std::vector<double> objective_trace;  // F(U) at the start and after each accepted step
  Index iterations = 0;
  bool converged = false;
  bool degenerate = false;  // gradient vanished: every term is clipped
  /// Largest ||U^T U - I||_F seen over all iterates.
  double max_feasibility_error = 0.0;

  double objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

inline constexpr double kDefaultSolverTolerance = 1e-8;
inline constexpr Index kDefaultMaxIterations = 10000;

/// Generalized power iteration for the penalty in `spec` (None is treated
/// as l0 with zero penalties, i.e. plain PCA). Requires M <= I <= N.
///
/// Stops when the relative objective increase drops below `tol`, or when a
/// step fails to ascend (it is then discarded), or after `max_iter` steps.
SolverState solve_gpower(const Matrix& a, const DesignSpec& spec,
                         const InitStrategy& init = InitStrategy::pca(),
                         double tol = kDefaultSolverTolerance,
                         Index max_iter = kDefaultMaxIterations);

struct SparseSolution {
  CollaborationMatrix w;
  SolverState state;
  double objective = 0.0;
  std::vector<Index> dead_rows;

  bool all_dead() const { return static_cast<Index>(dead_rows.size()) == w.rows(); }
};

/// Closed-form inner maximizers over unit-norm rows: soft thresholding for
/// l1, hard thresholding (strictly above gamma) for l0. Zero rows are kept
/// and listed in dead_rows. Never throws on an all-dead result.
SparseSolution recover_w(const SolverState& state, const Matrix& a, const DesignSpec& spec);

/// As recover_w for a fixed penalty; throws AllRowsDead if no row survives.
SparseSolution recover_w_l1(const SolverState& state, const Matrix& a, const DesignSpec& spec);
SparseSolution recover_w_l0(const SolverState& state, const Matrix& a, const DesignSpec& spec);

/// Solve and recover in one call.
SparseSolution solve_sparse(const Matrix& a, const DesignSpec& spec,
                            double tol = kDefaultSolverTolerance,
                            Index max_iter = kDefaultMaxIterations);

/// Smallest uniform gamma that clips every term for any feasible U.
double gamma_max(const Matrix& a, const DesignSpec& spec, Penalty penalty);

/// Fraction of zero entries in a sparse design.
double deactivation_ratio(const SparseSolution& solution);

struct Calibration {
  double gamma = 0.0;
  double achieved_deactivation = 0.0;
  SparseSolution solution;
  Index solves = 0;
  bool used_grid_fallback = false;
};

/// Bisection on a uniform gamma until the achieved deactivation is within
/// one entry (1/(M N)) of the target or the bracket is narrower than 1e-10.
/// Falls back to a 200-point grid scan when the response is observed to be
/// non-monotone or bisection ends without meeting the tolerance.
Calibration calibrate_gamma(const Matrix& a, const DesignSpec& spec, double target_deactivation,
                            Penalty penalty, double tol = kDefaultSolverTolerance,
                            Index max_iter = kDefaultMaxIterations);

/// Zero-pads A to max(I, M) rows. The padded factor has the same A^T A, so
/// the solver's M <= I requirement can be met when M exceeds the signal count.
Matrix padded_factor(const SignalClass& signal_class, Index m);

}  // namespace ucollab
