#include "ucollab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ucollab/errors.hpp"
#include "ucollab/metrics.hpp"
#include "ucollab/rng.hpp"

namespace ucollab {

namespace {

void check_shapes(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag) {
  require(u.rows() == a.rows(), "U and A disagree on I");
  require(gammas.size() == u.cols() && y_diag.size() == u.cols(),
          "gammas and y_diag must have one entry per column of U");
}

// Entry (j, i) is a_j^T u_i.
Matrix correlations(const Matrix& u, const Matrix& a) { return a.transpose() * u; }

double sign(double x) { return (x > 0.0) - (x < 0.0); }

bool uses_l1(Penalty p) { return p == Penalty::L1; }

Vector effective_gammas(const DesignSpec& spec) {
  return spec.penalty == Penalty::None ? Vector::Zero(spec.M) : spec.gammas;
}

double objective(Penalty p, const Matrix& u, const Matrix& a, const Vector& g, const Vector& y) {
  return uses_l1(p) ? objective_l1(u, a, g, y) : objective_l0(u, a, g, y);
}

Matrix gradient(Penalty p, const Matrix& u, const Matrix& a, const Vector& g, const Vector& y) {
  return uses_l1(p) ? gradient_l1(u, a, g, y) : gradient_l0(u, a, g, y);
}

double feasibility_error(const Matrix& u) {
  return (u.transpose() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

Matrix initial_u(const Matrix& a, const DesignSpec& spec, const InitStrategy& init) {
  const Index rows = a.rows();
  switch (init.kind) {
    case InitStrategy::Kind::PcaWarmStart: {
      const EigenPairs eig = sym_eig(a.transpose() * a);
      return polar_factor(a * eig.vectors.leftCols(spec.M), RankCheck::Relaxed);
    }
    case InitStrategy::Kind::Random: {
      Rng rng(init.seed);
      return polar_factor(rng.normal_matrix(rows, spec.M), RankCheck::Relaxed);
    }
    case InitStrategy::Kind::Given:
      require(init.u0.rows() == rows && init.u0.cols() == spec.M, "initial U has the wrong shape");
      require(feasibility_error(init.u0) <= 1e-8, "initial U must have orthonormal columns");
      return init.u0;
  }
  return {};
}

}  // namespace

double objective_l1(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag) {
  check_shapes(u, a, gammas, y_diag);
  const Matrix p = correlations(u, a);
  double total = 0.0;
  for (Index i = 0; i < p.cols(); ++i)
    for (Index j = 0; j < p.rows(); ++j) {
      const double t = std::max(0.0, y_diag(i) * std::abs(p(j, i)) - gammas(i));
      total += t * t;
    }
  return total;
}

double objective_l0(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag) {
  check_shapes(u, a, gammas, y_diag);
  const Matrix p = correlations(u, a);
  double total = 0.0;
  for (Index i = 0; i < p.cols(); ++i)
    for (Index j = 0; j < p.rows(); ++j) {
      const double q = y_diag(i) * p(j, i);
      total += std::max(0.0, q * q - gammas(i));
    }
  return total;
}

Matrix gradient_l1(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag) {
  check_shapes(u, a, gammas, y_diag);
  Matrix coeff = correlations(u, a);
  for (Index i = 0; i < coeff.cols(); ++i)
    for (Index j = 0; j < coeff.rows(); ++j) {
      const double p = coeff(j, i);
      const double excess = std::max(0.0, y_diag(i) * std::abs(p) - gammas(i));
      coeff(j, i) = 2.0 * excess * y_diag(i) * sign(p);
    }
  return a * coeff;
}

Matrix gradient_l0(const Matrix& u, const Matrix& a, const Vector& gammas, const Vector& y_diag) {
  check_shapes(u, a, gammas, y_diag);
  Matrix coeff = correlations(u, a);
  for (Index i = 0; i < coeff.cols(); ++i)
    for (Index j = 0; j < coeff.rows(); ++j) {
      const double p = coeff(j, i);
      const double q = y_diag(i) * p;
      coeff(j, i) = q * q > gammas(i) ? 2.0 * y_diag(i) * y_diag(i) * p : 0.0;
    }
  return a * coeff;
}

SolverState solve_gpower(const Matrix& a, const DesignSpec& spec, const InitStrategy& init,
                         double tol, Index max_iter) {
  spec.validate();
  require(a.cols() == spec.N, "A must have N columns");
  require(spec.M <= a.rows() && a.rows() <= spec.N, "solve_gpower needs M <= I <= N");
  require(tol > 0.0, "tolerance must be positive");
  require(max_iter >= 0, "max_iter must be >= 0");

  const Penalty penalty = spec.penalty;
  const Vector gammas = effective_gammas(spec);
  const Vector& y = spec.y_diag;

  SolverState state;
  state.u = initial_u(a, spec, init);
  state.max_feasibility_error = feasibility_error(state.u);
  double f = objective(penalty, state.u, a, gammas, y);
  state.objective_trace.push_back(f);

  while (state.iterations < max_iter) {
    const Matrix g = gradient(penalty, state.u, a, gammas, y);
    if ((g.array() == 0.0).all()) {
      state.degenerate = true;
      return state;
    }
    Matrix next = polar_factor(g, RankCheck::Relaxed);
    const double f_next = objective(penalty, next, a, gammas, y);
    if (f_next < f) {
      // Convexity guarantees ascent; a drop is round-off at the optimum.
      state.converged = true;
      return state;
    }
    state.u = std::move(next);
    ++state.iterations;
    state.max_feasibility_error = std::max(state.max_feasibility_error, feasibility_error(state.u));
    state.objective_trace.push_back(f_next);
    const bool small_step = f_next - f <= tol * std::abs(f_next);
    f = f_next;
    if (small_step) {
      state.converged = true;
      return state;
    }
  }
  return state;
}

SparseSolution recover_w(const SolverState& state, const Matrix& a, const DesignSpec& spec) {
  spec.validate();
  const Matrix& u = state.u;
  const Vector gammas = effective_gammas(spec);
  check_shapes(u, a, gammas, spec.y_diag);
  require(a.cols() == spec.N, "A must have N columns");

  const Matrix p = correlations(u, a);  // N x M
  SparseSolution out;
  Matrix& w = out.w.weights;
  w = Matrix::Zero(spec.M, spec.N);
  for (Index i = 0; i < spec.M; ++i) {
    const double y = spec.y_diag(i);
    for (Index j = 0; j < spec.N; ++j) {
      const double c = p(j, i);
      if (uses_l1(spec.penalty)) {
        w(i, j) = sign(c) * std::max(0.0, y * std::abs(c) - gammas(i));
      } else {
        const double q = y * c;
        w(i, j) = q * q > gammas(i) ? c : 0.0;
      }
    }
    const double norm = w.row(i).norm();
    if (norm > 0.0)
      w.row(i) /= norm;
    else
      out.dead_rows.push_back(i);
  }
  out.w.provenance = uses_l1(spec.penalty) ? Provenance::SparseL1 : Provenance::SparseL0;
  out.w.spec = spec;
  out.state = state;
  out.objective = state.objective();
  return out;
}

SparseSolution recover_w_l1(const SolverState& state, const Matrix& a, const DesignSpec& spec) {
  DesignSpec s = spec;
  s.penalty = Penalty::L1;
  SparseSolution out = recover_w(state, a, s);
  if (out.all_dead()) fail(ErrorKind::AllRowsDead, "every row of W was truncated to zero");
  return out;
}

SparseSolution recover_w_l0(const SolverState& state, const Matrix& a, const DesignSpec& spec) {
  DesignSpec s = spec;
  s.penalty = Penalty::L0;
  SparseSolution out = recover_w(state, a, s);
  if (out.all_dead()) fail(ErrorKind::AllRowsDead, "every row of W was truncated to zero");
  return out;
}

SparseSolution solve_sparse(const Matrix& a, const DesignSpec& spec, double tol, Index max_iter) {
  return recover_w(solve_gpower(a, spec, InitStrategy::pca(), tol, max_iter), a, spec);
}

double gamma_max(const Matrix& a, const DesignSpec& spec, Penalty penalty) {
  // |y_i a_j^T u_i| <= y_i ||a_j|| for unit u_i.
  const double bound = spec.y_diag.maxCoeff() * a.colwise().norm().maxCoeff() * (1.0 + 1e-9);
  return penalty == Penalty::L1 ? bound : bound * bound;
}

double deactivation_ratio(const SparseSolution& solution) {
  return 1.0 - active_link_ratio(solution.w.weights);
}

Calibration calibrate_gamma(const Matrix& a, const DesignSpec& spec, double target,
                            Penalty penalty, double tol, Index max_iter) {
  require(penalty == Penalty::L0 || penalty == Penalty::L1, "calibration needs an l0 or l1 penalty");
  require(target >= 0.0 && target <= 1.0, "target deactivation must lie in [0, 1]");
  spec.validate();

  const double resolution = 1.0 / static_cast<double>(spec.M * spec.N);
  const double slack = 1e-12;

  Calibration best;
  bool have_best = false;
  Index solves = 0;

  struct Trial {
    double gamma;
    double deactivation;
    SparseSolution solution;
  };
  auto run = [&](double gamma) {
    DesignSpec s = spec;
    s.penalty = penalty;
    s.gammas.setConstant(gamma);
    ++solves;
    SparseSolution sol = solve_sparse(a, s, tol, max_iter);
    const double d = deactivation_ratio(sol);
    return Trial{gamma, d, std::move(sol)};
  };
  auto consider = [&](Trial& t) {
    const double err = std::abs(t.deactivation - target);
    const double best_err = std::abs(best.achieved_deactivation - target);
    if (!have_best || err < best_err - slack ||
        (std::abs(err - best_err) <= slack && t.gamma < best.gamma)) {
      best.gamma = t.gamma;
      best.achieved_deactivation = t.deactivation;
      best.solution = t.solution;
      have_best = true;
    }
    return err <= resolution + slack;
  };
  auto finish = [&]() {
    best.solves = solves;
    return best;
  };

  Trial low = run(0.0);
  if (consider(low)) return finish();
  if (target < low.deactivation)
    fail(ErrorKind::Unachievable, "target deactivation is below what gamma = 0 achieves");

  const double top = gamma_max(a, spec, penalty);
  Trial high = run(top);
  if (consider(high)) return finish();
  if (target > high.deactivation)
    fail(ErrorKind::Unachievable, "target deactivation is above what gamma_max achieves");

  double lo = 0.0, hi = top;
  double d_lo = low.deactivation, d_hi = high.deactivation;
  while (hi - lo >= 1e-10) {
    const double mid = 0.5 * (lo + hi);
    Trial t = run(mid);
    if (consider(t)) return finish();
    // U re-optimizes for every gamma, so the response need not be monotone.
    if (t.deactivation < d_lo || t.deactivation > d_hi) break;
    if (t.deactivation < target) {
      lo = mid;
      d_lo = t.deactivation;
    } else {
      hi = mid;
      d_hi = t.deactivation;
    }
  }

  constexpr Index kGridPoints = 200;
  best.used_grid_fallback = true;
  // The response is jagged near the crossing, so scan a window around it.
  const double centre = 0.5 * (lo + hi);
  const double from = 0.5 * centre, to = std::min(1.5 * centre, top);
  for (Index k = 0; k < kGridPoints; ++k) {
    Trial t = run(from + (to - from) * static_cast<double>(k) / static_cast<double>(kGridPoints - 1));
    if (consider(t)) break;
  }
  return finish();
}

Matrix padded_factor(const SignalClass& signal_class, Index m) {
  const Matrix& s = signal_class.signals();
  if (m <= s.rows()) return s;
  Matrix a = Matrix::Zero(m, s.cols());
  a.topRows(s.rows()) = s;
  return a;
}

}  // namespace ucollab
