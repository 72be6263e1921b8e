#include <doctest.h>

#include "test_support.hpp"
#include "ucollab/design.hpp"
#include "ucollab/errors.hpp"
#include "ucollab/metrics.hpp"
#include "ucollab/sparse.hpp"

using namespace ucollab;

namespace {

Vector constant(Index m, double value) { return Vector::Constant(m, value); }

double objective(Penalty p, const Matrix& u, const Matrix& a, const Vector& g, const Vector& y) {
  return p == Penalty::L1 ? objective_l1(u, a, g, y) : objective_l0(u, a, g, y);
}

Matrix gradient(Penalty p, const Matrix& u, const Matrix& a, const Vector& g, const Vector& y) {
  return p == Penalty::L1 ? gradient_l1(u, a, g, y) : gradient_l0(u, a, g, y);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("objective hand values") {
  const Matrix a = Matrix::Identity(2, 2);
  Matrix u(2, 1);
  u << 1, 0;
  const Vector g = constant(1, 0.5), y = constant(1, 1.0);
  CHECK(objective_l1(u, a, g, y) == doctest::Approx(0.25));
  CHECK(objective_l0(u, a, g, y) == doctest::Approx(0.5));

  // Every term is clipped once gamma exceeds the largest correlation.
  CHECK(objective_l1(u, a, constant(1, 1.5), y) == 0.0);
  CHECK(gradient_l1(u, a, constant(1, 1.5), y).norm() == 0.0);
  CHECK(gradient_l0(u, a, constant(1, 1.5), y).norm() == 0.0);

  CHECK_THROWS_AS(objective_l1(u, Matrix::Identity(3, 3), g, y), Error);
  CHECK_THROWS_AS(objective_l0(u, a, constant(2, 0.5), y), Error);
}

TEST_CASE("gradients at gamma = 0 equal 2 A A^T U") {
  std::mt19937_64 gen(5);
  const Matrix a = testing::gaussian(gen, 5, 9);
  const Matrix u = testing::random_stiefel(gen, 5, 3);
  const Vector zero = constant(3, 0.0), y = constant(3, 1.0);
  const Matrix expected = 2.0 * a * a.transpose() * u;
  CHECK((gradient_l1(u, a, zero, y) - expected).norm() <= 1e-12 * expected.norm());
  CHECK((gradient_l0(u, a, zero, y) - expected).norm() <= 1e-12 * expected.norm());
  CHECK(objective_l1(u, a, zero, y) == doctest::Approx((a.transpose() * u).squaredNorm()));
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 gen(21);
  for (Penalty p : {Penalty::L0, Penalty::L1}) {
    for (int trial = 0; trial < 25; ++trial) {
      const Index n = 8 + trial % 5, i = 3 + trial % 3, m = 1 + trial % 3;
      const Matrix a = testing::gaussian(gen, i, n);
      const Matrix u = testing::random_stiefel(gen, i, m);
      Vector y(m);
      for (Index k = 0; k < m; ++k) y(k) = 0.5 + 0.25 * static_cast<double>(k);
      const double scale = p == Penalty::L1 ? 0.5 : 0.25;
      const Vector g = constant(m, scale);
      const Matrix d = testing::gaussian(gen, i, m);
      const double eps = 1e-6;
      const double numeric =
          (objective(p, u + eps * d, a, g, y) - objective(p, u - eps * d, a, g, y)) / (2 * eps);
      const double analytic = (gradient(p, u, a, g, y).array() * d.array()).sum();
      if (p == Penalty::L0) {
        // The l0 objective jumps where a term crosses the threshold; skip those draws.
        const Matrix corr = (a.transpose() * u).array().rowwise() * y.transpose().array();
        const Matrix step = (a.transpose() * d).array().rowwise() * y.transpose().array();
        bool near_kink = false;
        for (Index r = 0; r < corr.rows(); ++r)
          for (Index c = 0; c < corr.cols(); ++c)
            near_kink |= std::abs(corr(r, c) * corr(r, c) - g(c)) <
                         4 * eps * std::abs(corr(r, c) * step(r, c)) + 1e-9;
        if (near_kink) continue;
      }
      CHECK(std::abs(numeric - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("gamma = 0 reduces to the cost-free design") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SignalClass cls = generate_signal_class(10, 30, seed);
    const double opt = cumulative_dc(design_cost_free(build_omega(cls), 10), cls).cdc;
    for (Penalty p : {Penalty::L0, Penalty::L1, Penalty::None}) {
      const SparseSolution sol =
          solve_sparse(cls.signals(), DesignSpec::uniform(30, 10, 0.0, p));
      CHECK(sol.dead_rows.empty());
      CHECK(cumulative_dc(sol.w, cls).cdc >= (1.0 - 1e-6) * opt);
      CHECK(sol.objective == doctest::Approx(opt).epsilon(1e-6));
    }
  }

  const SignalClass small = generate_signal_class(6, 8, 3);
  for (Index m = 1; m <= 6; ++m) {
    const double opt = cumulative_dc(design_cost_free(build_omega(small), m), small).cdc;
    const SparseSolution sol =
        solve_sparse(small.signals(), DesignSpec::uniform(8, m, 0.0, Penalty::L0));
    CHECK(cumulative_dc(sol.w, small).cdc >= (1.0 - 1e-6) * opt);
  }
}

TEST_CASE("scalar problem") {
  Matrix a(1, 3);
  a << 1, -2, 0.5;
  const SolverState state = solve_gpower(a, DesignSpec::uniform(3, 1, 0.1, Penalty::L1));
  CHECK(std::abs(state.u(0, 0)) == doctest::Approx(1.0));
  CHECK(state.converged);
}

TEST_CASE("solver trace is monotone and iterates stay feasible") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SignalClass cls = generate_signal_class(10, 30, seed);
    for (Penalty p : {Penalty::L0, Penalty::L1}) {
      const double gmax = gamma_max(cls.signals(), DesignSpec::uniform(30, 10, 0, p), p);
      const DesignSpec spec = DesignSpec::uniform(30, 10, 0.02 * gmax, p);
      for (const InitStrategy& init : {InitStrategy::pca(), InitStrategy::random(seed)}) {
        const SolverState st = solve_gpower(cls.signals(), spec, init);
        CHECK(st.converged);
        CHECK(st.max_feasibility_error <= 1e-8);
        CHECK(st.objective_trace.size() == static_cast<std::size_t>(st.iterations) + 1);
        for (std::size_t k = 1; k < st.objective_trace.size(); ++k)
          CHECK(st.objective_trace[k] >= st.objective_trace[k - 1]);
      }
    }
  }
}

TEST_CASE("solver edge cases") {
  const SignalClass cls = generate_signal_class(4, 10, 2);
  const Matrix& a = cls.signals();

  const double gmax = gamma_max(a, DesignSpec::uniform(10, 2, 0, Penalty::L0), Penalty::L0);
  const DesignSpec dead = DesignSpec::uniform(10, 2, gmax, Penalty::L0);
  const SolverState st = solve_gpower(a, dead);
  CHECK(st.degenerate);
  CHECK(st.objective() == 0.0);
  const SparseSolution sol = recover_w(st, a, dead);
  CHECK(sol.all_dead());
  CHECK(sol.w.weights.isZero());
  CHECK(kind_of([&] { recover_w_l0(st, a, dead); }) == ErrorKind::AllRowsDead);
  CHECK(kind_of([&] { recover_w_l1(st, a, dead); }) == ErrorKind::AllRowsDead);

  CHECK_THROWS_AS(solve_gpower(a, DesignSpec::uniform(10, 5, 0, Penalty::L0)), Error);
  CHECK_THROWS_AS(solve_gpower(Matrix::Ones(12, 10), DesignSpec::uniform(10, 2, 0, Penalty::L0)),
                  Error);
  CHECK_THROWS_AS(solve_gpower(a, DesignSpec::uniform(10, 2, -1, Penalty::L0)), Error);
  CHECK_THROWS_AS(solve_gpower(a, DesignSpec::uniform(10, 2, 0, Penalty::L0), InitStrategy::pca(),
                               0.0),
                  Error);
  CHECK_THROWS_AS(
      solve_gpower(a, DesignSpec::uniform(10, 2, 0, Penalty::L0), InitStrategy::given(Matrix::Ones(4, 2))),
      Error);

  const SolverState capped =
      solve_gpower(a, DesignSpec::uniform(10, 2, 0.1, Penalty::L1), InitStrategy::random(9), 1e-8, 0);
  CHECK(capped.iterations == 0);
  CHECK_FALSE(capped.converged);
}

TEST_CASE("recovery hand cases") {
  Matrix a(1, 2);
  a << 3, 1;
  SolverState state;
  state.u = Matrix::Ones(1, 1);
  state.objective_trace = {0.0};

  const SparseSolution l1 = recover_w_l1(state, a, DesignSpec::uniform(2, 1, 1.0, Penalty::L1));
  CHECK(l1.w.weights(0, 0) == doctest::Approx(1.0));
  CHECK(l1.w.weights(0, 1) == 0.0);
  CHECK(l1.w.provenance == Provenance::SparseL1);

  const SparseSolution l0 = recover_w_l0(state, a, DesignSpec::uniform(2, 1, 2.0, Penalty::L0));
  CHECK(l0.w.weights(0, 0) == doctest::Approx(1.0));
  CHECK(l0.w.weights(0, 1) == 0.0);
  CHECK(l0.w.provenance == Provenance::SparseL0);

  // Strict threshold: a term exactly at gamma is dropped.
  const SparseSolution edge = recover_w(state, a, DesignSpec::uniform(2, 1, 1.0, Penalty::L0));
  CHECK(edge.w.weights(0, 1) == 0.0);
}

TEST_CASE("recovered rows are unit norm and thresholds are monotone for fixed U") {
  std::mt19937_64 gen(8);
  const Matrix a = testing::gaussian(gen, 6, 20);
  const Matrix u = testing::random_stiefel(gen, 6, 4);
  SolverState state;
  state.u = u;
  state.objective_trace = {0.0};
  for (Penalty p : {Penalty::L0, Penalty::L1}) {
    const double gmax = gamma_max(a, DesignSpec::uniform(20, 4, 0, p), p);
    double previous = -1.0;
    for (int k = 0; k <= 20; ++k) {
      const SparseSolution sol =
          recover_w(state, a, DesignSpec::uniform(20, 4, gmax * k / 20.0, p));
      for (Index i = 0; i < 4; ++i) {
        const bool dead = std::find(sol.dead_rows.begin(), sol.dead_rows.end(), i) !=
                          sol.dead_rows.end();
        CHECK(sol.w.weights.row(i).norm() == doctest::Approx(dead ? 0.0 : 1.0));
      }
      const double d = deactivation_ratio(sol);
      CHECK(d >= previous);
      previous = d;
    }
    CHECK(previous == 1.0);
  }
}

TEST_CASE("calibrate_gamma") {
  const SignalClass cls = generate_signal_class(10, 30, 4);
  const Matrix& a = cls.signals();
  const DesignSpec spec = DesignSpec::uniform(30, 10, 0.0, Penalty::L0);
  for (Penalty p : {Penalty::L0, Penalty::L1}) {
    const Calibration zero = calibrate_gamma(a, spec, 0.0, p);
    CHECK(zero.gamma == 0.0);
    CHECK(zero.achieved_deactivation == 0.0);

    const Calibration forty = calibrate_gamma(a, spec, 0.4, p);
    CHECK(std::abs(forty.achieved_deactivation - 0.4) <= 1.0 / 300 + 1e-12);
    CHECK(forty.gamma > 0.0);
    CHECK(forty.solution.state.converged);
    CHECK(forty.solution.state.iterations < (p == Penalty::L0 ? 500 : kDefaultMaxIterations));
    CHECK(forty.solution.w.provenance ==
          (p == Penalty::L0 ? Provenance::SparseL0 : Provenance::SparseL1));

    const Calibration all = calibrate_gamma(a, spec, 1.0, p);
    CHECK(all.achieved_deactivation == 1.0);
  }
  CHECK_THROWS_AS(calibrate_gamma(a, spec, -0.1, Penalty::L0), Error);
  CHECK_THROWS_AS(calibrate_gamma(a, spec, 1.1, Penalty::L0), Error);
  CHECK_THROWS_AS(calibrate_gamma(a, spec, 0.4, Penalty::None), Error);

  // Padding A to M rows leaves M - I rows dead even at gamma = 0.
  const SignalClass few = generate_signal_class(3, 10, 6);
  const Matrix padded = padded_factor(few, 5);
  CHECK(padded.rows() == 5);
  CHECK(padded.bottomRows(2).isZero());
  CHECK(padded_factor(few, 2) == few.signals());
  CHECK(kind_of([&] {
          calibrate_gamma(padded, DesignSpec::uniform(10, 5, 0, Penalty::L0), 0.1, Penalty::L0);
        }) == ErrorKind::Unachievable);
}

TEST_CASE("l0 solves calibrated to 40% converge in under 500 iterations") {
  const DesignSpec spec = DesignSpec::uniform(30, 10, 0.0, Penalty::L0);
  Index worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SignalClass cls = generate_signal_class(10, 30, seed);
    const Calibration c = calibrate_gamma(cls.signals(), spec, 0.4, Penalty::L0);
    CHECK(c.solution.state.converged);
    CHECK(std::abs(c.achieved_deactivation - 0.4) <= 4.0 / 300 + 1e-12);
    worst = std::max(worst, c.solution.state.iterations);
  }
  CHECK(worst < 500);
}

TEST_CASE("l0 retains at least as much deflection as l1 on average") {
  double l0 = 0.0, l1 = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SignalClass cls = generate_signal_class(10, 30, seed);
    const DesignSpec spec = DesignSpec::uniform(30, 10, 0.0, Penalty::L0);
    l0 += cumulative_dc(calibrate_gamma(cls.signals(), spec, 0.4, Penalty::L0).solution.w, cls).cdc;
    l1 += cumulative_dc(calibrate_gamma(cls.signals(), spec, 0.4, Penalty::L1).solution.w, cls).cdc;
  }
  CHECK(l0 >= l1);
}
