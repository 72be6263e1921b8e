#include <doctest.h>

#include <filesystem>

#include "test_support.hpp"
#include "ucollab/design.hpp"
#include "ucollab/errors.hpp"
#include "ucollab/metrics.hpp"
#include "ucollab/rng.hpp"

using namespace ucollab;

namespace {

Omega omega_of(const Matrix& omega) { return Omega{omega, 0}; }

Omega diagonal_omega(std::initializer_list<double> entries) {
  Vector d(static_cast<Index>(entries.size()));
  Index k = 0;
  for (double e : entries) d(k++) = e;
  return omega_of(d.asDiagonal());
}

}  // namespace

TEST_CASE("design_cost_free hand examples") {
  const CollaborationMatrix w = design_cost_free(diagonal_omega({3, 2, 1}), 1);
  CHECK(w.provenance == Provenance::PCA);
  CHECK(w.rows() == 1);
  CHECK(std::abs(w.weights(0, 0)) == doctest::Approx(1.0));
  CHECK(w.weights.rightCols(2).norm() <= 1e-12);

  Matrix s(2, 3);
  s << 1, 0, 0, 1, 1, 0;
  const SignalClass cls(s);
  const CollaborationMatrix top = design_cost_free(build_omega(cls), 1);
  CHECK(cumulative_dc(top, cls).cdc == doctest::Approx(2.618033988749895).epsilon(1e-12));
  CHECK_NOTHROW(top.validate());

  CHECK_THROWS_AS(design_cost_free(diagonal_omega({1, 1}), 3), Error);
  CHECK_THROWS_AS(design_cost_free(diagonal_omega({1, 1}), 0), Error);
}

TEST_CASE("design_cost_free attains the eigenvalue bound and beats Stiefel samples") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 6 + trial, m = 1 + trial % 4, count = 3 + trial;
    const SignalClass cls(testing::gaussian(gen, count, n));
    const Omega omega = build_omega(cls);
    const CollaborationMatrix w = design_cost_free(omega, m);
    CHECK((w.weights * w.weights.transpose() - Matrix::Identity(m, m)).norm() <= 1e-9);

    const Eigen::SelfAdjointEigenSolver<Matrix> eig(omega.matrix);
    const double bound = eig.eigenvalues().tail(m).sum();
    const double cdc = cumulative_dc(w, cls).cdc;
    CHECK(testing::rel_diff(cdc, bound) <= 1e-9);
    for (int k = 0; k < 1000; ++k) {
      const Matrix v = testing::random_stiefel(gen, n, m).transpose();
      CHECK(cumulative_dc(v, cls).cdc <= cdc + 1e-9 * std::max(1.0, cdc));
    }
  }
}

TEST_CASE("optimal C-DC grows with M by the next eigenvalue") {
  const SignalClass cls = generate_signal_class(12, 15, 5);
  const Omega omega = build_omega(cls);
  const EigenPairs eig = sym_eig(omega.matrix);
  double previous = 0.0;
  for (Index m = 1; m <= 15; ++m) {
    const double cdc = cumulative_dc(design_cost_free(omega, m), cls).cdc;
    CHECK(cdc >= previous - 1e-9);
    CHECK(cdc - previous == doctest::Approx(eig.values(m - 1)).epsilon(1e-7).scale(
                                cls.total_energy()));
    previous = cdc;
  }
  CHECK(previous == doctest::Approx(cls.total_energy()).epsilon(1e-12));
}

TEST_CASE("design_diagonal_shortcut") {
  const Omega omega = diagonal_omega({5, 0, 0, 2});
  const CollaborationMatrix one = design_diagonal_shortcut(omega, 1);
  Matrix e1 = Matrix::Zero(1, 4);
  e1(0, 0) = 1.0;
  CHECK(one.weights == e1);
  CHECK(one.provenance == Provenance::DiagonalShortcut);

  const CollaborationMatrix two = design_diagonal_shortcut(omega, 2);
  Matrix expected = Matrix::Zero(2, 4);
  expected(0, 0) = expected(1, 3) = 1.0;
  CHECK(two.weights == expected);
  CHECK_THROWS_AS(design_diagonal_shortcut(omega, 3), Error);

  Matrix perturbed = omega.matrix;
  perturbed(1, 2) = perturbed(2, 1) = 1e-3;
  try {
    design_diagonal_shortcut(omega_of(perturbed), 1);
    FAIL("expected NotDiagonal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotDiagonal);
  }

  // Agrees with the eigen-decomposition route up to row signs.
  const Omega distinct = diagonal_omega({0.5, 4, 1, 3, 2});
  for (Index m = 1; m <= 5; ++m) {
    const Matrix shortcut = design_diagonal_shortcut(distinct, m).weights;
    const Matrix pca = design_cost_free(distinct, m).weights;
    CHECK((shortcut.cwiseAbs() - pca.cwiseAbs()).norm() <= 1e-12);
  }
}

TEST_CASE("design_random") {
  const DesignSpec spec = DesignSpec::uniform(30, 10, 0.0, Penalty::None);
  const CollaborationMatrix a = design_random(spec, 42);
  const CollaborationMatrix b = design_random(spec, 42);
  CHECK(a.weights == b.weights);
  CHECK(a.provenance == Provenance::Random);
  CHECK(a.seed == std::optional<std::uint64_t>(42));
  CHECK(design_random(spec, 43).weights != a.weights);

  const CollaborationMatrix full = design_random(DesignSpec::uniform(8, 8, 0.0, Penalty::None), 3);
  const Projector p = projector_of(full.weights);
  CHECK((p.matrix - Matrix::Identity(8, 8)).norm() <= 1e-9);
}

TEST_CASE("random_baseline_prediction") {
  Matrix s(2, 4);
  s << 1, 1, 0, 0, 0, 0, 2, 0;
  const SignalClass cls(s);
  CHECK(random_baseline_prediction(cls, 2) == doctest::Approx(3.0));
  CHECK(random_baseline_prediction(cls, 4) == doctest::Approx(cls.total_energy()));
  CHECK_THROWS_AS(random_baseline_prediction(cls, 5), Error);

  const SignalClass big = generate_signal_class(10, 30, 8);
  const DesignSpec spec = DesignSpec::uniform(30, 10, 0.0, Penalty::None);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k)
    sum += cumulative_dc(design_random(spec, derive_seed(8, k)), big).cdc;
  const double mean = sum / 1000.0;
  CHECK(testing::rel_diff(mean, random_baseline_prediction(big, 10)) <= 0.02);
}

TEST_CASE("check_stable_embedding") {
  const SignalClass cls = generate_signal_class(5, 6, 1);
  const std::vector<bool> all = check_stable_embedding(
      CollaborationMatrix::user(Matrix::Identity(6, 6)), cls, 0.1);
  CHECK(std::all_of(all.begin(), all.end(), [](bool b) { return b; }));

  Matrix e1 = Matrix::Zero(1, 3);
  e1(0, 0) = 1.0;
  Matrix s(1, 3);
  s << 0, 1, 0;
  CHECK(check_stable_embedding(CollaborationMatrix::user(e1), SignalClass(s), 0.5) ==
        std::vector<bool>{false});

  CHECK_THROWS_AS(check_stable_embedding(CollaborationMatrix::user(e1), SignalClass(s), 1.0),
                  Error);

  // (N/M)||P s||^2 / ||s||^2 is 3 Beta(5, 10); P(|3B - 1| <= 0.5) = 0.8412.
  const DesignSpec spec = DesignSpec::uniform(30, 10, 0.0, Penalty::None);
  int pass = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SignalClass gaussian = generate_signal_class(10, 30, derive_seed(seed, 1));
    for (bool ok : check_stable_embedding(design_random(spec, derive_seed(seed, 2)), gaussian, 0.5)) {
      pass += ok;
      ++total;
    }
  }
  CHECK(total == 1000);
  CHECK(static_cast<double>(pass) / total == doctest::Approx(1.0 - 0.1587578616261286).epsilon(0.04 / 0.84));
}

TEST_CASE("collaboration matrices round-trip through csv and json") {
  const auto dir = std::filesystem::temp_directory_path() / "ucollab_design_roundtrip";
  std::filesystem::create_directories(dir);
  const SignalClass cls = generate_signal_class(6, 9, 3);
  const CollaborationMatrix w = design_cost_free(build_omega(cls), 3);
  write_collaboration(dir / "W", w);
  const CollaborationMatrix back = read_collaboration(dir / "W");
  CHECK(back.weights == w.weights);
  CHECK(back.provenance == Provenance::PCA);
  CHECK(back.spec.M == 3);
  CHECK(back.spec.N == 9);

  const CollaborationMatrix r = design_random(DesignSpec::uniform(9, 2, 0.0, Penalty::None), 11);
  write_collaboration(dir / "R", r);
  CHECK(read_collaboration(dir / "R").seed == std::optional<std::uint64_t>(11));
  std::filesystem::remove_all(dir);
}
