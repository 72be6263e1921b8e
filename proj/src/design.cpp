#include "ucollab/design.hpp"

#include <algorithm>
#include <numeric>

#include "ucollab/errors.hpp"
#include "ucollab/rng.hpp"

namespace ucollab {

CollaborationMatrix design_cost_free(const Omega& omega, Index m) {
  const Index n = omega.matrix.rows();
  require(m >= 1 && m <= n, "design_cost_free needs 1 <= M <= N");
  const EigenPairs eig = sym_eig(omega.matrix);
  CollaborationMatrix w;
  w.weights = eig.vectors.leftCols(m).transpose();
  w.provenance = Provenance::PCA;
  w.spec = DesignSpec::uniform(n, m, 0.0, Penalty::None);
  return w;
}

CollaborationMatrix design_diagonal_shortcut(const Omega& omega, Index m) {
  const Index n = omega.matrix.rows();
  require(m >= 1 && m <= n, "design_diagonal_shortcut needs 1 <= M <= N");
  const Vector diag = omega.matrix.diagonal();
  const double scale = diag.cwiseAbs().maxCoeff();
  const double off = (omega.matrix - Matrix(diag.asDiagonal())).cwiseAbs().maxCoeff();
  if (off > 1e-10 * std::max(scale, 1.0)) fail(ErrorKind::NotDiagonal, "Omega is not diagonal");

  std::vector<Index> support;
  for (Index k = 0; k < n; ++k)
    if (diag(k) > 1e-10 * scale) support.push_back(k);
  require(m <= static_cast<Index>(support.size()),
          "design_diagonal_shortcut needs M <= rank(Omega)");
  std::stable_sort(support.begin(), support.end(),
                   [&](Index a, Index b) { return diag(a) > diag(b); });

  CollaborationMatrix w;
  w.weights = Matrix::Zero(m, n);
  for (Index i = 0; i < m; ++i) w.weights(i, support[i]) = 1.0;
  w.provenance = Provenance::DiagonalShortcut;
  w.spec = DesignSpec::uniform(n, m, 0.0, Penalty::None);
  return w;
}

CollaborationMatrix design_random(const DesignSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  CollaborationMatrix w;
  w.weights = rng.normal_matrix(spec.M, spec.N);
  w.provenance = Provenance::Random;
  w.spec = spec;
  w.seed = seed;
  return w;
}

double random_baseline_prediction(const SignalClass& signal_class, Index m) {
  const Index n = signal_class.dimension();
  require(m >= 1 && m <= n, "random_baseline_prediction needs 1 <= M <= N");
  return static_cast<double>(m) / static_cast<double>(n) * signal_class.total_energy();
}

std::vector<bool> check_stable_embedding(const CollaborationMatrix& w,
                                         const SignalClass& signal_class, double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(w.cols() == signal_class.dimension(), "W and signal class disagree on N");
  const Projector p = projector_of(w.weights, w.rank_policy());
  const double scale = static_cast<double>(w.cols()) / static_cast<double>(w.rows());
  std::vector<bool> out;
  out.reserve(static_cast<std::size_t>(signal_class.count()));
  for (Index i = 0; i < signal_class.count(); ++i) {
    const Vector s = signal_class.signal(i);
    const double energy = s.squaredNorm();
    const double embedded = scale * (p.matrix * s).squaredNorm();
    out.push_back((1.0 - delta) * energy <= embedded && embedded <= (1.0 + delta) * energy);
  }
  return out;
}

}  // namespace ucollab
