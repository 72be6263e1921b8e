#include "ucollab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ucollab/errors.hpp"

namespace ucollab {

namespace {

Index argmax_abs(const Vector& v) {
  Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  return best;
}

void make_first_nonzero_positive(Eigen::Ref<Vector> v) {
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-9) {
      if (v(k) < 0.0) v = -v;
      return;
    }
  }
}

// Pivoted Cholesky of the eigenspace projector: a basis that depends only on
// the subspace, not on the solver's arbitrary choice within it.
Matrix canonical_basis(const Matrix& basis) {
  Matrix residual = basis * basis.transpose();
  const Index dim = basis.cols();
  Matrix out(basis.rows(), dim);
  for (Index t = 0; t < dim; ++t) {
    Index pivot = 0;
    residual.diagonal().maxCoeff(&pivot);
    const double d = residual(pivot, pivot);
    if (d <= 0.0) fail(ErrorKind::RankDeficient, "degenerate eigenspace basis");
    Vector v = residual.col(pivot) / std::sqrt(d);
    // Re-orthogonalize against earlier picks to shed round-off.
    for (Index s = 0; s < t; ++s) v -= out.col(s).dot(v) * out.col(s);
    v.normalize();
    out.col(t) = v;
    residual -= v * v.transpose();
  }
  return out;
}

}  // namespace

EigenPairs sym_eig(const Matrix& matrix) {
  require(matrix.rows() == matrix.cols(), "sym_eig needs a square matrix");
  const Index n = matrix.rows();
  EigenPairs out;
  if (n == 0) return out;

  const double scale = matrix.cwiseAbs().maxCoeff();
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) fail(ErrorKind::NotSymmetric, "sym_eig input is not symmetric");

  const Matrix sym = 0.5 * (matrix + matrix.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) fail(ErrorKind::InvalidArgument, "eigensolver failed");

  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();

  const double tie_gap = 1e-10 * out.values.cwiseAbs().maxCoeff();
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && out.values(end - 1) - out.values(end) <= tie_gap) ++end;
    const Index size = end - start;
    if (size > 1) {
      Matrix block = canonical_basis(out.vectors.middleCols(start, size));
      for (Index k = 0; k < size; ++k) make_first_nonzero_positive(block.col(k));
      std::vector<Index> order(size);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return argmax_abs(block.col(a)) < argmax_abs(block.col(b));
      });
      for (Index k = 0; k < size; ++k) out.vectors.col(start + k) = block.col(order[k]);
      // Tied values are equal to within tie_gap; report them as their mean.
      out.values.segment(start, size).setConstant(out.values.segment(start, size).mean());
    } else {
      make_first_nonzero_positive(out.vectors.col(start));
    }
    start = end;
  }
  return out;
}

Matrix polar_factor(const Matrix& g, RankCheck check) {
  require(g.rows() >= g.cols(), "polar_factor needs at least as many rows as columns");
  const Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) fail(ErrorKind::RankDeficient, "polar factor of a zero matrix");
  if (check == RankCheck::Strict && sv(sv.size() - 1) < 1e-12 * sv(0))
    fail(ErrorKind::RankDeficient, "polar factor input is rank deficient");
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k)
    if (sv(k) >= 1e-12 * sv(0)) ++rank;
  if (rank == sv.size()) return svd.matrixU() * svd.matrixV().transpose();

  // Left singular vectors of vanishing singular values are unreliable. Keep
  // the leading ones and complete with an orthonormal basis of their
  // complement; any completion attains the maximum of trace(U^T G).
  Matrix left(g.rows(), g.cols());
  left.leftCols(rank) = svd.matrixU().leftCols(rank);
  const Eigen::HouseholderQR<Matrix> qr(svd.matrixU().leftCols(rank));
  const Matrix q = qr.householderQ();
  left.rightCols(g.cols() - rank) = q.middleCols(rank, g.cols() - rank);
  Matrix u = left * svd.matrixV().transpose();
  return u;
}

Projector projector_of(const Matrix& w, RankPolicy policy) {
  const Index n = w.cols();
  Projector p;
  p.matrix = Matrix::Zero(n, n);

  std::vector<Index> kept;
  for (Index i = 0; i < w.rows(); ++i) {
    if ((w.row(i).array() == 0.0).all())
      p.dropped_rows.push_back(i);
    else
      kept.push_back(i);
  }
  if (kept.empty()) return p;

  Matrix rows(static_cast<Index>(kept.size()), n);
  for (Index k = 0; k < rows.rows(); ++k) rows.row(k) = w.row(kept[k]);

  const Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = kGramRankTolerance * sv(0) * sv(0);
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k)
    if (sv(k) * sv(k) > cutoff) ++rank;

  if (policy == RankPolicy::Strict && rank < rows.rows())
    fail(ErrorKind::RankDeficient, "collaboration matrix rows are linearly dependent");

  const Matrix basis = svd.matrixV().leftCols(rank);
  p.matrix = basis * basis.transpose();
  p.matrix = 0.5 * (p.matrix + p.matrix.transpose()).eval();
  p.rank = rank;
  return p;
}

GramSchmidtRows gram_schmidt_rows(const Matrix& w) {
  const Index m = w.rows();
  GramSchmidtRows out;
  out.orthonormal = Matrix::Zero(m, w.cols());
  out.r = Matrix::Zero(m, m);
  if (m == 0) return out;

  const double max_norm = w.rowwise().norm().maxCoeff();
  if (max_norm == 0.0) fail(ErrorKind::RankDeficient, "gram_schmidt_rows of a zero matrix");

  for (Index k = 0; k < m; ++k) {
    Vector v = w.row(k).transpose();
    // Two modified Gram-Schmidt passes.
    for (int pass = 0; pass < 2; ++pass) {
      for (Index l = 0; l < k; ++l) {
        const double c = out.orthonormal.row(l).dot(v);
        out.r(k, l) += c;
        v -= c * out.orthonormal.row(l).transpose();
      }
    }
    const double norm = v.norm();
    if (norm * norm <= kGramRankTolerance * max_norm * max_norm)
      fail(ErrorKind::RankDeficient, "rows are linearly dependent");
    out.r(k, k) = norm;
    out.orthonormal.row(k) = v.transpose() / norm;
  }
  return out;
}

}  // namespace ucollab
