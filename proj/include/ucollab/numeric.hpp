#pragma once

#include <vector>

#include "ucollab/model.hpp"

namespace ucollab {

// Rows of W are treated as linearly dependent when the smallest eigenvalue
// of W W^T falls below this fraction of the largest.
inline constexpr double kGramRankTolerance = 1e-10;

struct EigenPairs {
  Vector values;   // descending
  Matrix vectors;  // column k pairs with values[k]
};

/// Full symmetric eigendecomposition with deterministic ordering.
///
/// Eigenvalues are sorted in descending order. Each eigenvector has its
/// first nonzero coordinate made positive. Within a group of tied
/// eigenvalues (gap below 1e-10 * |lambda_max|) the basis is replaced by a
/// canonical one, built by projecting the standard basis vectors e_0, e_1,
/// ... onto the shared eigenspace and orthonormalizing. The group is then
/// ordered by the index of each vector's largest-magnitude coordinate.
///
/// Throws NotSymmetric when ||A - A^T||_max > 1e-9 * max|A|.
EigenPairs sym_eig(const Matrix& matrix);

enum class RankCheck { Strict, Relaxed };

/// Orthonormal-column maximizer of trace(U^T G), computed as U_G V_G^T from
/// the thin SVD of G.
///
/// Strict mode throws RankDeficient when sigma_min < 1e-12 * sigma_max. In
/// relaxed mode a rank-deficient G still yields an orthonormal maximizer
/// (not unique); an all-zero G is always an error.
Matrix polar_factor(const Matrix& g, RankCheck check = RankCheck::Strict);

enum class RankPolicy {
  Strict,    // linearly dependent rows are an error
  Truncate,  // project onto the numerical row space
};

/// Orthogonal projector onto the row space of W, P_w = W^T (W W^T)^{-1} W.
struct Projector {
  Matrix matrix;
  Index rank = 0;
  std::vector<Index> dropped_rows;  // all-zero rows excluded before inversion
};

Projector projector_of(const Matrix& w, RankPolicy policy = RankPolicy::Strict);

/// W = R * W_ort with orthonormal rows in W_ort and R lower triangular
/// (so W^T = W_ort^T R^T with R^T upper triangular).
struct GramSchmidtRows {
  Matrix orthonormal;
  Matrix r;
};

GramSchmidtRows gram_schmidt_rows(const Matrix& w);

}  // namespace ucollab
