#pragma once

#include <cstdint>
#include <vector>

#include "ucollab/collaboration.hpp"

namespace ucollab {

/// Rows are the top-M unit eigenvectors of Omega; the resulting C-DC is the
/// sum of the M largest eigenvalues.
CollaborationMatrix design_cost_free(const Omega& omega, Index m);

/// For diagonal Omega: unit rows on the M largest diagonal entries, every
/// column outside the nonzero-diagonal support left at zero.
CollaborationMatrix design_diagonal_shortcut(const Omega& omega, Index m);

/// I.i.d. standard normal entries.
CollaborationMatrix design_random(const DesignSpec& spec, std::uint64_t seed);

/// (M/N) * sum_i ||s_i||^2.
double random_baseline_prediction(const SignalClass& signal_class, Index m);

/// Per signal, whether (1-delta)||s||^2 <= (N/M)||P_w s||^2 <= (1+delta)||s||^2.
std::vector<bool> check_stable_embedding(const CollaborationMatrix& w,
                                         const SignalClass& signal_class, double delta);

}  // namespace ucollab
