#pragma once

#include <functional>

#include <Eigen/Core>

namespace ucollab {

/// Runs fn(0..count-1) on up to `threads` workers. Each index must write only
/// its own output slot, which keeps results independent of scheduling.
void parallel_for(Eigen::Index count, unsigned threads, const std::function<void(Eigen::Index)>& fn);

}  // namespace ucollab
