#pragma once

#include <cstddef>
#include <functional>

namespace epsnet {

/// Worker count used by parallel_for; 1 means run inline.
void set_jobs(int jobs);
int jobs();

/// Run body(i) for i in [0, n). Each index is claimed by exactly one worker,
/// so callers that write to slot i only get schedule-independent results. If
/// several bodies throw, the exception of the lowest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace epsnet
