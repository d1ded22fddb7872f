#ifndef EPF_PARALLEL_H_
#define EPF_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace epf {

// Number of worker threads used by ParallelFor. Defaults to the hardware
// concurrency; 1 disables threading.
std::size_t ThreadCount();
void SetThreadCount(std::size_t threads);

// Runs fn(i) for i in [0, n) across worker threads. Each index is visited
// exactly once; callers write results into per-index slots so the outcome does
// not depend on scheduling. The first exception thrown by any fn is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace epf

#endif  // EPF_PARALLEL_H_
