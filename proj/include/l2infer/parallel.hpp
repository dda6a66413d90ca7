#ifndef L2INFER_PARALLEL_HPP
#define L2INFER_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace l2 {

/// Worker count: L2INFER_THREADS when set, hardware concurrency otherwise.
/// Thread count never changes results; work items write disjoint slots.
int default_thread_count();

/// Runs fn(i) for i in [0, n) across workers in disjoint index chunks.
void parallel_for(long n, const std::function<void(long)>& fn);

}  // namespace l2

#endif
