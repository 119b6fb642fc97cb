#pragma once

#include <cstddef>
#include <functional>

namespace complab {

// Worker count used by every parallel section. Defaults to hardware
// concurrency until set_workers is called.
int workers();
void set_workers(int n);
// Reads COMPLETENESS_LAB_WORKERS if set; returns the resulting worker count.
int workers_from_environment();

// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
// write results into per-index slots, so the outcome does not depend on the
// worker count. The first exception thrown is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace complab
