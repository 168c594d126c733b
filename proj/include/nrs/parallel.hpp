#pragma once

#include <cstddef>
#include <functional>

namespace nrs {

// Calls fn(i) for i in [0, count), spread over up to `threads` workers.
// threads <= 1 runs inline. The first exception thrown by any fn call is
// rethrown on the calling thread after all workers stop picking up work.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace nrs
