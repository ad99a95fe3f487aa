#pragma once

#include <functional>

namespace wartem {

// Worker cap: WARTEM_THREADS when set (>= 1), otherwise hardware concurrency.
int worker_count();

// Runs body(i) for i in [begin, end), statically partitioned across workers.
// Bodies must write to disjoint slots; the result is then independent of the
// worker count. The first exception thrown by a body is rethrown here.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace wartem
