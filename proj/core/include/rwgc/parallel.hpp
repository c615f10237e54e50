#pragma once

#include <cstdint>
#include <functional>

namespace rwgc {

// Process-wide default worker count. 0 means hardware concurrency.
void set_default_threads(int n);
int default_threads();

// requested > 0 wins, otherwise the process default applies.
int resolve_threads(int requested);

// Static block partition of [begin, end). Workers receive disjoint
// half-open ranges; callers must write only into slices indexed by the
// range so the result is identical for any worker count.
void parallel_for(std::int64_t begin, std::int64_t end, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace rwgc
