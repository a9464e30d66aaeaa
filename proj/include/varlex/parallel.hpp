#pragma once

#include <cstdint>
#include <functional>

namespace varlex {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is split into
// contiguous chunks; results must be written to disjoint, index-addressed
// slots so the outcome is identical for any job count. Exceptions from
// workers are rethrown on the calling thread (first one wins).
void parallel_for(int64_t n, int jobs, const std::function<void(int64_t)>& fn);

// splitmix64: cheap deterministic seed derivation for per-trial generators.
uint64_t splitmix64(uint64_t x);

} // namespace varlex
