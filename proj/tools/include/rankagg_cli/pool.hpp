#pragma once

#include <cstddef>
#include <functional>

namespace rankagg::cli {

/// Worker count: RANKAGG_THREADS when set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs task(i) for i in [0, count) on up to worker_count() threads. Each
/// task must write only its own output slot. Rethrows the first failure by index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace rankagg::cli
