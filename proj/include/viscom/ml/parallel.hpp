#pragma once

#include <cstddef>
#include <functional>

namespace viscom::ml {

// Runs task(i) for i in [0, n) on up to `workers` threads (0 = hardware
// concurrency). Rethrows the exception of the lowest failing index.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task);

std::size_t default_workers();

}  // namespace viscom::ml
