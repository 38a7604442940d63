#pragma once

#include <cstddef>
#include <functional>

namespace roughlab {

/// Runs body(i) for i in [0, count) on up to `workers` threads with a static partition.
///
/// Each index is visited once; results written to per-index slots are therefore
/// independent of the worker count. The first exception thrown is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace roughlab
