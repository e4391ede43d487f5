// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace wavelearn {

/// Number of worker threads. Controlled by the WAVELEARN_THREADS environment
/// variable; 0 or unset means hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n). Work is split across worker_count() threads;
/// each index is executed exactly once and writes only to its own slot, so
/// results are independent of the thread schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace wavelearn
