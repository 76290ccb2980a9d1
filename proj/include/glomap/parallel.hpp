#pragma once

#include "glomap/types.hpp"

#include <functional>

namespace glomap {

/// Worker count: GLOMAP_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_threads();

/// Calls body(i) for every i in [begin, end), splitting the range into
/// contiguous blocks across worker_threads() threads. Bodies must write only
/// to locations owned by their index so results do not depend on the split.
void parallel_for(Index begin, Index end, const std::function<void(Index)>& body);

}  // namespace glomap
