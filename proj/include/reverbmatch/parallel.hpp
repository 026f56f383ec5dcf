#pragma once

#include <cstddef>
#include <functional>

namespace reverbmatch {

// Worker count used by parallel_for. Bounded by the REVERB_MATCH_THREADS
// environment variable (read once, at first use) and by the hardware.
int thread_budget();

// Runs fn(begin, end) over a deterministic partition of [0, n).
// fn must only write to state owned by its index range; results are
// identical for any thread count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace reverbmatch
