#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace arithbf::detail {

// Runs fn(0), ..., fn(jobs-1) on separate threads (inline when jobs <= 1).
// Callers stripe their index space by worker id and keep per-worker
// accumulators, so the merge order -- and with commutative merges, the
// result -- is independent of scheduling.
inline void run_striped(int jobs, const std::function<void(int)>& fn)
{
    if (jobs <= 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) threads.emplace_back(fn, j);
    for (std::thread& t : threads) t.join();
}

} // namespace arithbf::detail
