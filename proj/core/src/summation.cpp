#include "uloc/summation.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace uloc {

unsigned worker_count()
{
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("UL_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    const unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace uloc
