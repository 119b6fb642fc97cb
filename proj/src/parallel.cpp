#include "complab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace complab {

namespace {
std::atomic<int> g_workers{0};
}

int workers()
{
    int w = g_workers.load();
    if (w > 0) return w;
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_workers(int n) { g_workers.store(std::max(1, n)); }

int workers_from_environment()
{
    if (const char* env = std::getenv("COMPLETENESS_LAB_WORKERS")) {
        try {
            int n = std::stoi(env);
            if (n >= 1) set_workers(n);
        } catch (...) {
        }
    }
    return workers();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers()), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < w; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace complab
