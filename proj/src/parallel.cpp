#include "bpc/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace bpc {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BPC_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(long long n, int threads, const std::function<void(long long)>& body) {
    if (n <= 0) return;
    const int t = static_cast<int>(
        std::min<long long>(resolve_thread_count(threads), n));
    if (t <= 1) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        const long long begin = n * w / t;
        const long long end = n * (w + 1) / t;
        workers.emplace_back([begin, end, &body] {
            for (long long i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& th : workers) th.join();
}

}  // namespace bpc
