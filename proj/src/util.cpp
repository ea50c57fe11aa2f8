// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/util.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace texsg {

int worker_count() {
    if (const char* env = std::getenv("TEXSG_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void parallel_for(size_t n, const std::function<void(size_t)>& body) {
    int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    const size_t chunk = std::max<size_t>(1, n / (size_t(workers) * 8));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                size_t begin = next.fetch_add(chunk);
                if (begin >= n || failed.load()) return;
                size_t end = std::min(n, begin + chunk);
                try {
                    for (size_t i = begin; i < end; ++i) body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace texsg
