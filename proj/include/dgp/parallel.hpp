/*
 * Copyright 2026 The dgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DGP_PARALLEL_HPP
#define DGP_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dgp {

/// Runs body(0..n-1) on up to `threads` workers. Each index is processed
/// exactly once and results must be written to caller-owned slots, so the
/// outcome is independent of the thread count. If any body throws, the
/// exception for the lowest index is rethrown after all workers join.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& body) {
    if (n <= 0) return;
    if (threads < 1) threads = 1;
    const int workers = std::min(threads, n);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    auto run = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace dgp

#endif // DGP_PARALLEL_HPP
