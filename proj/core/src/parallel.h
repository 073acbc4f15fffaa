// Copyright 2026 The qem-mix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEM_PARALLEL_H
#define QEM_PARALLEL_H

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qem::internal {

/// Calls `body(begin, end)` on contiguous chunks of [0, count) using up to
/// `workers` threads. Each index is visited exactly once; callers must only
/// write to per-index outputs so the result does not depend on `workers`.
/// The first exception thrown by any chunk is rethrown.
template <typename Body>
void parallel_for(size_t count, size_t workers, Body &&body) {
    workers = std::max<size_t>(1, std::min(workers, count));
    if (workers <= 1) {
        if (count > 0) {
            body(size_t{0}, count);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (size_t w = 0; w < workers; w++) {
            size_t begin = count * w / workers;
            size_t end = count * (w + 1) / workers;
            threads.emplace_back([&, begin, end] {
                try {
                    body(begin, end);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace qem::internal

#endif
