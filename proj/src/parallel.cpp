// SPDX-License-Identifier: Apache-2.0
//
// beamsim: location- and orientation-aware beam selection for multi-panel mmWave devices
// Copyright (C) 2026 The beamsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamsim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace beamsim
{

int worker_count()
{
    if (const char *env = std::getenv("BEAMSIM_THREADS"))
    {
        try
        {
            const int n = std::stoi(env);
            if (n >= 1)
                return n;
        }
        catch (const std::exception &)
        {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, int threads)
{
    if (threads <= 0)
        threads = worker_count();
    if (threads == 1 || n < 2)
    {
        for (std::size_t k = 0; k < n; ++k)
            body(k);
        return;
    }
    const std::size_t t_count = std::min<std::size_t>(std::size_t(threads), n);
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < t_count; ++t)
        pool.emplace_back(
            [&, t]()
            {
                try
                {
                    for (std::size_t k = t; k < n; k += t_count)
                        body(k);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            });
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace beamsim
