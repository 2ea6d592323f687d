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

#ifndef BEAMSIM_PARALLEL_HPP
#define BEAMSIM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace beamsim
{

// Worker count: BEAMSIM_THREADS when set, otherwise the hardware concurrency (at least 1)
int worker_count();

// Runs body(k) for k in [0, n). Work is split into fixed interleaved shares, so results written
// to per-index slots do not depend on the thread count. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, int threads = 0);

} // namespace beamsim

#endif
