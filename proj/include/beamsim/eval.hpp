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

#ifndef BEAMSIM_EVAL_HPP
#define BEAMSIM_EVAL_HPP

#include "beamsim/dataset.hpp"
#include "beamsim/mlp.hpp"
#include "beamsim/selection.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace beamsim
{

// Fraction of samples whose chosen pair is strictly weaker than the oracle pair (noiseless RSS)
double misalignment(std::span<const double> chosen_rss, std::span<const double> oracle_rss);

// (T_fr - N_b T_s) / T_fr * log2(1 + SNR). Throws std::invalid_argument("frame exhausted") when
// the slots exceed the frame.
double effective_se(double snr_linear, int n_slots, double frame_ms = 20.0, double slot_ms = 0.1);

// Neumaier-compensated sum
double compensated_sum(std::span<const double> values);

enum class Method
{
    sn,
    mnps,
    mnbs,
    gifp,
    hpbs
};

std::string to_string(Method m);
Method method_from_string(const std::string &name);

// Trained models and tables; entries may be null for methods that are not evaluated
struct MethodModels
{
    const MlpModel *sn = nullptr;
    const MlpModel *net1 = nullptr;
    const MlpModel *net2_ps = nullptr;
    const MlpModel *net2_bs = nullptr;
    const GifpTable *gifp = nullptr;
};

struct SweepConfig
{
    std::vector<Method> methods;
    std::vector<int> n_b;  // slot budgets
    std::vector<int> n_rf;
    int top_k = -1;        // AP beams expanded by NET_II, -1 for all
    std::size_t n_train = 0;
    std::uint64_t seed = 0;
    std::uint64_t hpbs_stream = 0x4b;
};

struct ResultRow
{
    std::string method;
    std::string design;
    std::size_t n_train = 0;
    int n_rf = 1;
    int n_b = 0;
    double slots = 0.0; // mean slots spent
    double misalignment = 0.0;
    double mean_se_eff = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

struct EvalResult
{
    std::vector<ResultRow> rows;
    std::vector<std::string> violations; // broken invariants, empty on a clean run

    const ResultRow &row(const std::string &method, int n_rf, int n_b) const;

    // method,design,n_train,n_rf,N_b,slots,misalignment,mean_se_eff,n_samples,seed
    void write_csv(std::ostream &out) const;
};

// Runs every (method, N_RF, N_b) combination on the test set. HP-BS ignores N_b and N_RF and is
// reported at its own slot cost in every row.
EvalResult sweep(const SimSetup &setup, const Dataset &test, const MethodModels &models, const SweepConfig &config);

} // namespace beamsim

#endif
