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

#ifndef BEAMSIM_CONFIG_HPP
#define BEAMSIM_CONFIG_HPP

#include "beamsim/dataset.hpp"
#include "beamsim/eval.hpp"
#include "beamsim/mlp.hpp"
#include "beamsim/selection.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace beamsim
{

// Run configuration. Text form is one "key = value" per line, '#' starts a comment, lists are
// comma separated. Keys and defaults:
//
//   seed = 1                      root seed of every random stream
//   design = edge-face            edge, edge-face, or a JSON design file
//   out = out                     output directory
//   scale = 1.0                   multiplies the default dataset sizes 56000 / 560 / 14000
//   n_train, n_small, n_test      explicit sizes, 0 = derived from scale
//   room = 7,7,3                  room extents (m)
//   ap_position = 0.1,3.5,2.0
//   region_lo = 0.5,0.5,0.8       UT position box
//   region_hi = 6.5,6.5,1.5
//   max_order = 2  reflection_loss_db = 10  carrier_ghz = 60
//   p_ap_dbm = 24  sigma_n_dbm = -84
//   n_hidden = 5  width = 128
//   learning_rate = 0.001  batch_size = 256  max_epochs = 200  patience = 20
//   validation_fraction = 0.1
//   methods = sn,mnps,mnbs,gifp,hpbs
//   n_b = 5,10,20,40  n_rf = 1,5  top_k = -1
//   gifp_cell_m = 0.5  gifp_sectors = 8  gifp_min_samples = 5
//   coverage_step_deg = 2
//   write_rays = false  ray_format = csv
//   train_set = large             large or small
struct RunConfig
{
    std::uint64_t seed = 1;
    std::string design = "edge-face";
    std::string out = "out";
    double scale = 1.0;
    std::size_t n_train = 0, n_small = 0, n_test = 0;

    Vec3 room = Vec3(7.0, 7.0, 3.0);
    Vec3 ap_position = Vec3(0.1, 3.5, 2.0);
    Vec3 region_lo = Vec3(0.5, 0.5, 0.8);
    Vec3 region_hi = Vec3(6.5, 6.5, 1.5);
    int max_order = 2;
    double reflection_loss_db = 10.0;
    double carrier_ghz = 60.0;
    double p_ap_dbm = 24.0;
    double sigma_n_dbm = -84.0;

    int n_hidden = 5;
    int width = 128;
    double learning_rate = 1e-3;
    int batch_size = 256;
    int max_epochs = 200;
    int patience = 20;
    double validation_fraction = 0.1;

    std::vector<Method> methods{Method::sn, Method::mnps, Method::mnbs, Method::gifp, Method::hpbs};
    std::vector<int> n_b{5, 10, 20, 40};
    std::vector<int> n_rf{1, 5};
    int top_k = -1;

    double gifp_cell_m = 0.5;
    int gifp_sectors = 8;
    int gifp_min_samples = 5;

    double coverage_step_deg = 2.0;
    bool write_rays = false;
    std::string ray_format = "csv";
    std::string train_set = "large";

    // Resolved sizes
    std::size_t train_size() const;
    std::size_t small_size() const;
    std::size_t test_size() const;

    SimSetup setup() const;
    TrainConfig train_config(std::uint64_t stream) const;
    GifpConfig gifp_config() const;

    // Throws std::invalid_argument naming the offending key
    void validate() const;

    // Sets one key from its text value
    void set(const std::string &key, const std::string &value);

    std::string to_text() const;
};

RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);

std::vector<int> parse_int_list(const std::string &text);
std::vector<Method> parse_method_list(const std::string &text);

} // namespace beamsim

#endif
