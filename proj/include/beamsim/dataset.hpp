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

#ifndef BEAMSIM_DATASET_HPP
#define BEAMSIM_DATASET_HPP

#include "beamsim/antenna.hpp"
#include "beamsim/channel.hpp"
#include "beamsim/channel_io.hpp"
#include "beamsim/selection.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace beamsim
{

// Everything needed to turn a UT pose into an RSS table
struct SimSetup
{
    Scene scene = Scene::living_room();
    DeviceDesign design = edge_face_design();
    ElementPattern pattern;
    LinkBudget budget;
    Vec3 region_lo = Vec3(0.5, 0.5, 0.8); // UT positions are drawn uniformly in [lo, hi]
    Vec3 region_hi = Vec3(6.5, 6.5, 1.5);

    Codebook ap_codebook() const;
    Codebook ut_codebook() const;
    void validate() const;
};

struct Sample
{
    std::uint64_t id = 0;
    Pose pose;
    OrientationMode mode = OrientationMode::portrait;
    bool los = false;
    std::uint64_t noise_seed = 0;
    Eigen::MatrixXd rss_dbm; // noiseless, N_AP x N_UT
    BeamPair label;

    Eigen::MatrixXd rss_mw() const;
};

struct Dataset
{
    std::string design;
    int n_ap = 0;
    int n_ut = 0;
    std::uint64_t seed = 0;
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
};

// Sample id k is portrait for even k; LOS for k mod 4 in {0, 3}, which balances LOS within each mode
OrientationMode mode_of(std::uint64_t id);
bool los_of(std::uint64_t id);

// Paths of a sample pose; the LOS path is removed for NLOS samples
std::vector<Path> sample_paths(const SimSetup &setup, const Pose &pose, bool los);

// Builds one sample with noiseless RSS and its oracle label
Sample make_sample(const SimSetup &setup, std::uint64_t id, std::uint64_t seed, const Codebook &ap_codebook,
                   const Codebook &ut_codebook, RaySample *rays = nullptr);

// rays, when non-null, receives the traced paths of every sample
Dataset generate(const SimSetup &setup, std::size_t n_samples, std::uint64_t seed,
                 std::vector<RaySample> *rays = nullptr);

// Noisy table of a sample, regenerated from its noise seed
Eigen::MatrixXd noisy_rss(const Sample &sample, const LinkBudget &budget);

// Oracle label of the stored noiseless table
BeamPair relabel(const Sample &sample, const std::vector<int> &panel_of);

// Stratified by (mode, LOS). Throws std::invalid_argument unless fractions lie in [0, 1] and sum to 1.
std::array<Dataset, 3> split(const Dataset &data, const std::array<double, 3> &fractions, std::uint64_t seed);

// Binary dataset file (magic "BRSS1"), little endian:
//   header: u32 version, u32 N_AP, u32 N_UT, string design, u64 seed, u64 sample count
//   record: u64 id, 3 x f64 position, 3 x f64 rotation, u8 mode, u8 los, u64 noise seed,
//           N_AP * N_UT x f64 noiseless RSS in dBm, row-major over (i, j)
// Labels are not stored; they are recomputed on load.
void save_dataset(std::ostream &out, const Dataset &data);
Dataset load_dataset(std::istream &in, const std::vector<int> &panel_of);
void save_dataset(const std::string &path, const Dataset &data);
Dataset load_dataset(const std::string &path, const std::vector<int> &panel_of);

} // namespace beamsim

#endif
