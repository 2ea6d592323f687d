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

#include "beamsim/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamsim
{

void GifpConfig::validate() const
{
    if (!(cell_m > 0.0))
        throw std::invalid_argument("GIFP cell size must be positive.");
    if (alpha_sectors < 1)
        throw std::invalid_argument("GIFP needs at least one orientation sector.");
    if (min_samples < 0)
        throw std::invalid_argument("GIFP minimum bin size must be non-negative.");
}

int GifpTable::bin_of(const Pose &pose, OrientationMode mode) const
{
    const Vec3 &x = pose.position;
    for (int a = 0; a < 3; ++a)
        if (!(x[a] >= 0.0 && x[a] <= room_[a]))
            throw std::invalid_argument("pose out of bounds");
    const int ix = std::min(int(x.x() / config_.cell_m), nx_ - 1);
    const int iy = std::min(int(x.y() / config_.cell_m), ny_ - 1);
    const double a = wrap_pi(pose.rotation.alpha) + pi;
    const int sector = std::clamp(int(a / (2.0 * pi / sectors_)), 0, sectors_ - 1);
    const int m = (modes_ == 2 && mode == OrientationMode::landscape) ? 1 : 0;
    return ((m * sectors_ + sector) * ny_ + iy) * nx_ + ix;
}

int GifpTable::bin_size(int bin) const
{
    const auto it = bins_.find(bin);
    if (it == bins_.end())
        return 0;
    int n = 0;
    for (int c : it->second)
        n += c;
    return n;
}

Eigen::MatrixXd GifpTable::scores(const Pose &pose, OrientationMode mode) const
{
    const int bin = bin_of(pose, mode);
    const auto it = bins_.find(bin);
    const bool local = it != bins_.end() && bin_size(bin) >= config_.min_samples;

    // Bin frequency first, global frequency breaks ties
    Eigen::MatrixXd s(n_ap_, n_ut_);
    for (int i = 0; i < n_ap_; ++i)
        for (int j = 0; j < n_ut_; ++j)
        {
            const std::size_t k = std::size_t(i * n_ut_ + j);
            s(i, j) = (local ? double(it->second[k]) * double(n_train_ + 1) : 0.0) + double(global_[k]);
        }
    return s;
}

GifpTable gifp_build(const std::vector<GifpSample> &train, const Vec3 &room, int n_ap, int n_ut,
                     const GifpConfig &config)
{
    config.validate();
    if (train.empty())
        throw std::invalid_argument("GIFP needs a nonempty training set.");
    if (n_ap < 1 || n_ut < 1)
        throw std::invalid_argument("Codebook sizes must be positive.");

    GifpTable t;
    t.room_ = room;
    t.config_ = config;
    t.n_ap_ = n_ap;
    t.n_ut_ = n_ut;
    t.nx_ = std::max(1, int(std::ceil(room.x() / config.cell_m - 1e-9)));
    t.ny_ = std::max(1, int(std::ceil(room.y() / config.cell_m - 1e-9)));
    t.sectors_ = config.alpha_sectors;
    t.modes_ = config.split_modes ? 2 : 1;
    t.n_train_ = int(train.size());
    t.global_.assign(std::size_t(n_ap * n_ut), 0);

    for (const auto &s : train)
    {
        if (s.ap < 0 || s.ap >= n_ap || s.ut < 0 || s.ut >= n_ut)
            throw std::invalid_argument("GIFP training label out of range.");
        const std::size_t k = std::size_t(s.ap * n_ut + s.ut);
        auto &bin = t.bins_[t.bin_of(s.pose, s.mode)];
        if (bin.empty())
            bin.assign(std::size_t(n_ap * n_ut), 0);
        ++bin[k];
        ++t.global_[k];
    }
    return t;
}

CandidateList gifp_candidates(const GifpTable &table, const Pose &pose, OrientationMode mode,
                              const Codebook &ut_codebook, int n_b, int n_rf)
{
    if (table.n_ut() != ut_codebook.size())
        throw std::invalid_argument("GIFP table does not match the UT codebook.");
    return pair_candidates(table.scores(pose, mode), ut_codebook.panel_of(), n_b, n_rf);
}

} // namespace beamsim
