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

#include "beamsim/dataset.hpp"
#include "beamsim/binary_io.hpp"
#include "beamsim/parallel.hpp"
#include "beamsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace beamsim
{

Codebook SimSetup::ap_codebook() const
{
    return dft_codebook(scene.ap_panel);
}

Codebook SimSetup::ut_codebook() const
{
    return device_codebook(design);
}

void SimSetup::validate() const
{
    scene.validate();
    design.validate();
    pattern.validate();
    for (int a = 0; a < 3; ++a)
        if (!(region_lo[a] > 0.0 && region_lo[a] <= region_hi[a] && region_hi[a] < scene.room[a]))
            throw std::invalid_argument("User region must lie strictly inside the room.");
}

Eigen::MatrixXd Sample::rss_mw() const
{
    return rss_dbm.unaryExpr([](double v) { return dbm_to_mw(v); });
}

OrientationMode mode_of(std::uint64_t id)
{
    return id % 2 == 0 ? OrientationMode::portrait : OrientationMode::landscape;
}

bool los_of(std::uint64_t id)
{
    return id % 4 == 0 || id % 4 == 3;
}

std::vector<Path> sample_paths(const SimSetup &setup, const Pose &pose, bool los)
{
    auto paths = trace_rays(setup.scene, pose);
    return los ? paths : suppress_los(std::move(paths));
}

Sample make_sample(const SimSetup &setup, std::uint64_t id, std::uint64_t seed, const Codebook &ap_codebook,
                   const Codebook &ut_codebook, RaySample *rays)
{
    Rng rng(derive_seed(seed, {id}));
    Sample s;
    s.id = id;
    s.mode = mode_of(id);
    s.los = los_of(id);
    s.noise_seed = derive_seed(seed, {id, 1});
    for (int a = 0; a < 3; ++a)
    {
        std::uniform_real_distribution<double> u(setup.region_lo[a], setup.region_hi[a]);
        s.pose.position[a] = u(rng);
    }
    s.pose.rotation = sample_orientation(s.mode, rng);

    const auto paths = sample_paths(setup, s.pose, s.los);
    const ChannelMatrix h = assemble_channel(paths, setup.scene, s.pose, setup.design, setup.pattern);
    s.rss_dbm = beam_pair_gains(h, ap_codebook, ut_codebook, setup.budget.p_ap_dbm)
                    .cwiseAbs2()
                    .unaryExpr([](double v) { return mw_to_dbm(v); });
    s.label = oracle_pair(s.rss_mw(), ut_codebook.panel_of());

    if (rays)
    {
        rays->sample_id = id;
        rays->ut_pose = s.pose;
        rays->paths = paths;
    }
    return s;
}

Dataset generate(const SimSetup &setup, std::size_t n_samples, std::uint64_t seed, std::vector<RaySample> *rays)
{
    setup.validate();
    if (n_samples < 1)
        throw std::invalid_argument("A dataset needs at least one sample.");
    const Codebook ap = setup.ap_codebook();
    const Codebook ut = setup.ut_codebook();

    Dataset d;
    d.design = setup.design.name;
    d.n_ap = ap.size();
    d.n_ut = ut.size();
    d.seed = seed;
    d.samples.resize(n_samples);
    if (rays)
        rays->assign(n_samples, RaySample{});
    parallel_for(n_samples,
                 [&](std::size_t k)
                 { d.samples[k] = make_sample(setup, k, seed, ap, ut, rays ? &(*rays)[k] : nullptr); });
    return d;
}

Eigen::MatrixXd noisy_rss(const Sample &sample, const LinkBudget &budget)
{
    Rng rng(sample.noise_seed);
    return add_combined_noise(sample.rss_mw(), budget.sigma2_mw(), rng);
}

BeamPair relabel(const Sample &sample, const std::vector<int> &panel_of)
{
    return oracle_pair(sample.rss_mw(), panel_of);
}

std::array<Dataset, 3> split(const Dataset &data, const std::array<double, 3> &fractions, std::uint64_t seed)
{
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0))
            throw std::invalid_argument("Split fraction out of range.");
    if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9)
        throw std::invalid_argument("Split fractions must sum to 1.");

    const std::size_t n = data.size();
    const std::size_t n_train = std::size_t(std::llround(fractions[0] * double(n)));
    const std::size_t n_val = std::min(n - n_train, std::size_t(std::llround(fractions[1] * double(n))));

    // Shuffle each (mode, LOS) stratum, then interleave the strata by relative rank so every
    // prefix of the merged order is stratified
    std::array<std::vector<std::size_t>, 4> strata;
    for (std::size_t k = 0; k < n; ++k)
    {
        const auto &s = data.samples[k];
        strata[std::size_t((s.mode == OrientationMode::landscape ? 2 : 0) + (s.los ? 1 : 0))].push_back(k);
    }
    Rng rng(derive_seed(seed, {0x5b}));
    struct Key
    {
        double rank;
        std::size_t stratum;
        std::size_t index;
    };
    std::vector<Key> keys;
    for (std::size_t s = 0; s < strata.size(); ++s)
    {
        std::shuffle(strata[s].begin(), strata[s].end(), rng);
        for (std::size_t k = 0; k < strata[s].size(); ++k)
            keys.push_back({(double(k) + 0.5) / double(strata[s].size()), s, strata[s][k]});
    }
    std::sort(keys.begin(), keys.end(), [](const Key &a, const Key &b)
              { return a.rank != b.rank ? a.rank < b.rank : a.stratum < b.stratum; });

    std::array<Dataset, 3> out;
    for (auto &d : out)
    {
        d.design = data.design;
        d.n_ap = data.n_ap;
        d.n_ut = data.n_ut;
        d.seed = data.seed;
    }
    for (std::size_t k = 0; k < keys.size(); ++k)
    {
        const std::size_t part = k < n_train ? 0 : (k < n_train + n_val ? 1 : 2);
        out[part].samples.push_back(data.samples[keys[k].index]);
    }
    for (auto &d : out)
        std::sort(d.samples.begin(), d.samples.end(), [](const Sample &a, const Sample &b) { return a.id < b.id; });
    return out;
}

static constexpr std::uint32_t dataset_version = 1;

void save_dataset(std::ostream &out, const Dataset &data)
{
    out.write("BRSS1", 5);
    io::put<std::uint32_t>(out, dataset_version);
    io::put<std::uint32_t>(out, std::uint32_t(data.n_ap));
    io::put<std::uint32_t>(out, std::uint32_t(data.n_ut));
    io::put_string(out, data.design);
    io::put<std::uint64_t>(out, data.seed);
    io::put<std::uint64_t>(out, data.samples.size());
    for (const auto &s : data.samples)
    {
        if (s.rss_dbm.rows() != data.n_ap || s.rss_dbm.cols() != data.n_ut)
            throw std::invalid_argument("Sample RSS table does not match the dataset shape.");
        io::put<std::uint64_t>(out, s.id);
        for (int a = 0; a < 3; ++a)
            io::put<double>(out, s.pose.position[a]);
        io::put<double>(out, s.pose.rotation.alpha);
        io::put<double>(out, s.pose.rotation.beta);
        io::put<double>(out, s.pose.rotation.gamma);
        io::put<std::uint8_t>(out, s.mode == OrientationMode::landscape ? 1 : 0);
        io::put<std::uint8_t>(out, s.los ? 1 : 0);
        io::put<std::uint64_t>(out, s.noise_seed);
        for (int i = 0; i < data.n_ap; ++i)
            for (int j = 0; j < data.n_ut; ++j)
                io::put<double>(out, s.rss_dbm(i, j));
    }
    if (!out)
        throw std::runtime_error("Failed to write dataset.");
}

Dataset load_dataset(std::istream &in, const std::vector<int> &panel_of)
{
    io::expect_magic(in, "BRSS1");
    if (io::get<std::uint32_t>(in) != dataset_version)
        throw std::runtime_error("Unsupported dataset file version.");
    Dataset d;
    d.n_ap = int(io::get<std::uint32_t>(in));
    d.n_ut = int(io::get<std::uint32_t>(in));
    d.design = io::get_string(in);
    d.seed = io::get<std::uint64_t>(in);
    const auto n = io::get<std::uint64_t>(in);
    if (d.n_ap < 1 || d.n_ut < 1 || d.n_ap > 65536 || d.n_ut > 65536)
        throw std::runtime_error("Corrupt dataset file: table shape.");
    if (int(panel_of.size()) != d.n_ut)
        throw std::runtime_error("Dataset does not match the UT codebook.");
    d.samples.resize(std::size_t(n));
    for (auto &s : d.samples)
    {
        s.id = io::get<std::uint64_t>(in);
        for (int a = 0; a < 3; ++a)
            s.pose.position[a] = io::get<double>(in);
        s.pose.rotation.alpha = io::get<double>(in);
        s.pose.rotation.beta = io::get<double>(in);
        s.pose.rotation.gamma = io::get<double>(in);
        s.mode = io::get<std::uint8_t>(in) ? OrientationMode::landscape : OrientationMode::portrait;
        s.los = io::get<std::uint8_t>(in) != 0;
        s.noise_seed = io::get<std::uint64_t>(in);
        s.rss_dbm.resize(d.n_ap, d.n_ut);
        for (int i = 0; i < d.n_ap; ++i)
            for (int j = 0; j < d.n_ut; ++j)
                s.rss_dbm(i, j) = io::get<double>(in);
        s.label = relabel(s, panel_of);
    }
    return d;
}

void save_dataset(const std::string &path, const Dataset &data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write dataset file '" + path + "'.");
    save_dataset(out, data);
}

Dataset load_dataset(const std::string &path, const std::vector<int> &panel_of)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("Cannot open dataset file '" + path + "'.");
    return load_dataset(in, panel_of);
}

} // namespace beamsim
