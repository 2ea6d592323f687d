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
#include "beamsim/parallel.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <set>
#include <sstream>

using namespace beamsim;

namespace
{

std::string bytes_of(const Dataset &d)
{
    std::ostringstream out;
    save_dataset(out, d);
    return out.str();
}

int count_los(const Dataset &d)
{
    int n = 0;
    for (const auto &s : d.samples)
        n += s.los;
    return n;
}

int count_portrait(const Dataset &d)
{
    int n = 0;
    for (const auto &s : d.samples)
        n += s.mode == OrientationMode::portrait;
    return n;
}

} // namespace

TEST_CASE("Mode and LOS balance", "[dataset]")
{
    const SimSetup setup;
    const Dataset four = generate(setup, 4, 1);
    CHECK(count_portrait(four) == 2);
    CHECK(count_los(four) == 2);

    for (std::size_t n : {1u, 7u, 10u, 101u})
    {
        const Dataset d = generate(setup, n, 2);
        CHECK(count_portrait(d) == int((n + 1) / 2));
        int los_portrait = 0, los_landscape = 0;
        for (const auto &s : d.samples)
            (s.mode == OrientationMode::portrait ? los_portrait : los_landscape) += s.los;
        CHECK(std::abs(2 * count_los(d) - int(n)) <= 2);
        CHECK(std::abs(2 * los_portrait - count_portrait(d)) <= 1);
        CHECK(std::abs(2 * los_landscape - (int(n) - count_portrait(d))) <= 1);
    }
    CHECK_THROWS_AS(generate(setup, 0, 1), std::invalid_argument);
}

TEST_CASE("Samples are consistent with their paths", "[dataset]")
{
    const SimSetup setup;
    std::vector<RaySample> rays;
    const Dataset d = generate(setup, 40, 3, &rays);
    REQUIRE(rays.size() == 40);
    const Codebook ut = setup.ut_codebook();
    for (std::size_t k = 0; k < d.size(); ++k)
    {
        const Sample &s = d.samples[k];
        const bool has_los = std::any_of(rays[k].paths.begin(), rays[k].paths.end(), [](const Path &p) { return p.is_los; });
        CHECK(has_los == s.los);
        CHECK(rays[k].paths.size() == (s.los ? 25u : 24u));
        CHECK(s.label == relabel(s, ut.panel_of()));
        CHECK(s.rss_dbm.rows() == 64);
        CHECK(s.rss_dbm.cols() == 20);
        for (int a = 0; a < 3; ++a)
        {
            CHECK(s.pose.position[a] >= setup.region_lo[a]);
            CHECK(s.pose.position[a] <= setup.region_hi[a]);
        }
    }
}

TEST_CASE("Generation is deterministic and independent of the worker count", "[dataset]")
{
    const SimSetup setup;
    const char *old = std::getenv("BEAMSIM_THREADS");
    const std::string saved = old ? old : "";

    setenv("BEAMSIM_THREADS", "1", 1);
    const std::string a = bytes_of(generate(setup, 30, 4));
    setenv("BEAMSIM_THREADS", "3", 1);
    const std::string b = bytes_of(generate(setup, 30, 4));
    if (old)
        setenv("BEAMSIM_THREADS", saved.c_str(), 1);
    else
        unsetenv("BEAMSIM_THREADS");

    CHECK(a == b);
    CHECK(a != bytes_of(generate(setup, 30, 5)));
}

TEST_CASE("Dataset files round-trip losslessly", "[dataset]")
{
    SimSetup setup;
    setup.design = edge_design();
    const Dataset d = generate(setup, 25, 6);
    std::stringstream buf;
    save_dataset(buf, d);
    const Dataset r = load_dataset(buf, setup.ut_codebook().panel_of());
    CHECK(r.design == "edge");
    CHECK(r.n_ap == 64);
    CHECK(r.n_ut == 12);
    CHECK(r.seed == 6);
    REQUIRE(r.size() == d.size());
    for (std::size_t k = 0; k < d.size(); ++k)
    {
        const Sample &x = d.samples[k], &y = r.samples[k];
        CHECK(x.id == y.id);
        CHECK(x.pose.position == y.pose.position);
        CHECK(x.pose.rotation == y.pose.rotation);
        CHECK(x.mode == y.mode);
        CHECK(x.los == y.los);
        CHECK(x.noise_seed == y.noise_seed);
        CHECK(x.rss_dbm == y.rss_dbm);
        CHECK(x.label == y.label);
    }
    CHECK(bytes_of(r) == bytes_of(d));

    std::istringstream wrong(buf.str());
    CHECK_THROWS(load_dataset(wrong, std::vector<int>(20, 0)));
    const std::string bytes = bytes_of(d);
    std::istringstream cut(bytes.substr(0, bytes.size() - 100));
    CHECK_THROWS(load_dataset(cut, setup.ut_codebook().panel_of()));
}

TEST_CASE("Noisy tables are reproducible from the noise seed", "[dataset]")
{
    const SimSetup setup;
    const Dataset d = generate(setup, 3, 7);
    const Sample &s = d.samples[0];
    const Eigen::MatrixXd a = noisy_rss(s, setup.budget);
    const Eigen::MatrixXd b = noisy_rss(s, setup.budget);
    CHECK(a == b);
    CHECK(a != s.rss_mw());
    CHECK(noisy_rss(d.samples[1], setup.budget) != noisy_rss(d.samples[2], setup.budget));
}

TEST_CASE("Stratified split", "[dataset]")
{
    const SimSetup setup;
    const Dataset d = generate(setup, 1000, 8);
    const auto parts = split(d, {0.8, 0.1, 0.1}, 9);
    CHECK(parts[0].size() == 800);
    CHECK(parts[1].size() == 100);
    CHECK(parts[2].size() == 100);
    CHECK(std::abs(count_los(parts[0]) - 400) <= 1);
    CHECK(std::abs(count_portrait(parts[0]) - 400) <= 1);

    std::set<std::uint64_t> ids;
    for (const auto &p : parts)
        for (const auto &s : p.samples)
            CHECK(ids.insert(s.id).second);
    CHECK(ids.size() == 1000);

    const auto again = split(d, {0.8, 0.1, 0.1}, 9);
    CHECK(bytes_of(again[1]) == bytes_of(parts[1]));

    CHECK_THROWS_AS(split(d, {0.8, 0.3, -0.1}, 9), std::invalid_argument);
    CHECK_THROWS_AS(split(d, {0.5, 0.1, 0.1}, 9), std::invalid_argument);
}

TEST_CASE("Parallel loop covers every index once", "[dataset]")
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t k) { hits[k]++; }, 4);
    for (const auto &h : hits)
        CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t k) { if (k == 7) throw std::runtime_error("boom"); }, 3),
                    std::runtime_error);
    CHECK(worker_count() >= 1);
}

TEST_CASE("Setup validation", "[dataset]")
{
    SimSetup s;
    s.region_hi = Vec3(7.5, 6.5, 1.5);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
