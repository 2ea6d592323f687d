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

#include "beamsim/channel_io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace beamsim;

namespace
{

std::vector<RaySample> example_samples()
{
    const Scene scene = Scene::living_room();
    std::vector<RaySample> out;
    Rng rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t id = 0; id < 6; ++id)
    {
        RaySample s;
        s.sample_id = id * 3 + 1;
        s.ut_pose.position = Vec3(0.5 + 6.0 * u(rng), 0.5 + 6.0 * u(rng), 0.8 + 0.7 * u(rng));
        s.ut_pose.rotation = sample_orientation(OrientationMode::landscape, rng);
        if (id != 2)
            s.paths = trace_rays(scene, s.ut_pose);
        out.push_back(s);
    }
    return out;
}

void require_equal(const std::vector<RaySample> &a, const std::vector<RaySample> &b)
{
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        REQUIRE(a[k].sample_id == b[k].sample_id);
        REQUIRE(a[k].ut_pose.position == b[k].ut_pose.position);
        REQUIRE(a[k].ut_pose.rotation == b[k].ut_pose.rotation);
        REQUIRE(a[k].paths == b[k].paths);
    }
}

std::string csv_with_row(const std::string &row)
{
    return std::string(ray_csv_header) + "\n" + row + "\n";
}

} // namespace

TEST_CASE("CSV ray dump round-trips exactly", "[channel_io]")
{
    const auto samples = example_samples();
    std::stringstream buf;
    write_rays_csv(buf, samples);
    require_equal(read_rays_csv(buf), samples);
}

TEST_CASE("Binary ray dump round-trips exactly", "[channel_io]")
{
    const auto samples = example_samples();
    std::stringstream buf;
    write_rays_binary(buf, samples);
    require_equal(read_rays_binary(buf), samples);
}

TEST_CASE("CSV layout", "[channel_io]")
{
    const auto samples = example_samples();
    std::stringstream buf;
    write_rays_csv(buf, samples);
    std::string line;
    std::getline(buf, line);
    CHECK(line == ray_csv_header);
    std::size_t rows = 0;
    while (std::getline(buf, line))
    {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 14);
    }
    std::size_t expected = 0;
    for (const auto &s : samples)
        expected += s.paths.empty() ? 1 : s.paths.size();
    CHECK(rows == expected);
}

TEST_CASE("Ingest selects the format from the file content", "[channel_io]")
{
    const auto samples = example_samples();
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = (dir / "beamsim_test_rays.csv").string();
    const auto bin = (dir / "beamsim_test_rays.bray").string();
    {
        std::ofstream out(csv);
        write_rays_csv(out, samples);
    }
    {
        std::ofstream out(bin, std::ios::binary);
        write_rays_binary(out, samples);
    }
    require_equal(ingest_rays(csv), samples);
    require_equal(ingest_rays(bin), samples);
    std::filesystem::remove(csv);
    std::filesystem::remove(bin);
    CHECK_THROWS_AS(ingest_rays((dir / "beamsim_no_such_file.csv").string()), std::runtime_error);
}

TEST_CASE("Malformed CSV reports the line", "[channel_io]")
{
    const std::string good = "1,1,2,1,0,0,0,1,-70,0.5,0,1.5707963267948966,1,0,0";
    {
        std::istringstream in(csv_with_row(good));
        CHECK(read_rays_csv(in).size() == 1);
    }
    {
        std::istringstream in("sample_id,ut_x\n" + good + "\n");
        CHECK_THROWS_WITH(read_rays_csv(in), Catch::Matchers::StartsWith("line 1:"));
    }
    {
        std::istringstream in(csv_with_row(good) + "1,1,2,1,0,0,0,1,-70\n");
        CHECK_THROWS_WITH(read_rays_csv(in), Catch::Matchers::StartsWith("line 3:"));
    }
    {
        std::istringstream in(csv_with_row("1,1,2,1,0,0,0,1,-70,abc,0,1.5,1,0,0"));
        CHECK_THROWS_WITH(read_rays_csv(in), Catch::Matchers::StartsWith("line 2:"));
    }
    {
        std::istringstream in(csv_with_row("1,1,2,1,0,0,0,1,-70,0.5,0,1.5,1,1,0"));
        CHECK_THROWS_WITH(read_rays_csv(in), Catch::Matchers::ContainsSubstring("non-unit"));
    }
    {
        std::istringstream in(csv_with_row("1,1,2,1,0,0,0,2,-70,0.5,0,1.5,1,0,0"));
        CHECK_THROWS_WITH(read_rays_csv(in), Catch::Matchers::StartsWith("line 2:"));
    }
}

TEST_CASE("Truncated binary dump is rejected", "[channel_io]")
{
    const auto samples = example_samples();
    std::stringstream buf;
    write_rays_binary(buf, samples);
    std::string bytes = buf.str();
    bytes.resize(bytes.size() - 9);
    std::istringstream in(bytes);
    CHECK_THROWS_AS(read_rays_binary(in), std::runtime_error);
    std::istringstream wrong("XXXXX");
    CHECK_THROWS_AS(read_rays_binary(wrong), std::runtime_error);
}
