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
#include "beamsim/binary_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace beamsim
{

namespace
{

constexpr std::size_t n_fields = 15;
constexpr std::uint8_t kind_nlos = 0, kind_los = 1, kind_empty = 2;

void put_pose_csv(std::ostream &out, std::uint64_t id, const Pose &pose)
{
    using io::format_double;
    out << id << ',' << format_double(pose.position.x()) << ',' << format_double(pose.position.y()) << ','
        << format_double(pose.position.z()) << ',' << format_double(pose.rotation.alpha) << ','
        << format_double(pose.rotation.beta) << ',' << format_double(pose.rotation.gamma);
}

void check_unit(const Vec3 &v, const std::string &where)
{
    if (!std::isfinite(v.norm()) || std::abs(v.norm() - 1.0) > 1e-9)
        throw std::runtime_error(where + ": non-unit AoA vector");
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

} // namespace

void write_rays_csv(std::ostream &out, std::span<const RaySample> samples)
{
    using io::format_double;
    out << ray_csv_header << '\n';
    for (const auto &s : samples)
    {
        if (s.paths.empty())
        {
            put_pose_csv(out, s.sample_id, s.ut_pose);
            out << ",,,,,,,,\n";
            continue;
        }
        for (const auto &p : s.paths)
        {
            put_pose_csv(out, s.sample_id, s.ut_pose);
            out << ',' << (p.is_los ? 1 : 0) << ',' << format_double(p.power_db) << ',' << format_double(p.phase)
                << ',' << format_double(p.aod_az) << ',' << format_double(p.aod_el) << ','
                << format_double(p.aoa_dir.x()) << ',' << format_double(p.aoa_dir.y()) << ','
                << format_double(p.aoa_dir.z()) << '\n';
        }
    }
}

std::vector<RaySample> read_rays_csv(std::istream &in)
{
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line))
        throw std::runtime_error("line 1: missing header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != ray_csv_header)
        throw std::runtime_error("line 1: unexpected header (unknown or missing fields)");

    std::vector<RaySample> out;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        const std::string where = "line " + std::to_string(line_no);
        const auto f = split(line);
        if (f.size() != n_fields)
            throw std::runtime_error(where + ": expected " + std::to_string(n_fields) + " fields, got " +
                                     std::to_string(f.size()));

        std::uint64_t id = 0;
        if (!io::parse_int(f[0], id))
            throw std::runtime_error(where + ": malformed sample_id");
        double v[13];
        for (int k = 0; k < 6; ++k)
            if (!io::parse_double(f[1 + k], v[k]))
                throw std::runtime_error(where + ": malformed pose field " + std::to_string(k + 1));

        Pose pose;
        pose.position = Vec3(v[0], v[1], v[2]);
        pose.rotation = Rotation{v[3], v[4], v[5]};

        bool empty_record = true;
        for (std::size_t k = 7; k < n_fields; ++k)
            empty_record = empty_record && f[k].empty();

        if (out.empty() || out.back().sample_id != id)
        {
            RaySample s;
            s.sample_id = id;
            s.ut_pose = pose;
            out.push_back(std::move(s));
        }
        else if (empty_record)
            throw std::runtime_error(where + ": empty-sample marker inside a non-empty sample");
        else if (out.back().paths.empty())
            throw std::runtime_error(where + ": path record after an empty-sample marker");

        if (empty_record)
            continue;

        int los = 0;
        if (!io::parse_int(f[7], los) || (los != 0 && los != 1))
            throw std::runtime_error(where + ": is_los must be 0 or 1");
        for (int k = 0; k < 7; ++k)
            if (!io::parse_double(f[8 + k], v[6 + k]))
                throw std::runtime_error(where + ": malformed path field " + std::to_string(9 + k));

        Path p;
        p.is_los = (los == 1);
        p.power_db = v[6];
        p.phase = v[7];
        p.aod_az = v[8];
        p.aod_el = v[9];
        p.aoa_dir = Vec3(v[10], v[11], v[12]);
        check_unit(p.aoa_dir, where);
        out.back().paths.push_back(p);
    }
    return out;
}

void write_rays_binary(std::ostream &out, std::span<const RaySample> samples)
{
    out.write("BRAY1", 5);
    std::uint64_t records = 0;
    for (const auto &s : samples)
        records += s.paths.empty() ? 1 : s.paths.size();
    io::put<std::uint64_t>(out, records);

    auto put_pose = [&](const RaySample &s)
    {
        io::put<std::uint64_t>(out, s.sample_id);
        io::put<double>(out, s.ut_pose.position.x());
        io::put<double>(out, s.ut_pose.position.y());
        io::put<double>(out, s.ut_pose.position.z());
        io::put<double>(out, s.ut_pose.rotation.alpha);
        io::put<double>(out, s.ut_pose.rotation.beta);
        io::put<double>(out, s.ut_pose.rotation.gamma);
    };

    for (const auto &s : samples)
    {
        if (s.paths.empty())
        {
            put_pose(s);
            io::put<std::uint8_t>(out, kind_empty);
            for (int k = 0; k < 8; ++k)
                io::put<double>(out, 0.0);
            continue;
        }
        for (const auto &p : s.paths)
        {
            put_pose(s);
            io::put<std::uint8_t>(out, p.is_los ? kind_los : kind_nlos);
            for (double v : {p.power_db, p.phase, p.aod_az, p.aod_el, p.aoa_dir.x(), p.aoa_dir.y(), p.aoa_dir.z()})
                io::put<double>(out, v);
            io::put<double>(out, 0.0); // reserved
        }
    }
}

std::vector<RaySample> read_rays_binary(std::istream &in)
{
    io::expect_magic(in, "BRAY1");
    const auto records = io::get<std::uint64_t>(in);

    std::vector<RaySample> out;
    for (std::uint64_t r = 0; r < records; ++r)
    {
        const std::string where = "record " + std::to_string(r + 1);
        const auto id = io::get<std::uint64_t>(in);
        Pose pose;
        pose.position.x() = io::get<double>(in);
        pose.position.y() = io::get<double>(in);
        pose.position.z() = io::get<double>(in);
        pose.rotation.alpha = io::get<double>(in);
        pose.rotation.beta = io::get<double>(in);
        pose.rotation.gamma = io::get<double>(in);
        const auto kind = io::get<std::uint8_t>(in);
        double v[8];
        for (double &x : v)
            x = io::get<double>(in);

        if (kind > kind_empty)
            throw std::runtime_error(where + ": unknown record kind");

        if (out.empty() || out.back().sample_id != id)
        {
            RaySample s;
            s.sample_id = id;
            s.ut_pose = pose;
            out.push_back(std::move(s));
        }
        else if (kind == kind_empty || out.back().paths.empty())
            throw std::runtime_error(where + ": empty-sample marker mixed with path records");

        if (kind == kind_empty)
            continue;

        Path p;
        p.is_los = (kind == kind_los);
        p.power_db = v[0];
        p.phase = v[1];
        p.aod_az = v[2];
        p.aod_el = v[3];
        p.aoa_dir = Vec3(v[4], v[5], v[6]);
        check_unit(p.aoa_dir, where);
        out.back().paths.push_back(p);
    }
    return out;
}

std::vector<RaySample> ingest_rays(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("Cannot open ray dump '" + path + "'.");
    char magic[5] = {};
    in.read(magic, 5);
    const bool binary = in.gcount() == 5 && std::string_view(magic, 5) == "BRAY1";
    in.clear();
    in.seekg(0);
    return binary ? read_rays_binary(in) : read_rays_csv(in);
}

} // namespace beamsim
