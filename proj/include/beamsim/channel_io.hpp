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

#ifndef BEAMSIM_CHANNEL_IO_HPP
#define BEAMSIM_CHANNEL_IO_HPP

#include "beamsim/channel.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace beamsim
{

// All paths of one UT pose
struct RaySample
{
    std::uint64_t sample_id = 0;
    Pose ut_pose;
    std::vector<Path> paths;
};

// Ray dump, one record per path.
//
// CSV: fixed header
//   sample_id,ut_x,ut_y,ut_z,ut_alpha,ut_beta,ut_gamma,is_los,power_dbm,phase_rad,aod_az,aod_el,aoa_x,aoa_y,aoa_z
// power_dbm is 10 log10(rho), i.e. the received power for a 0 dBm transmitter. A sample without
// paths is written as a single record whose path fields (is_los onwards) are empty. Records of
// one sample are contiguous. Doubles use the shortest round-trip representation.
//
// Binary: magic "BRAY1", u64 record count, then per record (little endian)
//   u64 sample_id, 6 x f64 pose, u8 kind (0 NLOS path, 1 LOS path, 2 empty sample), 8 x f64 path fields
inline constexpr const char *ray_csv_header =
    "sample_id,ut_x,ut_y,ut_z,ut_alpha,ut_beta,ut_gamma,is_los,power_dbm,phase_rad,aod_az,aod_el,aoa_x,aoa_y,aoa_z";

void write_rays_csv(std::ostream &out, std::span<const RaySample> samples);
void write_rays_binary(std::ostream &out, std::span<const RaySample> samples);

// Throws std::runtime_error with the offending line (CSV) or record (binary) number
std::vector<RaySample> read_rays_csv(std::istream &in);
std::vector<RaySample> read_rays_binary(std::istream &in);

// Reads a ray dump file, selecting the format from its first bytes
std::vector<RaySample> ingest_rays(const std::string &path);

} // namespace beamsim

#endif
