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

#ifndef BEAMSIM_CHANNEL_HPP
#define BEAMSIM_CHANNEL_HPP

#include "beamsim/antenna.hpp"
#include "beamsim/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace beamsim
{

inline constexpr double speed_of_light = 299792458.0;

// Empty shoebox room with a wall-mounted AP
struct Scene
{
    Vec3 room = Vec3(7.0, 7.0, 3.0);           // extents in meters, room spans [0, room]
    Pose ap_pose;                              // boresight of the AP array is +x of the AP LCS
    PanelLayout ap_panel;                      // {1, 8, 8} UPA in the AP yz-plane
    double reflection_loss_db = 10.0;          // per bounce
    double carrier_hz = 60.0e9;
    int max_order = 2;                         // 0, 1 or 2
    bool random_phase = false;                 // uniform path phases instead of -2 pi d / lambda
    std::uint64_t phase_seed = 0;              // only used with random_phase

    double wavelength() const { return speed_of_light / carrier_hz; }
    bool contains(const Vec3 &point) const;
    void validate() const;

    // 7 x 7 x 3 m living room, AP centred on the x = 0 wall
    static Scene living_room();
};

// One multipath component
struct Path
{
    double power_db = 0.0;           // 10 log10(rho): path gain relative to the transmit power
    double phase = 0.0;              // [0, 2 pi)
    double aod_az = 0.0;             // azimuth of departure in the AP LCS
    double aod_el = 0.0;             // zenith angle of departure in the AP LCS
    Vec3 aoa_dir = Vec3::UnitX();    // direction towards the incoming wave, GCS, unit norm
    bool is_los = false;

    double rho() const;              // linear received power for unit transmit power

    bool operator==(const Path &other) const;
};

// Path with the geometry it was traced from
struct TracedPath
{
    Path path;
    double length = 0.0;
    std::array<int, 3> image_index{0, 0, 0}; // per-axis image lattice index
    int order = 0;
};

// Image-method tracer for an empty shoebox. Throws std::invalid_argument("pose out of bounds")
// when the UT or AP is not strictly inside the room.
std::vector<TracedPath> trace_images(const Scene &scene, const Pose &ut_pose);
std::vector<Path> trace_rays(const Scene &scene, const Pose &ut_pose);

// Drops the LOS component
std::vector<Path> suppress_los(std::vector<Path> paths);

// Free-space path loss 20 log10(4 pi d / lambda) in dB
double friis_loss_db(double distance_m, double carrier_hz);

// Per-panel channel matrices H^(p) of shape N_UT^(p) x N_AP
struct ChannelMatrix
{
    std::vector<CMat> panels;

    int n_panels() const { return int(panels.size()); }
};

ChannelMatrix assemble_channel(const std::vector<Path> &paths, const Scene &scene, const Pose &ut_pose,
                               const DeviceDesign &design, const ElementPattern &pattern);

// Transmit power and noise floor
struct LinkBudget
{
    double p_ap_dbm = 24.0;
    double sigma_n_dbm = -84.0;

    double p_ap_mw() const;
    double sigma2_mw() const;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Received signal strengths R(i, j) in mW for AP beam i and UT beam j
struct RssTable
{
    Eigen::MatrixXd values;          // N_AP x N_UT
    std::uint64_t noise_seed = 0;

    int n_ap() const { return int(values.rows()); }
    int n_ut() const { return int(values.cols()); }
};

// sqrt(P_AP) v_j^H H^(p(j)) u_i for every beam pair. Throws std::invalid_argument on a
// dimension mismatch between the codebooks and the channel.
CMat beam_pair_gains(const ChannelMatrix &h, const Codebook &ap_codebook, const Codebook &ut_codebook,
                     double p_ap_dbm);

// R(i, j) = |sqrt(P_AP) v_j^H H^(p) u_i s + v_j^H n|^2 with s = 1 and a fresh per-element noise
// vector n ~ CN(0, sigma_n^2 I) for each pair. noisy = false sets n = 0.
RssTable measure_rss(const ChannelMatrix &h, const Codebook &ap_codebook, const Codebook &ut_codebook,
                     const LinkBudget &budget, Rng &rng, bool noisy);

// |sqrt(R) + w|^2 with w ~ CN(0, sigma2). Because the combined noise is circularly symmetric this
// has the same law as measuring the pair with a unit-norm combiner.
Eigen::MatrixXd add_combined_noise(const Eigen::MatrixXd &noiseless_mw, double sigma2_mw, Rng &rng);

// SNR = R / sigma_n^2 (linear)
double snr_of(double rss_noiseless_mw, double sigma2_mw);

} // namespace beamsim

#endif
