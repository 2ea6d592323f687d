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

#include "beamsim/channel.hpp"
#include "beamsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamsim
{

bool Scene::contains(const Vec3 &point) const
{
    for (int a = 0; a < 3; ++a)
        if (!(point[a] > 0.0 && point[a] < room[a]))
            return false;
    return true;
}

void Scene::validate() const
{
    if (!(room.minCoeff() > 0.0))
        throw std::invalid_argument("Room extents must be positive.");
    if (max_order < 0 || max_order > 2)
        throw std::invalid_argument("Reflection order must be 0, 1 or 2.");
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("Carrier frequency must be positive.");
    if (!(reflection_loss_db >= 0.0))
        throw std::invalid_argument("Reflection loss must be non-negative.");
    ap_panel.validate();
}

Scene Scene::living_room()
{
    Scene s;
    // The array sits 10 cm in front of the wall so the x = 0 wall image is a distinct path
    s.ap_pose.position = Vec3(0.1, 3.5, 2.0);
    s.ap_panel.nx = 1;
    s.ap_panel.ny = 8;
    s.ap_panel.nz = 8;
    return s;
}

double Path::rho() const
{
    return std::pow(10.0, power_db / 10.0);
}

bool Path::operator==(const Path &other) const
{
    return power_db == other.power_db && phase == other.phase && aod_az == other.aod_az &&
           aod_el == other.aod_el && aoa_dir == other.aoa_dir && is_los == other.is_los;
}

double friis_loss_db(double distance_m, double carrier_hz)
{
    const double lambda = speed_of_light / carrier_hz;
    return 20.0 * std::log10(4.0 * pi * distance_m / lambda);
}

// Coordinate of image n of a point at s on the segment [0, L]. Odd n are mirrored.
static double image_coordinate(int n, double s, double length)
{
    return (n % 2 == 0) ? n * length + s : (n + 1) * length - s;
}

static double wrap_phase(double phase)
{
    double w = std::fmod(phase, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    return w >= 2.0 * pi ? 0.0 : w;
}

std::vector<TracedPath> trace_images(const Scene &scene, const Pose &ut_pose)
{
    scene.validate();
    const Vec3 &src = scene.ap_pose.position;
    const Vec3 &rx = ut_pose.position;
    if (!scene.contains(rx) || !scene.contains(src))
        throw std::invalid_argument("pose out of bounds");
    if ((src - rx).norm() < 1e-9)
        throw std::invalid_argument("UT coincides with the AP.");

    const double lambda = scene.wavelength();
    const Mat3 ap_rot_t = rotation_matrix(scene.ap_pose.rotation).transpose();
    const int order_max = scene.max_order;

    std::vector<TracedPath> out;
    for (int order = 0; order <= order_max; ++order)
        for (int nx = -order; nx <= order; ++nx)
            for (int ny = -order; ny <= order; ++ny)
                for (int nz = -order; nz <= order; ++nz)
                {
                    const std::array<int, 3> n{nx, ny, nz};
                    if (std::abs(nx) + std::abs(ny) + std::abs(nz) != order)
                        continue;

                    Vec3 image, arrival_travel, departure_travel;
                    for (int a = 0; a < 3; ++a)
                    {
                        image[a] = image_coordinate(n[a], src[a], scene.room[a]);
                        arrival_travel[a] = rx[a] - image[a];
                        // Each bounce on a wall of this axis flips the travel direction
                        departure_travel[a] = (n[a] % 2 == 0) ? arrival_travel[a] : -arrival_travel[a];
                    }
                    const double d = arrival_travel.norm();

                    TracedPath tp;
                    tp.length = d;
                    tp.image_index = n;
                    tp.order = order;

                    Path &p = tp.path;
                    p.is_los = (order == 0);
                    p.power_db = -friis_loss_db(d, scene.carrier_hz) - order * scene.reflection_loss_db;
                    if (scene.random_phase)
                    {
                        Rng rng(derive_seed(scene.phase_seed, {bits_of(rx.x()), bits_of(rx.y()), bits_of(rx.z()),
                                                               std::uint64_t(nx + 8), std::uint64_t(ny + 8),
                                                               std::uint64_t(nz + 8)}));
                        p.phase = std::uniform_real_distribution<double>(0.0, 2.0 * pi)(rng);
                    }
                    else
                    {
                        p.phase = wrap_phase(-2.0 * pi * d / lambda);
                    }
                    p.aoa_dir = -arrival_travel / d;

                    const Angles aod = angles_of((ap_rot_t * departure_travel / d).normalized());
                    p.aod_az = aod.azimuth;
                    p.aod_el = aod.zenith;
                    out.push_back(tp);
                }
    return out;
}

std::vector<Path> trace_rays(const Scene &scene, const Pose &ut_pose)
{
    std::vector<Path> out;
    for (const auto &tp : trace_images(scene, ut_pose))
        out.push_back(tp.path);
    return out;
}

std::vector<Path> suppress_los(std::vector<Path> paths)
{
    paths.erase(std::remove_if(paths.begin(), paths.end(), [](const Path &p)
                               { return p.is_los; }),
                paths.end());
    return paths;
}

ChannelMatrix assemble_channel(const std::vector<Path> &paths, const Scene &scene, const Pose &ut_pose,
                               const DeviceDesign &design, const ElementPattern &pattern)
{
    const int n_ap = scene.ap_panel.n_elements();
    const Mat3 ut_rot = rotation_matrix(ut_pose.rotation);

    ChannelMatrix h;
    for (const auto &panel : design.panels)
        h.panels.push_back(CMat::Zero(panel.n_elements(), n_ap));

    for (const auto &path : paths)
    {
        // AoD angles are given in the AP LCS; the AP panel frame may be rotated within it
        const Vec3 dep_lcs = unit_vector({path.aod_az, path.aod_el});
        const Angles ap_angles = direction_to_panel_angles(dep_lcs.normalized(), Mat3::Identity(), scene.ap_panel);
        const CVec a_ap = array_response(scene.ap_panel, pattern, ap_angles.azimuth, ap_angles.zenith);
        const cdouble coeff = std::polar(std::sqrt(path.rho()), path.phase);

        for (int p = 0; p < design.n_panels(); ++p)
        {
            const Angles ut_angles = direction_to_panel_angles(path.aoa_dir, ut_rot, design.panels[p]);
            const CVec a_ut = array_response(design.panels[p], pattern, ut_angles.azimuth, ut_angles.zenith);
            h.panels[p].noalias() += (coeff * a_ut) * a_ap.adjoint();
        }
    }
    return h;
}

double dbm_to_mw(double dbm)
{
    return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw)
{
    return 10.0 * std::log10(mw);
}

double LinkBudget::p_ap_mw() const
{
    return dbm_to_mw(p_ap_dbm);
}

double LinkBudget::sigma2_mw() const
{
    return dbm_to_mw(sigma_n_dbm);
}

CMat beam_pair_gains(const ChannelMatrix &h, const Codebook &ap_codebook, const Codebook &ut_codebook,
                     double p_ap_dbm)
{
    if (ap_codebook.n_panels() != 1)
        throw std::invalid_argument("AP codebook must describe a single array.");
    if (ut_codebook.n_panels() != h.n_panels())
        throw std::invalid_argument("UT codebook and channel disagree on the number of panels.");

    const CMat &u = ap_codebook.panel_weights(0);
    const double amp = std::sqrt(dbm_to_mw(p_ap_dbm));

    CMat g(ap_codebook.size(), ut_codebook.size());
    for (int p = 0; p < h.n_panels(); ++p)
    {
        const CMat &v = ut_codebook.panel_weights(p);
        if (h.panels[p].cols() != u.rows() || h.panels[p].rows() != v.rows())
            throw std::invalid_argument("Codebook dimensions do not match the channel matrix.");
        // (N_p beams x N_AP beams) block, transposed into the (i, j) layout
        const CMat block = v.adjoint() * (h.panels[p] * u);
        g.middleCols(ut_codebook.first_beam(p), v.cols()) = amp * block.transpose();
    }
    return g;
}

RssTable measure_rss(const ChannelMatrix &h, const Codebook &ap_codebook, const Codebook &ut_codebook,
                     const LinkBudget &budget, Rng &rng, bool noisy)
{
    const CMat g = beam_pair_gains(h, ap_codebook, ut_codebook, budget.p_ap_dbm);

    RssTable t;
    t.values.resize(g.rows(), g.cols());
    if (!noisy)
    {
        t.values = g.cwiseAbs2();
        return t;
    }

    // Per-element noise: real and imaginary parts each carry half the variance
    std::normal_distribution<double> normal(0.0, std::sqrt(budget.sigma2_mw() / 2.0));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
    {
        const CVec v = ut_codebook.beam(int(j));
        for (Eigen::Index i = 0; i < g.rows(); ++i)
        {
            cdouble combined = 0.0;
            for (Eigen::Index k = 0; k < v.size(); ++k)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                combined += std::conj(v[k]) * cdouble(re, im);
            }
            t.values(i, j) = std::norm(g(i, j) + combined);
        }
    }
    return t;
}

Eigen::MatrixXd add_combined_noise(const Eigen::MatrixXd &noiseless_mw, double sigma2_mw, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(sigma2_mw / 2.0));
    Eigen::MatrixXd out(noiseless_mw.rows(), noiseless_mw.cols());
    // Column-major walk keeps the draw order fixed for a given table shape
    for (Eigen::Index j = 0; j < noiseless_mw.cols(); ++j)
        for (Eigen::Index i = 0; i < noiseless_mw.rows(); ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            out(i, j) = std::norm(cdouble(std::sqrt(noiseless_mw(i, j)) + re, im));
        }
    return out;
}

double snr_of(double rss_noiseless_mw, double sigma2_mw)
{
    if (rss_noiseless_mw < 0.0)
        throw std::invalid_argument("RSS must be non-negative.");
    return rss_noiseless_mw / sigma2_mw;
}

} // namespace beamsim
