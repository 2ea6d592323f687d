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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

using namespace beamsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// Reflect a point across the plane x_axis = value
Vec3 mirror(const Vec3 &p, int axis, double value)
{
    Vec3 q = p;
    q[axis] = 2.0 * value - p[axis];
    return q;
}

// Distinct source images from every wall sequence of length <= order without immediate repeats
std::set<std::array<long, 3>> brute_force_images(const Scene &scene, int order)
{
    struct Wall
    {
        int axis;
        double value;
    };
    std::vector<Wall> walls;
    for (int a = 0; a < 3; ++a)
    {
        walls.push_back({a, 0.0});
        walls.push_back({a, scene.room[a]});
    }
    auto key = [](const Vec3 &v)
    {
        return std::array<long, 3>{std::lround(v.x() * 1e6), std::lround(v.y() * 1e6), std::lround(v.z() * 1e6)};
    };

    std::set<std::array<long, 3>> images;
    std::vector<std::pair<Vec3, int>> frontier{{scene.ap_pose.position, -1}};
    images.insert(key(scene.ap_pose.position));
    for (int k = 0; k < order; ++k)
    {
        std::vector<std::pair<Vec3, int>> next;
        for (const auto &[p, last] : frontier)
            for (int w = 0; w < int(walls.size()); ++w)
            {
                if (w == last)
                    continue;
                const Vec3 q = mirror(p, walls[w].axis, walls[w].value);
                images.insert(key(q));
                next.emplace_back(q, w);
            }
        frontier = std::move(next);
    }
    return images;
}

Pose random_pose(Rng &rng, const Scene &scene)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Pose pose;
    pose.position = Vec3(0.5 + 6.0 * u(rng), 0.5 + 6.0 * u(rng), 0.8 + 0.7 * u(rng));
    pose.rotation = sample_orientation(u(rng) < 0.5 ? OrientationMode::portrait : OrientationMode::landscape, rng);
    (void)scene;
    return pose;
}

} // namespace

TEST_CASE("Friis loss at 1 m and 60 GHz", "[channel]")
{
    CHECK_THAT(friis_loss_db(1.0, 60.0e9), WithinAbs(68.0, 0.05));
    CHECK_THAT(friis_loss_db(2.0, 60.0e9) - friis_loss_db(1.0, 60.0e9), WithinAbs(20.0 * std::log10(2.0), 1e-12));
}

TEST_CASE("Image counts per reflection order", "[channel]")
{
    Scene scene = Scene::living_room();
    Pose pose;
    pose.position = Vec3(4.2, 2.3, 1.1);
    const std::size_t expected[] = {1, 7, 25};
    for (int order = 0; order <= 2; ++order)
    {
        scene.max_order = order;
        const auto traced = trace_images(scene, pose);
        CHECK(traced.size() == expected[order]);

        // Each traced path unfolds to one image of the AP; the set must match the wall-sequence enumeration
        std::set<std::array<long, 3>> images;
        for (const auto &tp : traced)
        {
            const Vec3 img = pose.position + tp.length * tp.path.aoa_dir;
            images.insert({std::lround(img.x() * 1e6), std::lround(img.y() * 1e6), std::lround(img.z() * 1e6)});
        }
        CHECK(images.size() == traced.size());
        CHECK(images == brute_force_images(scene, order));
    }
}

TEST_CASE("Path power, phase and angles", "[channel]")
{
    const Scene scene = Scene::living_room();
    Rng rng(31);
    for (int k = 0; k < 50; ++k)
    {
        const Pose pose = random_pose(rng, scene);
        const auto traced = trace_images(scene, pose);
        REQUIRE(std::count_if(traced.begin(), traced.end(), [](const TracedPath &t) { return t.path.is_los; }) == 1);
        for (const auto &tp : traced)
        {
            const Path &p = tp.path;
            REQUIRE_THAT(p.power_db,
                         WithinAbs(-friis_loss_db(tp.length, scene.carrier_hz) - 10.0 * tp.order, 1e-9));
            REQUIRE(p.phase >= 0.0);
            REQUIRE(p.phase < 2.0 * pi);
            const double expected_phase = std::fmod(-2.0 * pi * tp.length / scene.wavelength(), 2.0 * pi);
            const double diff = std::remainder(p.phase - expected_phase, 2.0 * pi);
            REQUIRE(std::abs(diff) < 1e-6);
            REQUIRE_THAT(p.aoa_dir.norm(), WithinAbs(1.0, 1e-12));
            if (p.is_los)
            {
                const Vec3 dep = (pose.position - scene.ap_pose.position).normalized();
                REQUIRE((unit_vector({p.aod_az, p.aod_el}) - dep).norm() < 1e-12);
                REQUIRE((p.aoa_dir + dep).norm() < 1e-12);
                REQUIRE_THAT(tp.length, WithinAbs((pose.position - scene.ap_pose.position).norm(), 1e-12));
            }
        }
    }
}

TEST_CASE("Single-bounce departure mirrors the arrival", "[channel]")
{
    Scene scene = Scene::living_room();
    scene.max_order = 1;
    Pose pose;
    pose.position = Vec3(3.0, 5.0, 1.2);
    for (const auto &tp : trace_images(scene, pose))
    {
        if (tp.order != 1)
            continue;
        const Vec3 dep = unit_vector({tp.path.aod_az, tp.path.aod_el});
        Vec3 arrival_travel = -tp.path.aoa_dir;
        for (int a = 0; a < 3; ++a)
            if (tp.image_index[a] != 0)
                arrival_travel[a] = -arrival_travel[a];
        REQUIRE((dep - arrival_travel).norm() < 1e-12);
    }
}

TEST_CASE("Tracing rejects poses outside the room", "[channel]")
{
    const Scene scene = Scene::living_room();
    Pose pose;
    pose.position = Vec3(8.0, 1.0, 1.0);
    CHECK_THROWS_WITH(trace_rays(scene, pose), "pose out of bounds");
    Scene bad = scene;
    bad.max_order = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("Tracing is deterministic", "[channel]")
{
    const Scene scene = Scene::living_room();
    Rng rng(32);
    const Pose pose = random_pose(rng, scene);
    CHECK(trace_rays(scene, pose) == trace_rays(scene, pose));

    Scene random_scene = scene;
    random_scene.random_phase = true;
    random_scene.phase_seed = 5;
    const auto a = trace_rays(random_scene, pose);
    CHECK(a == trace_rays(random_scene, pose));
    for (const auto &p : a)
    {
        CHECK(p.phase >= 0.0);
        CHECK(p.phase < 2.0 * pi);
    }
}

TEST_CASE("Single-path channel norm", "[channel]")
{
    const Scene scene = Scene::living_room();
    const DeviceDesign design = edge_face_design();
    const ElementPattern pat;
    Rng rng(33);
    for (int k = 0; k < 50; ++k)
    {
        const Pose pose = random_pose(rng, scene);
        auto paths = trace_rays(scene, pose);
        const Path los = paths.front();
        REQUIRE(los.is_los);
        const ChannelMatrix h = assemble_channel({los}, scene, pose, design, pat);
        const Mat3 r = rotation_matrix(pose.rotation);
        const Angles ap = direction_to_panel_angles(unit_vector({los.aod_az, los.aod_el}), Mat3::Identity(),
                                                    scene.ap_panel);
        const double g_ap = element_gain(pat, ap.azimuth, ap.zenith);
        for (int p = 0; p < design.n_panels(); ++p)
        {
            const Angles ut = direction_to_panel_angles(los.aoa_dir, r, design.panels[p]);
            const double g_ut = element_gain(pat, ut.azimuth, ut.zenith);
            REQUIRE_THAT(h.panels[p].squaredNorm(), WithinRel(los.rho() * g_ut * g_ut * g_ap * g_ap, 1e-10));
        }
    }
}

TEST_CASE("Parseval identity over unitary codebooks", "[channel]")
{
    const Scene scene = Scene::living_room();
    const DeviceDesign design = edge_face_design();
    const ElementPattern pat;
    const Codebook ap_cb = dft_codebook(scene.ap_panel);
    const Codebook ut_cb = device_codebook(design);
    const LinkBudget budget;
    Rng rng(34);
    for (int k = 0; k < 100; ++k)
    {
        const Pose pose = random_pose(rng, scene);
        const ChannelMatrix h = assemble_channel(trace_rays(scene, pose), scene, pose, design, pat);
        const RssTable t = measure_rss(h, ap_cb, ut_cb, budget, rng, false);
        REQUIRE(t.n_ap() == 64);
        REQUIRE(t.n_ut() == 20);
        for (int i = 0; i < 64; ++i)
            for (int p = 0; p < design.n_panels(); ++p)
            {
                double sum = 0.0;
                for (int j = ut_cb.first_beam(p); j < ut_cb.first_beam(p) + ut_cb.panel_size(p); ++j)
                    sum += t.values(i, j);
                const double expected = budget.p_ap_mw() * (h.panels[p] * ap_cb.beam(i)).squaredNorm();
                REQUIRE_THAT(sum, WithinRel(expected, 1e-9));
            }
    }
}

TEST_CASE("Noiseless RSS ignores a global phase", "[channel]")
{
    const Scene scene = Scene::living_room();
    const DeviceDesign design = edge_design();
    Rng rng(35);
    const Pose pose = random_pose(rng, scene);
    auto paths = trace_rays(scene, pose);
    const ChannelMatrix h = assemble_channel(paths, scene, pose, design, ElementPattern{});
    ChannelMatrix rotated = h;
    for (auto &m : rotated.panels)
        m *= std::polar(1.0, 1.234);
    const Codebook ap_cb = dft_codebook(scene.ap_panel);
    const Codebook ut_cb = device_codebook(design);
    const RssTable a = measure_rss(h, ap_cb, ut_cb, LinkBudget{}, rng, false);
    const RssTable b = measure_rss(rotated, ap_cb, ut_cb, LinkBudget{}, rng, false);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-12 * a.values.maxCoeff());
}

TEST_CASE("Coherent gain for an on-grid single path", "[channel]")
{
    // A path that hits DFT grid points at both ends: brute force over all 64 x 20 pairs
    const Scene scene = Scene::living_room();
    const DeviceDesign design = edge_face_design();
    const ElementPattern pat;
    const LinkBudget budget;
    Pose pose;
    pose.position = Vec3(3.0, 3.0, 1.0);

    Path p;
    p.power_db = -70.0;
    p.phase = 0.7;
    const Vec3 dep(std::sqrt(1.0 - 0.25 * 0.25 - 0.5 * 0.5), 0.25, 0.5);
    const Angles aod = angles_of(dep);
    p.aod_az = aod.azimuth;
    p.aod_el = aod.zenith;
    p.aoa_dir = Vec3(std::sqrt(0.75), 0.5, 0.0);

    const ChannelMatrix h = assemble_channel({p}, scene, pose, design, pat);
    const Codebook ap_cb = dft_codebook(scene.ap_panel);
    const Codebook ut_cb = device_codebook(design);
    Rng rng(36);
    const RssTable t = measure_rss(h, ap_cb, ut_cb, budget, rng, false);

    const Angles ap = direction_to_panel_angles(dep, Mat3::Identity(), scene.ap_panel);
    const Angles ut = direction_to_panel_angles(p.aoa_dir, Mat3::Identity(), design.panels[0]);
    const double g_ap = element_gain(pat, ap.azimuth, ap.zenith);
    const double g_ut = element_gain(pat, ut.azimuth, ut.zenith);
    const double r_max = budget.p_ap_mw() * p.rho() * g_ut * g_ut * g_ap * g_ap;

    Eigen::Index bi = 0, bj = 0;
    const double best = t.values.maxCoeff(&bi, &bj);
    CHECK_THAT(best, WithinRel(r_max, 1e-9));
    CHECK(ut_cb.panel_of(int(bj)) == 0);
    int near_max = 0;
    for (Eigen::Index i = 0; i < t.values.rows(); ++i)
        for (Eigen::Index j = 0; j < t.values.cols(); ++j)
            if (ut_cb.panel_of(int(j)) == 0 && t.values(i, j) > 1e-9 * r_max)
                ++near_max;
    // On-grid at both ends: exactly one pair on the panel collects the energy
    CHECK(near_max == 1);
}

TEST_CASE("Zero channel tables", "[channel]")
{
    const DeviceDesign design = edge_design();
    ChannelMatrix h;
    for (const auto &panel : design.panels)
        h.panels.push_back(CMat::Zero(panel.n_elements(), 64));
    PanelLayout ap;
    ap.ny = 8;
    ap.nz = 8;
    const Codebook ap_cb = dft_codebook(ap);
    const Codebook ut_cb = device_codebook(design);
    const LinkBudget budget;
    Rng rng(37);
    CHECK(measure_rss(h, ap_cb, ut_cb, budget, rng, false).values.cwiseAbs().maxCoeff() == 0.0);

    double sum = 0.0;
    int count = 0;
    while (count < 10000)
    {
        const RssTable t = measure_rss(h, ap_cb, ut_cb, budget, rng, true);
        sum += t.values.sum();
        count += int(t.values.size());
    }
    CHECK_THAT(sum / count, WithinRel(budget.sigma2_mw(), 0.03));

    const Eigen::MatrixXd noise = add_combined_noise(Eigen::MatrixXd::Zero(100, 100), budget.sigma2_mw(), rng);
    CHECK_THAT(noise.mean(), WithinRel(budget.sigma2_mw(), 0.03));
}

TEST_CASE("Combined noise is reproducible from its seed", "[channel]")
{
    const Eigen::MatrixXd r = Eigen::MatrixXd::Constant(4, 5, 1e-6);
    Rng a(derive_seed(9, {1, 2})), b(derive_seed(9, {1, 2}));
    CHECK(add_combined_noise(r, 1e-9, a) == add_combined_noise(r, 1e-9, b));
    CHECK(derive_seed(9, {1, 2}) != derive_seed(9, {2, 1}));
}

TEST_CASE("Beam-pair gains superpose over the LOS and NLOS paths", "[channel]")
{
    const Scene scene = Scene::living_room();
    const DeviceDesign design = edge_face_design();
    const ElementPattern pat;
    const Codebook ap_cb = dft_codebook(scene.ap_panel);
    const Codebook ut_cb = device_codebook(design);
    Rng rng(38);
    for (int k = 0; k < 100; ++k)
    {
        const Pose pose = random_pose(rng, scene);
        const auto paths = trace_rays(scene, pose);
        const auto nlos = suppress_los(paths);
        REQUIRE(nlos.size() + 1 == paths.size());
        const CMat g_all = beam_pair_gains(assemble_channel(paths, scene, pose, design, pat), ap_cb, ut_cb, 24.0);
        const CMat g_nlos = beam_pair_gains(assemble_channel(nlos, scene, pose, design, pat), ap_cb, ut_cb, 24.0);
        const std::vector<Path> los(paths.begin(), paths.begin() + 1);
        REQUIRE(los.front().is_los);
        const CMat g_los = beam_pair_gains(assemble_channel(los, scene, pose, design, pat), ap_cb, ut_cb, 24.0);
        REQUIRE((g_all - g_nlos - g_los).cwiseAbs().maxCoeff() <= 1e-12 * g_all.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("SNR and unit conversions", "[channel]")
{
    CHECK_THAT(dbm_to_mw(24.0), WithinRel(251.18864315095797, 1e-12));
    CHECK_THAT(mw_to_dbm(dbm_to_mw(-84.0)), WithinAbs(-84.0, 1e-12));
    CHECK_THAT(snr_of(1e-6, 1e-9), WithinRel(1000.0, 1e-12));
    CHECK_THROWS_AS(snr_of(-1.0, 1e-9), std::invalid_argument);
}
