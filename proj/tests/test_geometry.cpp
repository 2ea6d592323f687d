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

#include "beamsim/geometry.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace beamsim;
using Catch::Matchers::WithinAbs;

namespace
{

// Kolmogorov-Smirnov statistic of a sample against U[lo, hi]
double ks_uniform(std::vector<double> x, double lo, double hi)
{
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        const double f = (x[k] - lo) / (hi - lo);
        d = std::max({d, std::abs(f - double(k) / n), std::abs(double(k + 1) / n - f)});
    }
    return d;
}

Rotation random_rotation(Rng &rng)
{
    std::uniform_real_distribution<double> u(-2.0 * pi, 2.0 * pi);
    return {u(rng), u(rng), u(rng)};
}

Vec3 random_unit(Rng &rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    return Vec3(n(rng), n(rng), n(rng)).normalized();
}

} // namespace

TEST_CASE("Zero rotation is the identity", "[geometry]")
{
    CHECK((rotation_matrix({0.0, 0.0, 0.0}) - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Quarter turn about z maps x to y", "[geometry]")
{
    const Vec3 v = rotation_matrix({pi / 2.0, 0.0, 0.0}) * Vec3::UnitX();
    CHECK((v - Vec3::UnitY()).norm() < 1e-15);
}

TEST_CASE("Rotation matrix equals the product of single-axis rotations", "[geometry]")
{
    Rng rng(11);
    for (int k = 0; k < 1000; ++k)
    {
        const Rotation r = random_rotation(rng);
        const Mat3 oracle = rotation_z(r.alpha) * rotation_y(r.beta) * rotation_x(r.gamma);
        const Mat3 m = rotation_matrix(r);
        REQUIRE((m - oracle).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE((m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Normalization keeps the rotation and lands in the canonical ranges", "[geometry]")
{
    Rng rng(12);
    for (int k = 0; k < 1000; ++k)
    {
        const Rotation r = random_rotation(rng);
        const Rotation n = normalize(r);
        REQUIRE(n.alpha >= -pi);
        REQUIRE(n.alpha < pi);
        REQUIRE(n.beta >= -pi / 2.0);
        REQUIRE(n.beta <= pi / 2.0);
        REQUIRE(n.gamma >= 0.0);
        REQUIRE(n.gamma < 2.0 * pi);
        REQUIRE((rotation_matrix(n) - rotation_matrix(r)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Portrait and landscape draws pin the fixed angle", "[geometry]")
{
    Rng rng(13);
    const int n = 100000;
    std::vector<double> alpha, gamma, beta;
    for (int k = 0; k < n; ++k)
    {
        const Rotation p = sample_orientation(OrientationMode::portrait, rng);
        REQUIRE(p.beta == 0.0);
        REQUIRE(p.gamma >= 0.0);
        REQUIRE(p.gamma <= pi / 2.0);
        gamma.push_back(p.gamma);
        alpha.push_back(p.alpha);

        const Rotation l = sample_orientation(OrientationMode::landscape, rng);
        REQUIRE(l.gamma == 0.0);
        REQUIRE(l.beta >= -pi / 2.0);
        REQUIRE(l.beta <= 0.0);
        beta.push_back(l.beta);
    }

    double mean = 0.0;
    for (double g : gamma)
        mean += g / n;
    CHECK_THAT(mean, WithinAbs(pi / 4.0, 0.01));

    // 1 % critical value of the KS statistic
    const double critical = 1.628 / std::sqrt(double(n));
    CHECK(ks_uniform(gamma, 0.0, pi / 2.0) < critical);
    CHECK(ks_uniform(beta, -pi / 2.0, 0.0) < critical);
    CHECK(ks_uniform(alpha, -pi, pi) < critical);
}

TEST_CASE("Device designs have the expected element counts", "[geometry]")
{
    const DeviceDesign edge = edge_design();
    const DeviceDesign ef = edge_face_design();
    CHECK(edge.n_panels() == 3);
    CHECK(edge.n_elements() == 12);
    CHECK(ef.n_panels() == 5);
    CHECK(ef.n_elements() == 20);
    for (const auto &p : edge.panels)
        CHECK(p.n_elements() == 4);
    CHECK(ef.panels[3].n_elements() == 4);
    CHECK(ef.panels[4].n_elements() == 4);
    CHECK_NOTHROW(edge.validate());
    CHECK_NOTHROW(ef.validate());
    CHECK(design_by_name("edge").n_elements() == 12);
    CHECK_THROWS_AS(design_by_name("corner"), std::invalid_argument);
}

TEST_CASE("Panel boresights and grid orientation of the edge-face design", "[geometry]")
{
    const DeviceDesign ef = edge_face_design();
    const Vec3 expected[5] = {Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitX(), -Vec3::UnitZ(), Vec3::UnitZ()};
    for (int p = 0; p < 5; ++p)
        CHECK((ef.panels[std::size_t(p)].boresight - expected[p]).norm() < 1e-15);

    // Edge arrays run along the edge, face arrays lie in the screen plane
    CHECK(std::abs(ef.panels[0].local_axes.col(1).dot(Vec3::UnitY())) == 1.0);
    CHECK(std::abs(ef.panels[1].local_axes.col(1).dot(Vec3::UnitX())) == 1.0);
    CHECK(std::abs(ef.panels[4].local_axes.col(1).z()) < 1e-15);
    CHECK(std::abs(ef.panels[4].local_axes.col(2).z()) < 1e-15);
}

TEST_CASE("Panel layout validation rejects broken frames", "[geometry]")
{
    PanelLayout p;
    CHECK_NOTHROW(p.validate());
    p.nx = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.nx = 1;
    p.local_axes.col(2) *= -1.0; // left-handed
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.local_axes = Mat3::Identity() * 1.001;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.local_axes = Mat3::Identity();
    p.boresight = Vec3::UnitY();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("Boresight arrival gives phi = 0 and theta = pi / 2", "[geometry]")
{
    const DeviceDesign ef = edge_face_design();
    Pose pose;
    for (const auto &panel : ef.panels)
    {
        const Angles a = direction_to_panel_angles(panel.boresight, pose, panel);
        CHECK_THAT(a.azimuth, WithinAbs(0.0, 1e-12));
        CHECK_THAT(a.zenith, WithinAbs(pi / 2.0, 1e-12));
    }
}

TEST_CASE("Global +z is the local zenith of a panel with identity axes", "[geometry]")
{
    PanelLayout flat;
    flat.nx = 2;
    flat.ny = 2;
    const Angles a = direction_to_panel_angles(Vec3::UnitZ(), Pose{}, flat);
    CHECK_THAT(a.zenith, WithinAbs(0.0, 1e-12));
}

TEST_CASE("Panel angles round-trip through the unit vector", "[geometry]")
{
    Rng rng(14);
    const DeviceDesign ef = edge_face_design();
    for (int k = 0; k < 1000; ++k)
    {
        Pose pose;
        pose.rotation = random_rotation(rng);
        const auto &panel = ef.panels[std::size_t(k % 5)];
        const Vec3 dir = random_unit(rng);
        const Angles a = direction_to_panel_angles(dir, pose, panel);
        REQUIRE(a.azimuth >= -pi);
        REQUIRE(a.azimuth < pi);
        REQUIRE(a.zenith >= 0.0);
        REQUIRE(a.zenith <= pi);

        // back to the GCS and through the map again
        const Mat3 r = rotation_matrix(pose.rotation);
        const Vec3 back = r * panel.local_axes * unit_vector(a);
        REQUIRE((back - dir).norm() < 1e-9);
        const Angles b = direction_to_panel_angles(back.normalized(), pose, panel);
        REQUIRE(std::abs(wrap_pi(b.azimuth - a.azimuth)) < 1e-9);
        REQUIRE(std::abs(b.zenith - a.zenith) < 1e-9);
    }
}

TEST_CASE("Non-unit directions are rejected", "[geometry]")
{
    CHECK_THROWS_WITH(direction_to_panel_angles(Vec3(1.0, 1.0, 0.0), Pose{}, PanelLayout{}), "non-unit direction");
}

TEST_CASE("Custom designs load from JSON", "[geometry]")
{
    const std::string text = R"({"name": "slab", "panels": [
        {"grid": [1, 2, 1], "boresight": [0, 0, 1], "axes": [[0, 0, 1], [1, 0, 0], [0, 1, 0]]}]})";
    const DeviceDesign d = parse_design_json(text);
    CHECK(d.name == "slab");
    CHECK(d.n_elements() == 2);
    CHECK_THROWS_AS(parse_design_json(R"({"panels": [{"grid": [1, 1, 1], "boresight": [1, 0, 0],
        "axes": [[1, 0, 0], [0, 0, 1], [0, 1, 0]]}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_design_json("{"), std::invalid_argument);
}
