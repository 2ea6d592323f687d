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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beamsim
{

std::string to_string(OrientationMode mode)
{
    return mode == OrientationMode::portrait ? "portrait" : "landscape";
}

OrientationMode orientation_mode_from_string(const std::string &name)
{
    if (name == "portrait")
        return OrientationMode::portrait;
    if (name == "landscape")
        return OrientationMode::landscape;
    throw std::invalid_argument("Unknown orientation mode '" + name + "'.");
}

Mat3 rotation_z(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << c, -s, 0.0,
        s, c, 0.0,
        0.0, 0.0, 1.0;
    return r;
}

Mat3 rotation_y(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << c, 0.0, s,
        0.0, 1.0, 0.0,
        -s, 0.0, c;
    return r;
}

Mat3 rotation_x(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << 1.0, 0.0, 0.0,
        0.0, c, -s,
        0.0, s, c;
    return r;
}

Mat3 rotation_matrix(const Rotation &rotation)
{
    // Closed form of Rz(alpha) * Ry(beta) * Rx(gamma)
    const double ca = std::cos(rotation.alpha), sa = std::sin(rotation.alpha);
    const double cb = std::cos(rotation.beta), sb = std::sin(rotation.beta);
    const double cg = std::cos(rotation.gamma), sg = std::sin(rotation.gamma);

    Mat3 r;
    r << ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg,
        sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg,
        -sb, cb * sg, cb * cg;
    return r;
}

double wrap_pi(double angle)
{
    double w = std::fmod(angle + pi, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    w -= pi;
    return w >= pi ? w - 2.0 * pi : w;
}

static double wrap_two_pi(double angle)
{
    double w = std::fmod(angle, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    return w >= 2.0 * pi ? 0.0 : w;
}

Rotation normalize(const Rotation &rotation)
{
    Rotation out = rotation;
    if (out.beta < -pi / 2.0 || out.beta > pi / 2.0)
    {
        // (alpha, beta, gamma) and (alpha + pi, pi - beta, gamma + pi) describe the same rotation
        double b = wrap_pi(out.beta);
        if (b > pi / 2.0)
            b = pi - b, out.alpha += pi, out.gamma += pi;
        else if (b < -pi / 2.0)
            b = -pi - b, out.alpha += pi, out.gamma += pi;
        out.beta = b;
    }
    out.alpha = wrap_pi(out.alpha);
    out.gamma = wrap_two_pi(out.gamma);
    return out;
}

Rotation sample_orientation(OrientationMode mode, Rng &rng)
{
    std::uniform_real_distribution<double> azimuth(-pi, pi);
    Rotation r;
    r.alpha = azimuth(rng);
    if (mode == OrientationMode::portrait)
    {
        std::uniform_real_distribution<double> tilt(0.0, std::nextafter(pi / 2.0, 4.0));
        r.gamma = tilt(rng);
    }
    else
    {
        std::uniform_real_distribution<double> tilt(-pi / 2.0, std::nextafter(0.0, 1.0));
        r.beta = std::min(tilt(rng), 0.0);
    }
    return r;
}

PanelLayout PanelLayout::from_axes(int nx, int ny, int nz, const Vec3 &boresight, const Vec3 &y_axis)
{
    PanelLayout p;
    p.nx = nx;
    p.ny = ny;
    p.nz = nz;
    p.boresight = boresight;
    p.local_axes.col(0) = boresight;
    p.local_axes.col(1) = y_axis;
    p.local_axes.col(2) = boresight.cross(y_axis);
    p.validate();
    return p;
}

void PanelLayout::validate() const
{
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("Panel grid sizes must be positive.");

    const double ortho_err = (local_axes * local_axes.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-12)
        throw std::invalid_argument("Panel local axes are not orthonormal.");
    if (std::abs(local_axes.determinant() - 1.0) > 1e-12)
        throw std::invalid_argument("Panel local axes are not a right-handed frame.");

    if (std::abs(boresight.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("Panel boresight must be a unit vector.");
    if ((boresight - local_axes.col(0)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("Panel boresight must coincide with the local x axis.");
}

int DeviceDesign::n_elements() const
{
    int n = 0;
    for (const auto &p : panels)
        n += p.n_elements();
    return n;
}

void DeviceDesign::validate() const
{
    if (panels.empty())
        throw std::invalid_argument("Device design '" + name + "' has no panels.");
    for (const auto &p : panels)
        p.validate();
}

DeviceDesign edge_design()
{
    DeviceDesign d;
    d.name = "edge";
    d.panels.push_back(PanelLayout::from_axes(1, 4, 1, Vec3::UnitX(), Vec3::UnitY()));   // P1 right edge
    d.panels.push_back(PanelLayout::from_axes(1, 4, 1, Vec3::UnitY(), -Vec3::UnitX()));  // P2 top edge
    d.panels.push_back(PanelLayout::from_axes(1, 4, 1, -Vec3::UnitX(), -Vec3::UnitY())); // P3 left edge
    return d;
}

DeviceDesign edge_face_design()
{
    DeviceDesign d = edge_design();
    d.name = "edge-face";
    d.panels.push_back(PanelLayout::from_axes(1, 2, 2, -Vec3::UnitZ(), Vec3::UnitX())); // P4 back
    d.panels.push_back(PanelLayout::from_axes(1, 2, 2, Vec3::UnitZ(), Vec3::UnitX()));  // P5 face
    return d;
}

DeviceDesign design_by_name(const std::string &name)
{
    if (name == "edge")
        return edge_design();
    if (name == "edge-face")
        return edge_face_design();
    throw std::invalid_argument("Unknown device design '" + name + "' (expected edge or edge-face).");
}

static Vec3 json_vec3(const nlohmann::json &j, const char *what)
{
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument(std::string("Design file: '") + what + "' must be a 3-vector.");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

DeviceDesign parse_design_json(const std::string &text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::invalid_argument(std::string("Design file: ") + e.what());
    }

    DeviceDesign d;
    d.name = doc.value("name", std::string("custom"));
    if (!doc.contains("panels") || !doc["panels"].is_array())
        throw std::invalid_argument("Design file: missing 'panels' array.");

    for (const auto &jp : doc["panels"])
    {
        PanelLayout p;
        const auto &grid = jp.at("grid");
        if (!grid.is_array() || grid.size() != 3)
            throw std::invalid_argument("Design file: 'grid' must have three entries.");
        p.nx = grid[0].get<int>();
        p.ny = grid[1].get<int>();
        p.nz = grid[2].get<int>();
        p.boresight = json_vec3(jp.at("boresight"), "boresight");
        const auto &axes = jp.at("axes");
        if (!axes.is_array() || axes.size() != 3)
            throw std::invalid_argument("Design file: 'axes' must hold three 3-vectors.");
        for (int c = 0; c < 3; ++c)
            p.local_axes.col(c) = json_vec3(axes[c], "axes");
        p.validate();
        d.panels.push_back(p);
    }
    d.validate();
    return d;
}

DeviceDesign load_design_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("Cannot open design file '" + path + "'.");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_design_json(ss.str());
}

Angles angles_of(const Vec3 &unit_dir)
{
    Angles a;
    a.zenith = std::acos(std::clamp(unit_dir.z(), -1.0, 1.0));
    // Adding +0 clears negative zeros, so the exact poles always report azimuth 0
    a.azimuth = std::atan2(unit_dir.y() + 0.0, unit_dir.x() + 0.0);
    if (a.azimuth >= pi)
        a.azimuth = -pi;
    return a;
}

Vec3 unit_vector(const Angles &angles)
{
    const double st = std::sin(angles.zenith);
    return Vec3(st * std::cos(angles.azimuth), st * std::sin(angles.azimuth), std::cos(angles.zenith));
}

Angles direction_to_panel_angles(const Vec3 &dir, const Mat3 &device_rotation, const PanelLayout &panel)
{
    if (std::abs(dir.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("non-unit direction");
    const Vec3 local = panel.local_axes.transpose() * (device_rotation.transpose() * dir);
    return angles_of(local);
}

Angles direction_to_panel_angles(const Vec3 &dir, const Pose &device_pose, const PanelLayout &panel)
{
    return direction_to_panel_angles(dir, rotation_matrix(device_pose.rotation), panel);
}

} // namespace beamsim
