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

#ifndef BEAMSIM_GEOMETRY_HPP
#define BEAMSIM_GEOMETRY_HPP

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

namespace beamsim
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rng = std::mt19937_64;

inline constexpr double pi = 3.14159265358979323846;

// Intrinsic z-y-x rotation angles in radians.
// After normalize(): alpha in [-pi, pi), beta in [-pi/2, pi/2], gamma in [0, 2pi).
struct Rotation
{
    double alpha = 0.0; // about z
    double beta = 0.0;  // about y'
    double gamma = 0.0; // about x''

    bool operator==(const Rotation &) const = default;
};

// Position (meters, GCS) and orientation of an AP or UT
struct Pose
{
    Vec3 position = Vec3::Zero();
    Rotation rotation;
};

enum class OrientationMode
{
    portrait,
    landscape
};

std::string to_string(OrientationMode mode);
OrientationMode orientation_mode_from_string(const std::string &name);

// Single-axis rotation matrices
Mat3 rotation_z(double angle);
Mat3 rotation_y(double angle);
Mat3 rotation_x(double angle);

// R = Rz(alpha) * Ry(beta) * Rx(gamma). Columns are the LCS axes expressed in the GCS.
Mat3 rotation_matrix(const Rotation &rotation);

// Maps an arbitrary angle triple onto the canonical ranges without changing rotation_matrix().
Rotation normalize(const Rotation &rotation);

// Portrait: beta = 0, alpha ~ U[-pi, pi), gamma ~ U[0, pi/2].
// Landscape: gamma = 0, alpha ~ U[-pi, pi), beta ~ U[-pi/2, 0].
Rotation sample_orientation(OrientationMode mode, Rng &rng);

// One antenna panel of a device. The panel frame is given by local_axes, whose columns are
// the panel-local x, y and z axes expressed in the device LCS. Array phases are computed along
// the panel axes and the element pattern peaks along the local x axis, so the boresight always
// coincides with the first column of local_axes.
struct PanelLayout
{
    int nx = 1, ny = 1, nz = 1;
    Vec3 boresight = Vec3::UnitX();
    Mat3 local_axes = Mat3::Identity();

    int n_elements() const { return nx * ny * nz; }

    // Builds a layout from its boresight and panel y axis; z completes the right-handed frame
    static PanelLayout from_axes(int nx, int ny, int nz, const Vec3 &boresight, const Vec3 &y_axis);

    // Throws std::invalid_argument when an invariant is broken
    void validate() const;
};

struct DeviceDesign
{
    std::string name;
    std::vector<PanelLayout> panels;

    int n_panels() const { return int(panels.size()); }
    int n_elements() const;
    void validate() const;
};

// Three 4-element ULAs on the right, top and left edges of the handset.
DeviceDesign edge_design();

// Edge design plus 2x2 UPAs on the back (P4) and the screen side (P5).
DeviceDesign edge_face_design();

// "edge" or "edge-face"
DeviceDesign design_by_name(const std::string &name);

// JSON layout: {"name": ..., "panels": [{"grid": [nx,ny,nz], "boresight": [x,y,z],
//                                        "axes": [[x-axis], [y-axis], [z-axis]]}, ...]}
DeviceDesign load_design_file(const std::string &path);
DeviceDesign parse_design_json(const std::string &text);

// Azimuth in [-pi, pi) and zenith in [0, pi] of a unit vector
struct Angles
{
    double azimuth = 0.0;
    double zenith = 0.0;
};

Angles angles_of(const Vec3 &unit_dir);
Vec3 unit_vector(const Angles &angles);

// Angles of a GCS direction in the panel frame: d_local = local_axes^T R(pose)^T dir.
// Throws std::invalid_argument("non-unit direction") unless |dir| = 1 within 1e-9.
Angles direction_to_panel_angles(const Vec3 &dir, const Pose &device_pose, const PanelLayout &panel);

// Same mapping when the device rotation matrix is already known
Angles direction_to_panel_angles(const Vec3 &dir, const Mat3 &device_rotation, const PanelLayout &panel);

// Wraps an angle into [-pi, pi)
double wrap_pi(double angle);

} // namespace beamsim

#endif
