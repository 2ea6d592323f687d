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

#ifndef BEAMSIM_ANTENNA_HPP
#define BEAMSIM_ANTENNA_HPP

#include "beamsim/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <vector>

namespace beamsim
{

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// 3GPP single-element patch pattern. Boresight is (phi = 0, theta = 90 deg).
struct ElementPattern
{
    double g_max_dbi = 8.0;
    double theta_3db = 65.0; // deg
    double phi_3db = 65.0;   // deg
    double sla_v = 30.0;     // dB
    double a_max = 30.0;     // dB

    void validate() const;
};

// Element power gain in dBi at azimuth phi and zenith theta (radians)
double element_gain_db(const ElementPattern &pattern, double phi, double theta);

// Linear amplitude gain sqrt(10^(G_dB / 10))
double element_gain(const ElementPattern &pattern, double phi, double theta);

// Entry k equals exp(j pi k phase_arg). Throws std::invalid_argument("empty axis") for n == 0.
CVec steering_axis(int n, double phase_arg);

// (1/sqrt(Na)) g(phi, theta) a_z(theta) (x) a_y(phi, theta) (x) a_x(phi, theta).
// Element index is kz * (ny * nx) + ky * nx + kx.
CVec array_response(const PanelLayout &panel, const ElementPattern &pattern, double phi, double theta);

// Array response without the element gain
CVec array_factor(const PanelLayout &panel, double phi, double theta);

// Beamforming/combining vectors of one array or a union of panel codebooks.
// Global beam index j runs over the panels in order; panel_of(j) gives its panel.
class Codebook
{
public:
    Codebook() = default;

    // Single-array codebook, one beam per column
    explicit Codebook(CMat weights);

    // Union of per-panel codebooks
    static Codebook union_of(std::vector<CMat> panel_weights);

    int size() const { return int(panel_of_.size()); }
    int n_panels() const { return int(panels_.size()); }

    int panel_of(int j) const { return panel_of_.at(j); }
    int local_index(int j) const { return local_index_.at(j); }
    int first_beam(int p) const { return first_beam_.at(p); }
    int panel_size(int p) const { return int(panels_.at(p).cols()); }

    const CMat &panel_weights(int p) const { return panels_.at(p); }
    CVec beam(int j) const { return panels_[panel_of(j)].col(local_index(j)); }
    const std::vector<int> &panel_of() const { return panel_of_; }

    // CSV with one row per beam: beam, panel, re_0, im_0, re_1, im_1, ...
    void write_csv(std::ostream &out) const;

private:
    std::vector<CMat> panels_;
    std::vector<int> panel_of_;
    std::vector<int> local_index_;
    std::vector<int> first_beam_;
};

// Unitary DFT matrix with entries exp(j 2 pi k m / n) / sqrt(n); column m steers to phase_arg 2m/n
CMat dft_matrix(int n);

// Kronecker product of per-axis DFT codebooks in z (x) y (x) x order; beam index is
// row-major over (m_z, m_y, m_x). Entries have modulus 1/sqrt(Na).
Codebook dft_codebook(const PanelLayout &panel);

// Union of the DFT codebooks of all panels of a device
Codebook device_codebook(const DeviceDesign &design);

// Max over all device beams of |v_j^H a^(p(j))(dir)|^2 for a direction in the device LCS, linear
double coverage_gain(const DeviceDesign &design, const ElementPattern &pattern, const Codebook &codebook,
                     const Vec3 &device_dir);

// Equal-angle sphere grid: azimuth -180 .. 180-step, elevation -90 .. 90 (degrees, inclusive)
struct CoverageMap
{
    double step_deg = 0.0;
    std::vector<double> azimuth_deg;
    std::vector<double> elevation_deg;
    std::vector<double> gain_db;

    std::size_t size() const { return gain_db.size(); }

    // Solid-angle weighted empirical CDF of the gain, evaluated at a percentile in [0, 100]
    double percentile_db(double percent) const;

    // azimuth, elevation, max_gain_db
    void write_csv(std::ostream &out) const;
};

// Throws std::invalid_argument unless step_deg divides both 360 and 180
CoverageMap spherical_coverage(const DeviceDesign &design, const ElementPattern &pattern, double step_deg);

} // namespace beamsim

#endif
