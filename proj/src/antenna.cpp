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

#include "beamsim/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace beamsim
{

void ElementPattern::validate() const
{
    if (!(theta_3db > 0.0 && phi_3db > 0.0 && sla_v > 0.0 && a_max > 0.0))
        throw std::invalid_argument("Element pattern beamwidths and floors must be positive.");
}

double element_gain_db(const ElementPattern &pattern, double phi, double theta)
{
    const double phi_deg = wrap_pi(phi) * 180.0 / pi;
    const double theta_deg = theta * 180.0 / pi;

    const double dv = (theta_deg - 90.0) / pattern.theta_3db;
    const double dh = phi_deg / pattern.phi_3db;
    const double a_v = -std::min(12.0 * dv * dv, pattern.sla_v);
    const double a_h = -std::min(12.0 * dh * dh, pattern.a_max);
    return pattern.g_max_dbi - std::min(-(a_v + a_h), pattern.a_max);
}

double element_gain(const ElementPattern &pattern, double phi, double theta)
{
    return std::sqrt(std::pow(10.0, element_gain_db(pattern, phi, theta) / 10.0));
}

CVec steering_axis(int n, double phase_arg)
{
    if (n <= 0)
        throw std::invalid_argument("empty axis");
    CVec a(n);
    for (int k = 0; k < n; ++k)
        a[k] = std::polar(1.0, pi * double(k) * phase_arg);
    return a;
}

CVec array_factor(const PanelLayout &panel, double phi, double theta)
{
    const double st = std::sin(theta);
    const CVec ax = steering_axis(panel.nx, st * std::cos(phi));
    const CVec ay = steering_axis(panel.ny, st * std::sin(phi));
    const CVec az = steering_axis(panel.nz, std::cos(theta));

    const int n = panel.n_elements();
    const double scale = 1.0 / std::sqrt(double(n));
    CVec a(n);
    for (int kz = 0; kz < panel.nz; ++kz)
        for (int ky = 0; ky < panel.ny; ++ky)
        {
            const cdouble zy = az[kz] * ay[ky] * scale;
            for (int kx = 0; kx < panel.nx; ++kx)
                a[(kz * panel.ny + ky) * panel.nx + kx] = zy * ax[kx];
        }
    return a;
}

CVec array_response(const PanelLayout &panel, const ElementPattern &pattern, double phi, double theta)
{
    return element_gain(pattern, phi, theta) * array_factor(panel, phi, theta);
}

Codebook::Codebook(CMat weights)
{
    *this = union_of({std::move(weights)});
}

Codebook Codebook::union_of(std::vector<CMat> panel_weights)
{
    Codebook cb;
    cb.panels_ = std::move(panel_weights);
    for (int p = 0; p < int(cb.panels_.size()); ++p)
    {
        cb.first_beam_.push_back(int(cb.panel_of_.size()));
        for (int m = 0; m < int(cb.panels_[p].cols()); ++m)
        {
            cb.panel_of_.push_back(p);
            cb.local_index_.push_back(m);
        }
    }
    return cb;
}

void Codebook::write_csv(std::ostream &out) const
{
    Eigen::Index max_len = 0;
    for (const auto &w : panels_)
        max_len = std::max(max_len, w.rows());

    out << "beam,panel";
    for (Eigen::Index k = 0; k < max_len; ++k)
        out << ",re_" << k << ",im_" << k;
    out << '\n';

    out.precision(17);
    for (int j = 0; j < size(); ++j)
    {
        const CVec v = beam(j);
        out << j << ',' << panel_of(j);
        for (Eigen::Index k = 0; k < v.size(); ++k)
            out << ',' << v[k].real() << ',' << v[k].imag();
        out << '\n';
    }
}

CMat dft_matrix(int n)
{
    if (n <= 0)
        throw std::invalid_argument("empty axis");
    CMat f(n, n);
    const double scale = 1.0 / std::sqrt(double(n));
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
        {
            // Reduce k*m modulo n first so the phase stays exact for large products
            const int km = (k * m) % n;
            f(k, m) = std::polar(scale, 2.0 * pi * double(km) / double(n));
        }
    return f;
}

Codebook dft_codebook(const PanelLayout &panel)
{
    panel.validate();
    const CMat fx = dft_matrix(panel.nx);
    const CMat fy = dft_matrix(panel.ny);
    const CMat fz = dft_matrix(panel.nz);

    const int n = panel.n_elements();
    CMat w(n, n);
    for (int mz = 0; mz < panel.nz; ++mz)
        for (int my = 0; my < panel.ny; ++my)
            for (int mx = 0; mx < panel.nx; ++mx)
            {
                const int beam = (mz * panel.ny + my) * panel.nx + mx;
                for (int kz = 0; kz < panel.nz; ++kz)
                    for (int ky = 0; ky < panel.ny; ++ky)
                        for (int kx = 0; kx < panel.nx; ++kx)
                            w((kz * panel.ny + ky) * panel.nx + kx, beam) = fz(kz, mz) * fy(ky, my) * fx(kx, mx);
            }
    return Codebook(std::move(w));
}

Codebook device_codebook(const DeviceDesign &design)
{
    std::vector<CMat> w;
    for (const auto &p : design.panels)
        w.push_back(dft_codebook(p).panel_weights(0));
    return Codebook::union_of(std::move(w));
}

double coverage_gain(const DeviceDesign &design, const ElementPattern &pattern, const Codebook &codebook,
                     const Vec3 &device_dir)
{
    double best = 0.0;
    for (int p = 0; p < design.n_panels(); ++p)
    {
        const auto &panel = design.panels[p];
        const Angles a = direction_to_panel_angles(device_dir, Mat3::Identity(), panel);
        const CVec resp = array_response(panel, pattern, a.azimuth, a.zenith);
        const Eigen::VectorXd g = (codebook.panel_weights(p).adjoint() * resp).cwiseAbs2();
        best = std::max(best, g.maxCoeff());
    }
    return best;
}

double CoverageMap::percentile_db(double percent) const
{
    if (gain_db.empty())
        throw std::invalid_argument("Empty coverage map.");
    if (percent < 0.0 || percent > 100.0)
        throw std::invalid_argument("Percentile must be within [0, 100].");

    // Each grid point stands for the band of solid angle between its neighbouring elevations
    const double half = 0.5 * step_deg * pi / 180.0;
    std::vector<double> weight(gain_db.size());
    for (std::size_t k = 0; k < gain_db.size(); ++k)
    {
        const double el = elevation_deg[k] * pi / 180.0;
        weight[k] = std::sin(std::min(el + half, pi / 2.0)) - std::sin(std::max(el - half, -pi / 2.0));
    }

    std::vector<std::size_t> order(gain_db.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                     { return gain_db[a] < gain_db[b]; });

    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    const double target = percent / 100.0 * total;
    double cum = 0.0;
    for (std::size_t k : order)
    {
        cum += weight[k];
        if (cum >= target)
            return gain_db[k];
    }
    return gain_db[order.back()];
}

void CoverageMap::write_csv(std::ostream &out) const
{
    out << "azimuth,elevation,max_gain_db\n";
    out.precision(17);
    for (std::size_t k = 0; k < gain_db.size(); ++k)
        out << azimuth_deg[k] << ',' << elevation_deg[k] << ',' << gain_db[k] << '\n';
}

static bool divides(double whole, double step)
{
    const double q = whole / step;
    return std::abs(q - std::round(q)) < 1e-9;
}

CoverageMap spherical_coverage(const DeviceDesign &design, const ElementPattern &pattern, double step_deg)
{
    if (!(step_deg > 0.0) || !divides(360.0, step_deg) || !divides(180.0, step_deg))
        throw std::invalid_argument("Coverage step must divide 360 and 180 degrees.");
    design.validate();

    const Codebook cb = device_codebook(design);
    const int n_az = int(std::lround(360.0 / step_deg));
    const int n_el = int(std::lround(180.0 / step_deg)) + 1;

    CoverageMap map;
    map.step_deg = step_deg;
    map.azimuth_deg.reserve(std::size_t(n_az) * n_el);
    map.elevation_deg.reserve(std::size_t(n_az) * n_el);
    map.gain_db.reserve(std::size_t(n_az) * n_el);

    for (int e = 0; e < n_el; ++e)
    {
        const double el = -90.0 + e * step_deg;
        for (int a = 0; a < n_az; ++a)
        {
            const double az = -180.0 + a * step_deg;
            const Angles dir{az * pi / 180.0, (90.0 - el) * pi / 180.0};
            const double g = coverage_gain(design, pattern, cb, unit_vector(dir));
            map.azimuth_deg.push_back(az);
            map.elevation_deg.push_back(el);
            map.gain_db.push_back(10.0 * std::log10(g));
        }
    }
    return map;
}

} // namespace beamsim
