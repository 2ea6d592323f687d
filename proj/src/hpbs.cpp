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

#include "beamsim/selection.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace beamsim
{

HpbsBeams build_hpbs_beams(const PanelLayout &ap_panel, const DeviceDesign &design)
{
    const int n = ap_panel.ny;
    if (ap_panel.nx != 1 || ap_panel.nz != n || n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("Hierarchical search needs a square {1, 2^L, 2^L} AP array.");

    HpbsBeams b;
    b.levels = int(std::lround(std::log2(n)));
    b.ap_wide = CVec::Zero(ap_panel.n_elements());
    b.ap_wide[0] = 1.0;

    for (int level = 1; level < b.levels; ++level)
    {
        const int m = 1 << level; // beams per axis and active elements per axis
        const int span = n / m;   // fine beams covered per axis
        CMat w = CMat::Zero(ap_panel.n_elements(), m * m);
        for (int mz = 0; mz < m; ++mz)
            for (int my = 0; my < m; ++my)
            {
                // centre of the covered fine beams, fine beam f steering to 2 f / n
                const double cz = 2.0 * (mz * span + 0.5 * (span - 1)) / n;
                const double cy = 2.0 * (my * span + 0.5 * (span - 1)) / n;
                for (int kz = 0; kz < m; ++kz)
                    for (int ky = 0; ky < m; ++ky)
                        w(kz * n + ky, mz * m + my) = std::polar(1.0 / m, pi * (kz * cz + ky * cy));
            }
        b.ap_levels.push_back(std::move(w));
    }
    b.ap_levels.push_back(dft_codebook(ap_panel).panel_weights(0));

    for (const auto &p : design.panels)
    {
        CVec v = CVec::Zero(p.n_elements());
        v[0] = 1.0;
        b.ut_wide.push_back(std::move(v));
    }
    return b;
}

int hpbs_slots(const HpbsBeams &beams, const Codebook &ut_codebook, int panel)
{
    return int(beams.ut_wide.size()) + ut_codebook.panel_size(panel) + 4 * beams.levels;
}

HpbsResult hpbs_run(const ChannelMatrix &h, const Codebook &ap_codebook, const Codebook &ut_codebook,
                    const HpbsBeams &beams, const LinkBudget &budget, Rng &rng, bool noisy)
{
    const int n_p = h.n_panels();
    if (int(beams.ut_wide.size()) != n_p || ut_codebook.n_panels() != n_p)
        throw std::invalid_argument("Wide beams do not match the channel.");
    if (beams.ap_levels.empty() || ap_codebook.size() != int(beams.ap_levels.back().cols()))
        throw std::invalid_argument("AP tree does not match the AP codebook.");

    const double amp = std::sqrt(budget.p_ap_mw());
    std::normal_distribution<double> normal(0.0, std::sqrt(budget.sigma2_mw() / 2.0));
    auto measure = [&](int p, const CVec &v, const CVec &u)
    {
        const cdouble g = amp * v.dot(h.panels[std::size_t(p)] * u); // dot conjugates v
        if (!noisy)
            return std::norm(g);
        const double re = normal(rng);
        const double im = normal(rng);
        return std::norm(g + cdouble(re, im));
    };

    // Stage 1: one wide beam per panel
    int p_hat = 0;
    double best = -1.0;
    for (int p = 0; p < n_p; ++p)
    {
        const double r = measure(p, beams.ut_wide[std::size_t(p)], beams.ap_wide);
        if (r > best)
        {
            best = r;
            p_hat = p;
        }
    }

    // Stage 2: sweep the chosen panel
    const CMat &v = ut_codebook.panel_weights(p_hat);
    int local = 0;
    best = -1.0;
    for (int b = 0; b < v.cols(); ++b)
    {
        const double r = measure(p_hat, v.col(b), beams.ap_wide);
        if (r > best)
        {
            best = r;
            local = b;
        }
    }
    const CVec v_hat = v.col(local);

    // Stage 3: 4-ary tree over the AP beams
    int mz = 0, my = 0;
    for (int level = 1; level <= beams.levels; ++level)
    {
        const int m = 1 << level;
        const int z0 = level == 1 ? 0 : 2 * mz;
        const int y0 = level == 1 ? 0 : 2 * my;
        best = -1.0;
        int bz = z0, by = y0;
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
            {
                const double r =
                    measure(p_hat, v_hat, beams.ap_levels[std::size_t(level - 1)].col((z0 + dz) * m + (y0 + dy)));
                if (r > best)
                {
                    best = r;
                    bz = z0 + dz;
                    by = y0 + dy;
                }
            }
        mz = bz;
        my = by;
    }

    HpbsResult res;
    res.pair.ap = mz * (1 << beams.levels) + my;
    res.pair.ut = ut_codebook.first_beam(p_hat) + local;
    res.pair.panel = p_hat;
    res.slots = hpbs_slots(beams, ut_codebook, p_hat);
    return res;
}

} // namespace beamsim
