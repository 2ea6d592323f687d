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

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace beamsim
{

void CandidateList::write_csv(std::ostream &out) const
{
    out << (kind == CandidateKind::beam_pair ? "rank,i,j,score,slot\n" : "rank,i,p,score,slot\n");
    for (std::size_t r = 0; r < entries.size(); ++r)
    {
        const auto &e = entries[r];
        out << r << ',' << e.ap << ',' << e.target << ',' << e.score << ',' << e.slot << '\n';
    }
}

BeamPair oracle_pair(const Eigen::MatrixXd &rss, const std::vector<int> &panel_of)
{
    if (rss.size() == 0)
        throw std::invalid_argument("Empty RSS table.");
    if (Eigen::Index(panel_of.size()) != rss.cols())
        throw std::invalid_argument("Panel map does not match the RSS table.");
    BeamPair best;
    double best_v = rss(0, 0);
    for (Eigen::Index i = 0; i < rss.rows(); ++i)
        for (Eigen::Index j = 0; j < rss.cols(); ++j)
            if (rss(i, j) > best_v)
            {
                best_v = rss(i, j);
                best.ap = int(i);
                best.ut = int(j);
            }
    if (!(best_v > 0.0))
        throw std::invalid_argument("degenerate sample");
    best.panel = panel_of[std::size_t(best.ut)];
    return best;
}

BeamPair sense_and_pick(const CandidateList &candidates, const Eigen::MatrixXd &rss_noisy,
                        const std::vector<int> &panel_of)
{
    if (candidates.sensed.empty())
        throw std::invalid_argument("Empty candidate list.");
    const SensedPair *best = nullptr;
    for (const auto &s : candidates.sensed)
    {
        if (s.ap < 0 || s.ap >= rss_noisy.rows() || s.ut < 0 || s.ut >= rss_noisy.cols())
            throw std::invalid_argument("Candidate outside the RSS table.");
        if (!best || rss_noisy(s.ap, s.ut) > rss_noisy(best->ap, best->ut))
            best = &s;
    }
    return {best->ap, best->ut, panel_of.at(std::size_t(best->ut))};
}

// Indices sorted by descending score, ties by ascending index
static std::vector<int> ranking(const Eigen::MatrixXd &scores)
{
    // row-major flattening: index = i * cols + j
    const int cols = int(scores.cols());
    std::vector<int> order(std::size_t(scores.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores(a / cols, a % cols) > scores(b / cols, b % cols); });
    return order;
}

CandidateList pair_candidates(const Eigen::MatrixXd &scores, const std::vector<int> &panel_of, int n_b, int n_rf)
{
    const int n_ut = int(scores.cols());
    if (Eigen::Index(panel_of.size()) != scores.cols())
        throw std::invalid_argument("Panel map does not match the score table.");
    const int n_panels = panel_of.empty() ? 0 : *std::max_element(panel_of.begin(), panel_of.end()) + 1;
    if (n_b < 1)
        throw std::invalid_argument("N_b must be at least 1.");
    if (n_rf < 1 || n_rf > n_panels)
        throw std::invalid_argument("N_RF must lie between 1 and the number of panels.");

    CandidateList list;
    list.kind = CandidateKind::beam_pair;
    list.n_rf = n_rf;

    std::vector<char> sensed(std::size_t(scores.size()), 0);
    std::vector<char> used(std::size_t(n_panels), 0);
    auto add = [&](int i, int j, int slot)
    {
        sensed[std::size_t(i * n_ut + j)] = 1;
        list.entries.push_back({i, j, scores(i, j), slot});
        list.sensed.push_back({i, j, slot});
    };

    for (int idx : ranking(scores))
    {
        if (list.slots == n_b)
            break;
        if (sensed[std::size_t(idx)])
            continue;
        const int i = idx / n_ut, j = idx % n_ut;
        const int slot = list.slots++;
        add(i, j, slot);
        std::fill(used.begin(), used.end(), 0);
        used[std::size_t(panel_of[std::size_t(j)])] = 1;

        for (int r = 1; r < n_rf; ++r)
        {
            int pick = -1;
            for (int jj = 0; jj < n_ut; ++jj)
            {
                if (sensed[std::size_t(i * n_ut + jj)] || used[std::size_t(panel_of[std::size_t(jj)])])
                    continue;
                if (pick < 0 || scores(i, jj) > scores(i, pick))
                    pick = jj;
            }
            if (pick < 0)
                break;
            used[std::size_t(panel_of[std::size_t(pick)])] = 1;
            add(i, pick, slot);
        }
    }
    return list;
}

CandidateList panel_candidates(const Eigen::MatrixXd &scores, const Codebook &ut_codebook, int slot_budget,
                               int n_rf)
{
    const int n_p = ut_codebook.n_panels();
    if (scores.cols() != n_p)
        throw std::invalid_argument("Score table does not match the number of panels.");
    if (n_rf < 1 || n_rf > n_p)
        throw std::invalid_argument("N_RF must lie between 1 and the number of panels.");
    int smallest = ut_codebook.panel_size(0);
    for (int p = 1; p < n_p; ++p)
        smallest = std::min(smallest, ut_codebook.panel_size(p));
    if (slot_budget < smallest)
        throw std::invalid_argument("Slot budget is smaller than the smallest panel scan.");

    CandidateList list;
    list.kind = CandidateKind::beam_panel;
    list.n_rf = n_rf;

    std::vector<char> placed(std::size_t(scores.size()), 0);
    for (int idx : ranking(scores))
    {
        if (list.slots == slot_budget)
            break;
        if (placed[std::size_t(idx)])
            continue;
        const int i = idx / n_p;

        // Group this panel with the best remaining panels under the same AP beam
        std::vector<int> group{idx % n_p};
        placed[std::size_t(idx)] = 1;
        while (int(group.size()) < n_rf)
        {
            int pick = -1;
            for (int q = 0; q < n_p; ++q)
                if (!placed[std::size_t(i * n_p + q)] && (pick < 0 || scores(i, q) > scores(i, pick)))
                    pick = q;
            if (pick < 0)
                break;
            placed[std::size_t(i * n_p + pick)] = 1;
            group.push_back(pick);
        }

        int cost = 0;
        for (int q : group)
            cost = std::max(cost, ut_codebook.panel_size(q));
        const int run = std::min(cost, slot_budget - list.slots);
        const int base = list.slots;
        for (int q : group)
            list.entries.push_back({i, q, scores(i, q), base});
        for (int s = 0; s < run; ++s)
            for (int q : group)
                if (s < ut_codebook.panel_size(q))
                    list.sensed.push_back({i, ut_codebook.first_beam(q) + s, base + s});
        list.slots += run;
    }
    return list;
}

static void require_trained(const MlpModel &m)
{
    if (!m.trained)
        throw std::invalid_argument("untrained model");
}

Eigen::MatrixXd sn_scores(const MlpModel &sn, const Pose &pose, const Vec3 &room, int n_ap, int n_ut)
{
    require_trained(sn);
    if (sn.output_dim() != n_ap * n_ut)
        throw std::invalid_argument("SN output size does not match the codebooks.");
    ModelInput in;
    in.features = encode_pose(pose, room);
    const Eigen::VectorXd prob = forward(sn, in).col(0);
    Eigen::MatrixXd s(n_ap, n_ut);
    for (int i = 0; i < n_ap; ++i)
        for (int j = 0; j < n_ut; ++j)
            s(i, j) = prob[i * n_ut + j];
    return s;
}

Eigen::MatrixXd mn_scores(const MlpModel &net1, const MlpModel &net2, const Pose &pose, const Vec3 &room,
                          int top_k)
{
    require_trained(net1);
    require_trained(net2);
    const int n_ap = net1.output_dim();
    if (net2.vocabulary() != n_ap)
        throw std::invalid_argument("NET_II embedding does not match the AP codebook.");
    if (top_k < 0 || top_k > n_ap)
        top_k = n_ap;
    if (top_k < 1)
        throw std::invalid_argument("At least one AP beam must be expanded.");

    ModelInput loc;
    loc.features = encode_location(pose.position, room);
    const Eigen::VectorXd p_ap = forward(net1, loc).col(0);

    std::vector<int> beams(static_cast<std::size_t>(n_ap));
    std::iota(beams.begin(), beams.end(), 0);
    std::stable_sort(beams.begin(), beams.end(), [&](int a, int b) { return p_ap[a] > p_ap[b]; });
    beams.resize(std::size_t(top_k));

    ModelInput in;
    in.features = encode_pose(pose, room).replicate(1, top_k);
    in.tokens = beams;
    const Eigen::MatrixXd cond = forward(net2, in);

    Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n_ap, net2.output_dim(), -1.0);
    for (int k = 0; k < top_k; ++k)
        s.row(beams[std::size_t(k)]) = p_ap[beams[std::size_t(k)]] * cond.col(k).transpose();
    return s;
}

CandidateList sn_candidates(const MlpModel &sn, const Pose &pose, const Vec3 &room, const Codebook &ut_codebook,
                            int n_ap, int n_b, int n_rf)
{
    return pair_candidates(sn_scores(sn, pose, room, n_ap, ut_codebook.size()), ut_codebook.panel_of(), n_b, n_rf);
}

CandidateList mnps_candidates(const MlpModel &net1, const MlpModel &net2, const Pose &pose, const Vec3 &room,
                              const Codebook &ut_codebook, int slot_budget, int n_rf, int top_k)
{
    if (net2.output_dim() != ut_codebook.n_panels())
        throw std::invalid_argument("NET_II output must have one entry per panel.");
    return panel_candidates(mn_scores(net1, net2, pose, room, top_k), ut_codebook, slot_budget, n_rf);
}

CandidateList mnbs_candidates(const MlpModel &net1, const MlpModel &net2, const Pose &pose, const Vec3 &room,
                              const Codebook &ut_codebook, int n_b, int n_rf, int top_k)
{
    if (net2.output_dim() != ut_codebook.size())
        throw std::invalid_argument("NET_II output must have one entry per UT beam.");
    return pair_candidates(mn_scores(net1, net2, pose, room, top_k), ut_codebook.panel_of(), n_b, n_rf);
}

} // namespace beamsim
