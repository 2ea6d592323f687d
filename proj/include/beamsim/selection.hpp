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

#ifndef BEAMSIM_SELECTION_HPP
#define BEAMSIM_SELECTION_HPP

#include "beamsim/antenna.hpp"
#include "beamsim/channel.hpp"
#include "beamsim/mlp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

namespace beamsim
{

// Beam pair (i, j) or beam-panel pair (i, p)
struct Candidate
{
    int ap = 0;
    int target = 0;
    double score = 0.0;
    int slot = 0;
};

// A beam pair that is actually measured, and the slot it is measured in
struct SensedPair
{
    int ap = 0;
    int ut = 0;
    int slot = 0;
};

enum class CandidateKind
{
    beam_pair,
    beam_panel
};

struct CandidateList
{
    CandidateKind kind = CandidateKind::beam_pair;
    std::vector<Candidate> entries;
    std::vector<SensedPair> sensed; // beam pairs covered by the entries, in sensing order
    int slots = 0;
    int n_rf = 1;

    bool empty() const { return entries.empty(); }

    // rank,i,j (or p),score,slot
    void write_csv(std::ostream &out) const;
};

struct BeamPair
{
    int ap = 0;
    int ut = 0;
    int panel = 0;

    bool operator==(const BeamPair &) const = default;
};

// Argmax over the noiseless table; ties go to the smallest i, then j.
// Throws std::invalid_argument("degenerate sample") when no pair has positive RSS.
BeamPair oracle_pair(const Eigen::MatrixXd &rss_noiseless, const std::vector<int> &panel_of);

// Highest noisy RSS among the sensed pairs; ties keep the earlier pair
BeamPair sense_and_pick(const CandidateList &candidates, const Eigen::MatrixXd &rss_noisy,
                        const std::vector<int> &panel_of);

// Candidate list from pair scores (N_AP x N_UT): the N_b best pairs open one slot each and every
// slot is filled with up to N_RF - 1 further pairs for the same AP beam on unused panels.
// Pairs already in the list are skipped, so the list never repeats a pair.
CandidateList pair_candidates(const Eigen::MatrixXd &scores, const std::vector<int> &panel_of, int n_b, int n_rf);

// Sensing plan over beam-panel scores (N_AP x N_P) within a slot budget. A panel scan costs
// one slot per panel beam; with N_RF > 1 up to N_RF panels under the same AP beam are scanned
// together. The last scan is truncated to the remaining budget.
CandidateList panel_candidates(const Eigen::MatrixXd &scores, const Codebook &ut_codebook, int slot_budget,
                               int n_rf);

// Network scores. SN: P_{i,j}. MN-PS: P_i P_{p|i}. MN-BS: P_i P_{j|i}. Only the top_k AP beams of
// NET_I are expanded by NET_II; the rest score -1.
Eigen::MatrixXd sn_scores(const MlpModel &sn, const Pose &pose, const Vec3 &room, int n_ap, int n_ut);
Eigen::MatrixXd mn_scores(const MlpModel &net1, const MlpModel &net2, const Pose &pose, const Vec3 &room,
                          int top_k);

CandidateList sn_candidates(const MlpModel &sn, const Pose &pose, const Vec3 &room, const Codebook &ut_codebook,
                            int n_ap, int n_b, int n_rf);
CandidateList mnps_candidates(const MlpModel &net1, const MlpModel &net2, const Pose &pose, const Vec3 &room,
                              const Codebook &ut_codebook, int slot_budget, int n_rf, int top_k = -1);
CandidateList mnbs_candidates(const MlpModel &net1, const MlpModel &net2, const Pose &pose, const Vec3 &room,
                              const Codebook &ut_codebook, int n_b, int n_rf, int top_k = -1);

// Location/orientation fingerprint table
struct GifpConfig
{
    double cell_m = 0.5;
    int alpha_sectors = 8;
    bool split_modes = true;
    int min_samples = 5; // smaller bins fall back to the global ranking

    void validate() const;
};

struct GifpSample
{
    Pose pose;
    OrientationMode mode = OrientationMode::portrait;
    int ap = 0; // oracle pair
    int ut = 0;
};

class GifpTable
{
public:
    GifpTable() = default;

    int n_ap() const { return n_ap_; }
    int n_ut() const { return n_ut_; }
    int n_bins() const { return nx_ * ny_ * sectors_ * modes_; }
    int bin_of(const Pose &pose, OrientationMode mode) const;
    int bin_size(int bin) const;
    const std::vector<int> &global_counts() const { return global_; }

    // Pair scores for a query (N_AP x N_UT); larger is better
    Eigen::MatrixXd scores(const Pose &pose, OrientationMode mode) const;

    friend GifpTable gifp_build(const std::vector<GifpSample> &train, const Vec3 &room, int n_ap, int n_ut,
                                const GifpConfig &config);

private:
    Vec3 room_ = Vec3::Ones();
    GifpConfig config_;
    int n_ap_ = 0, n_ut_ = 0;
    int nx_ = 1, ny_ = 1, sectors_ = 1, modes_ = 1;
    int n_train_ = 0;
    std::vector<int> global_;
    std::map<int, std::vector<int>> bins_;
};

GifpTable gifp_build(const std::vector<GifpSample> &train, const Vec3 &room, int n_ap, int n_ut,
                     const GifpConfig &config = {});

CandidateList gifp_candidates(const GifpTable &table, const Pose &pose, OrientationMode mode,
                              const Codebook &ut_codebook, int n_b, int n_rf);

// Wide beams of the hierarchical baseline. The AP array must be a square {1, 2^L, 2^L} UPA;
// level l holds the 4^l beams of the {1, 2^l, 2^l} subarray, each steered to the centre of the
// fine beams it covers. The UT wide beam of a panel is its first element alone.
struct HpbsBeams
{
    CVec ap_wide;                  // stages 1 and 2
    std::vector<CMat> ap_levels;   // level 1 .. L, columns indexed m_z * 2^l + m_y
    std::vector<CVec> ut_wide;     // one per panel
    int levels = 0;
};

HpbsBeams build_hpbs_beams(const PanelLayout &ap_panel, const DeviceDesign &design);

struct HpbsResult
{
    BeamPair pair;
    int slots = 0;
};

// Panel scan, panel beam sweep, then a 4-ary AP beam tree search with the UT beam fixed.
// Every measurement draws fresh combined noise from rng unless noisy is false.
HpbsResult hpbs_run(const ChannelMatrix &h, const Codebook &ap_codebook, const Codebook &ut_codebook,
                    const HpbsBeams &beams, const LinkBudget &budget, Rng &rng, bool noisy = true);

// Slot cost of one run: N_P + N_UT^(p) + 4 L
int hpbs_slots(const HpbsBeams &beams, const Codebook &ut_codebook, int panel);

} // namespace beamsim

#endif
