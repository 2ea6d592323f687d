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

#include "beamsim/eval.hpp"
#include "beamsim/binary_io.hpp"
#include "beamsim/parallel.hpp"
#include "beamsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>

namespace beamsim
{

double misalignment(std::span<const double> chosen_rss, std::span<const double> oracle_rss)
{
    if (chosen_rss.size() != oracle_rss.size())
        throw std::invalid_argument("Chosen and oracle lists differ in length.");
    if (chosen_rss.empty())
        throw std::invalid_argument("Misalignment of an empty set is undefined.");
    std::size_t misses = 0;
    for (std::size_t k = 0; k < chosen_rss.size(); ++k)
        if (chosen_rss[k] < oracle_rss[k])
            ++misses;
    return double(misses) / double(chosen_rss.size());
}

double effective_se(double snr_linear, int n_slots, double frame_ms, double slot_ms)
{
    if (n_slots < 0)
        throw std::invalid_argument("Slot count must be non-negative.");
    if (!(snr_linear >= 0.0))
        throw std::invalid_argument("SNR must be non-negative.");
    const double used = double(n_slots) * slot_ms;
    if (used > frame_ms * (1.0 + 1e-12))
        throw std::invalid_argument("frame exhausted");
    return std::max(0.0, (frame_ms - used) / frame_ms) * std::log2(1.0 + snr_linear);
}

double compensated_sum(std::span<const double> values)
{
    double sum = 0.0, c = 0.0;
    for (double v : values)
    {
        const double t = sum + v;
        c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + c;
}

std::string to_string(Method m)
{
    switch (m)
    {
    case Method::sn:
        return "sn";
    case Method::mnps:
        return "mnps";
    case Method::mnbs:
        return "mnbs";
    case Method::gifp:
        return "gifp";
    case Method::hpbs:
        return "hpbs";
    }
    return "unknown";
}

Method method_from_string(const std::string &name)
{
    for (Method m : {Method::sn, Method::mnps, Method::mnbs, Method::gifp, Method::hpbs})
        if (to_string(m) == name)
            return m;
    throw std::invalid_argument("Unknown method '" + name + "'.");
}

const ResultRow &EvalResult::row(const std::string &method, int n_rf, int n_b) const
{
    for (const auto &r : rows)
        if (r.method == method && r.n_rf == n_rf && r.n_b == n_b)
            return r;
    throw std::out_of_range("No result row for " + method + ".");
}

void EvalResult::write_csv(std::ostream &out) const
{
    out << "method,design,n_train,n_rf,N_b,slots,misalignment,mean_se_eff,n_samples,seed\n";
    for (const auto &r : rows)
        out << r.method << ',' << r.design << ',' << r.n_train << ',' << r.n_rf << ',' << r.n_b << ','
            << io::format_double(r.slots) << ',' << io::format_double(r.misalignment) << ','
            << io::format_double(r.mean_se_eff) << ',' << r.n_samples << ',' << r.seed << '\n';
}

namespace
{

struct Outcome
{
    double chosen_rss = 0.0;
    int slots = 0;
};

bool is_prefix(const std::vector<SensedPair> &a, const std::vector<SensedPair> &b)
{
    if (a.size() > b.size())
        return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].ap != b[k].ap || a[k].ut != b[k].ut)
            return false;
    return true;
}

void check_config(const SimSetup &setup, const MethodModels &models, const SweepConfig &config,
                  const Codebook &ut)
{
    if (config.methods.empty() || config.n_b.empty() || config.n_rf.empty())
        throw std::invalid_argument("Sweep needs methods, budgets and RF chain counts.");
    for (int b : config.n_b)
        if (b < 1 || b > 200)
            throw std::invalid_argument("Slot budgets must lie in [1, 200].");
    for (int r : config.n_rf)
        if (r < 1 || r > setup.design.n_panels())
            throw std::invalid_argument("N_RF must lie between 1 and the number of panels.");
    for (Method m : config.methods)
    {
        const bool ok = (m == Method::sn && models.sn) || (m == Method::mnps && models.net1 && models.net2_ps) ||
                        (m == Method::mnbs && models.net1 && models.net2_bs) || (m == Method::gifp && models.gifp) ||
                        m == Method::hpbs;
        if (!ok)
            throw std::invalid_argument("missing model for method " + to_string(m));
        if (m == Method::mnps)
            for (int b : config.n_b)
                for (int p = 0; p < ut.n_panels(); ++p)
                    if (b < ut.panel_size(p))
                        throw std::invalid_argument("Slot budget is smaller than a panel scan.");
    }
}

} // namespace

EvalResult sweep(const SimSetup &setup, const Dataset &test, const MethodModels &models, const SweepConfig &config)
{
    const Codebook ap = setup.ap_codebook();
    const Codebook ut = setup.ut_codebook();
    check_config(setup, models, config, ut);
    if (test.samples.empty())
        throw std::invalid_argument("Empty test set.");
    if (test.n_ap != ap.size() || test.n_ut != ut.size())
        throw std::invalid_argument("Test set does not match the codebooks.");

    const std::size_t n = test.size();
    const std::size_t n_m = config.methods.size(), n_r = config.n_rf.size(), n_b = config.n_b.size();
    const std::size_t combos = n_m * n_r * n_b;
    std::vector<Outcome> outcomes(combos * n);
    std::vector<double> oracle(n);
    std::vector<std::vector<std::string>> issues(n);

    const bool ascending = std::is_sorted(config.n_b.begin(), config.n_b.end());
    const bool need_hpbs =
        std::find(config.methods.begin(), config.methods.end(), Method::hpbs) != config.methods.end();
    HpbsBeams hp_beams;
    if (need_hpbs)
        hp_beams = build_hpbs_beams(setup.scene.ap_panel, setup.design);
    const auto &panel_of = ut.panel_of();

    parallel_for(n,
                 [&](std::size_t k)
                 {
                     const Sample &s = test.samples[k];
                     const Eigen::MatrixXd rss = s.rss_mw();
                     const Eigen::MatrixXd noisy = noisy_rss(s, setup.budget);
                     const BeamPair label = relabel(s, panel_of);
                     auto &bad = issues[k];
                     if (!(label == s.label))
                         bad.push_back("sample " + std::to_string(s.id) + ": stored label disagrees with its RSS");
                     oracle[k] = rss(label.ap, label.ut);

                     for (std::size_t mi = 0; mi < n_m; ++mi)
                     {
                         const Method m = config.methods[mi];
                         Eigen::MatrixXd scores;
                         HpbsResult hp;
                         switch (m)
                         {
                         case Method::sn:
                             scores = sn_scores(*models.sn, s.pose, setup.scene.room, ap.size(), ut.size());
                             break;
                         case Method::mnps:
                             scores = mn_scores(*models.net1, *models.net2_ps, s.pose, setup.scene.room, config.top_k);
                             break;
                         case Method::mnbs:
                             scores = mn_scores(*models.net1, *models.net2_bs, s.pose, setup.scene.room, config.top_k);
                             break;
                         case Method::gifp:
                             scores = models.gifp->scores(s.pose, s.mode);
                             break;
                         case Method::hpbs:
                         {
                             const auto paths = sample_paths(setup, s.pose, s.los);
                             const ChannelMatrix h =
                                 assemble_channel(paths, setup.scene, s.pose, setup.design, setup.pattern);
                             Rng rng(derive_seed(s.noise_seed, {config.hpbs_stream}));
                             hp = hpbs_run(h, ap, ut, hp_beams, setup.budget, rng, true);
                             break;
                         }
                         }

                         for (std::size_t ri = 0; ri < n_r; ++ri)
                         {
                             std::vector<SensedPair> previous;
                             for (std::size_t bi = 0; bi < n_b; ++bi)
                             {
                                 Outcome &o = outcomes[((mi * n_r + ri) * n_b + bi) * n + k];
                                 if (m == Method::hpbs)
                                 {
                                     o.chosen_rss = rss(hp.pair.ap, hp.pair.ut);
                                     o.slots = hp.slots;
                                     continue;
                                 }
                                 const int budget = config.n_b[bi], rf = config.n_rf[ri];
                                 const CandidateList list = m == Method::mnps
                                                                ? panel_candidates(scores, ut, budget, rf)
                                                                : pair_candidates(scores, panel_of, budget, rf);
                                 const BeamPair pick = sense_and_pick(list, noisy, panel_of);
                                 o.chosen_rss = rss(pick.ap, pick.ut);
                                 o.slots = list.slots;

                                 std::set<std::pair<int, int>> seen;
                                 for (const auto &p : list.sensed)
                                     if (!seen.insert({p.ap, p.ut}).second)
                                     {
                                         bad.push_back(to_string(m) + ": repeated pair in candidate list");
                                         break;
                                     }
                                 if (!seen.count({pick.ap, pick.ut}))
                                     bad.push_back(to_string(m) + ": chosen pair was not sensed");
                                 if (list.slots > budget || list.slots < 1)
                                     bad.push_back(to_string(m) + ": slot budget violated");
                                 if (ascending && !is_prefix(previous, list.sensed))
                                     bad.push_back(to_string(m) + ": candidate list is not prefix-monotone");
                                 previous = list.sensed;
                             }
                         }
                     }
                 });

    EvalResult result;
    for (const auto &v : issues)
        for (const auto &msg : v)
            if (result.violations.size() < 50)
                result.violations.push_back(msg);

    std::vector<double> chosen(n), se(n), slots(n);
    for (std::size_t mi = 0; mi < n_m; ++mi)
        for (std::size_t ri = 0; ri < n_r; ++ri)
            for (std::size_t bi = 0; bi < n_b; ++bi)
            {
                const Outcome *o = &outcomes[((mi * n_r + ri) * n_b + bi) * n];
                for (std::size_t k = 0; k < n; ++k)
                {
                    chosen[k] = o[k].chosen_rss;
                    slots[k] = double(o[k].slots);
                    se[k] = effective_se(snr_of(o[k].chosen_rss, setup.budget.sigma2_mw()), o[k].slots);
                }
                ResultRow row;
                row.method = to_string(config.methods[mi]);
                row.design = setup.design.name;
                row.n_train = config.n_train;
                row.n_rf = config.n_rf[ri];
                row.n_b = config.n_b[bi];
                row.slots = compensated_sum(slots) / double(n);
                row.misalignment = misalignment(chosen, oracle);
                row.mean_se_eff = compensated_sum(se) / double(n);
                row.n_samples = n;
                row.seed = config.seed;
                if (!(row.misalignment >= 0.0 && row.misalignment <= 1.0) || !(row.mean_se_eff >= 0.0))
                    result.violations.push_back(row.method + ": metric out of range");
                result.rows.push_back(row);
            }
    return result;
}

} // namespace beamsim
