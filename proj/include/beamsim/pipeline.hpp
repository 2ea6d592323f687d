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

#ifndef BEAMSIM_PIPELINE_HPP
#define BEAMSIM_PIPELINE_HPP

#include "beamsim/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace beamsim
{

// Output layout below RunConfig::out:
//   config.toml, manifest.json
//   train.brss, train_small.brss, test.brss      datasets
//   rays_{train,train_small,test}.{csv,bray}     optional ray dumps
//   models/<set>/{sn,net1,net2_ps,net2_bs}.bmlp  models and <name>_loss.csv curves
//   results_<set>.csv                            evaluation sweep
//   coverage_<design>.csv

std::string dataset_path(const RunConfig &config, const std::string &set);
std::string model_dir(const RunConfig &config);

// Training arrays of a dataset
struct TrainingData
{
    ModelInput sn, net1, net2;
    std::vector<int> pair_labels, ap_labels, panel_labels, beam_labels;
};
TrainingData training_data(const Dataset &data, const SimSetup &setup);

void cmd_dataset(const RunConfig &config, std::ostream &log);

// methods may include sn, mnps and mnbs; others are ignored
void cmd_train(const RunConfig &config, const std::vector<Method> &methods, std::ostream &log);

// Returns the process exit code: 0 on success, 2 when an invariant was violated
int cmd_eval(const RunConfig &config, std::ostream &log);

void cmd_coverage(const RunConfig &config, std::ostream &log);

} // namespace beamsim

#endif
