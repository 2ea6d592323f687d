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

// Command-line front end: dataset, train, eval, coverage

#include "beamsim/config.hpp"
#include "beamsim/pipeline.hpp"

#include <algorithm>

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char **argv)
{
    CLI::App app{"beamsim: location- and orientation-aware beam selection for multi-panel mmWave devices"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> design, out, n_rf, n_b, method, train_set;
    std::optional<double> scale;

    app.add_option("--config", config_path, "Run configuration file (key = value)")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Root seed");
    app.add_option("--design", design, "Device design: edge, edge-face or a JSON design file");
    app.add_option("--scale", scale, "Dataset size multiplier");
    app.add_option("--out", out, "Output directory");
    app.add_option("--n-rf", n_rf, "Comma list of RF chain counts");
    app.add_option("--n-b", n_b, "Comma list of slot budgets");
    app.add_option("--method", method, "Comma list of methods: sn, mnps, mnbs, gifp, hpbs");
    app.add_option("--train-set", train_set, "Training set: large or small");

    auto *dataset = app.add_subcommand("dataset", "Generate the train, small-train and test datasets");
    auto *train = app.add_subcommand("train", "Train the networks (sn, mnps, mnbs)");
    auto *eval = app.add_subcommand("eval", "Evaluate methods and write the results CSV");
    auto *coverage = app.add_subcommand("coverage", "Write the spherical coverage CSV of the design");
    for (auto *sub : {dataset, train, eval, coverage})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try
    {
        beamsim::RunConfig config = config_path.empty() ? beamsim::RunConfig{} : beamsim::load_config(config_path);
        if (seed)
            config.seed = *seed;
        if (design)
            config.design = *design;
        if (scale)
            config.scale = *scale;
        if (out)
            config.out = *out;
        if (n_rf)
            config.n_rf = beamsim::parse_int_list(*n_rf);
        if (n_b)
            config.n_b = beamsim::parse_int_list(*n_b);
        if (method)
            config.methods = beamsim::parse_method_list(*method);
        if (train_set)
            config.train_set = *train_set;
        if (design && !n_rf && config.n_rf == beamsim::RunConfig{}.n_rf)
        {
            // Default RF chain counts are capped at the panel count of a smaller design
            const int panels = config.setup().design.n_panels();
            std::vector<int> capped;
            for (int r : config.n_rf)
                if (std::find(capped.begin(), capped.end(), std::min(r, panels)) == capped.end())
                    capped.push_back(std::min(r, panels));
            config.n_rf = capped;
        }
        config.validate();

        if (dataset->parsed())
            beamsim::cmd_dataset(config, std::cout);
        else if (train->parsed())
        {
            if (!method)
                config.methods = {beamsim::Method::sn, beamsim::Method::mnps, beamsim::Method::mnbs};
            beamsim::cmd_train(config, config.methods, std::cout);
        }
        else if (eval->parsed())
            return beamsim::cmd_eval(config, std::cout);
        else if (coverage->parsed())
            beamsim::cmd_coverage(config, std::cout);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
