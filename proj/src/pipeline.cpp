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

#include "beamsim/pipeline.hpp"
#include "beamsim/channel_io.hpp"
#include "beamsim/rng.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace beamsim
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace
{

// Seed streams of the three datasets
std::uint64_t dataset_stream(const std::string &set)
{
    if (set == "train")
        return 1;
    if (set == "train_small")
        return 2;
    if (set == "test")
        return 3;
    throw std::invalid_argument("Unknown dataset '" + set + "'.");
}

std::string train_file_set(const RunConfig &c)
{
    return c.train_set == "large" ? "train" : "train_small";
}

void ensure_dir(const std::string &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("Cannot create output directory '" + dir + "'.");
    const fs::path probe = fs::path(dir) / ".write_test";
    {
        std::ofstream t(probe);
        if (!t)
            throw std::runtime_error("Output directory '" + dir + "' is not writable.");
    }
    fs::remove(probe, ec);
}

json vec_json(const Vec3 &v)
{
    return json::array({v.x(), v.y(), v.z()});
}

json manifest_of(const RunConfig &c, const SimSetup &s)
{
    json m;
    m["format"] = "beamsim-manifest-1";
    m["seed"] = c.seed;
    json design;
    design["name"] = s.design.name;
    design["n_panels"] = s.design.n_panels();
    design["n_ut"] = s.design.n_elements();
    json panels = json::array();
    for (const auto &p : s.design.panels)
        panels.push_back({{"grid", {p.nx, p.ny, p.nz}}, {"boresight", vec_json(p.boresight)}});
    design["panels"] = panels;
    m["design"] = design;
    m["n_ap"] = s.scene.ap_panel.n_elements();
    m["n_ut"] = s.design.n_elements();
    m["scene"] = {{"room", vec_json(s.scene.room)},
                  {"ap_position", vec_json(s.scene.ap_pose.position)},
                  {"ap_grid", {s.scene.ap_panel.nx, s.scene.ap_panel.ny, s.scene.ap_panel.nz}},
                  {"max_order", s.scene.max_order},
                  {"reflection_loss_db", s.scene.reflection_loss_db},
                  {"carrier_hz", s.scene.carrier_hz},
                  {"region_lo", vec_json(s.region_lo)},
                  {"region_hi", vec_json(s.region_hi)}};
    m["link"] = {{"p_ap_dbm", s.budget.p_ap_dbm}, {"sigma_n_dbm", s.budget.sigma_n_dbm}};
    json sets;
    for (const std::string set : {"train", "train_small", "test"})
    {
        const std::size_t n = set == "train" ? c.train_size() : (set == "test" ? c.test_size() : c.small_size());
        sets[set] = {{"file", set + ".brss"},
                     {"n_samples", n},
                     {"seed", derive_seed(c.seed, {dataset_stream(set)})}};
    }
    m["datasets"] = sets;
    return m;
}

// The stored manifest must describe the same scene and device as the current configuration
void check_manifest(const RunConfig &c, const SimSetup &s)
{
    const fs::path path = fs::path(c.out) / "manifest.json";
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("missing dataset: no manifest in '" + c.out + "'; run the dataset command first.");
    json stored;
    try
    {
        stored = json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw std::runtime_error(std::string("Corrupt manifest: ") + e.what());
    }
    const json expected = manifest_of(c, s);
    for (const char *key : {"seed", "design", "n_ap", "n_ut", "scene", "link"})
        if (stored.value(key, json()) != expected[key])
            throw std::runtime_error(std::string("Dataset manifest disagrees with the configuration on '") + key +
                                     "'.");
}

Dataset load_set(const RunConfig &c, const SimSetup &s, const std::string &set)
{
    const std::string path = dataset_path(c, set);
    if (!fs::exists(path))
        throw std::runtime_error("missing dataset '" + path + "'.");
    return load_dataset(path, device_codebook(s.design).panel_of());
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write '" + path.string() + "'.");
    out << text;
}

std::string json_text(const json &j)
{
    return j.dump(2) + "\n";
}

struct Trained
{
    MlpModel model;
    TrainReport report;
};

Trained fit(MlpModel model, const ModelInput &in, const std::vector<int> &labels, const TrainConfig &tc)
{
    Trained t{std::move(model), {}};
    t.report = train(t.model, in, labels, tc);
    return t;
}

void save_trained(const RunConfig &c, const std::string &name, const Trained &t, std::ostream &log)
{
    const fs::path dir = model_dir(c);
    save_model((dir / (name + ".bmlp")).string(), t.model);
    std::ofstream curve(dir / (name + "_loss.csv"), std::ios::binary);
    write_loss_csv(curve, t.report);
    log << "  " << name << ": " << t.report.curve.size() - 1 << " epochs, best epoch " << t.report.best_epoch
        << ", train loss " << std::setprecision(5) << t.report.final_train_loss << '\n';
}

MlpModel load_required(const RunConfig &c, const std::string &name)
{
    const fs::path path = fs::path(model_dir(c)) / (name + ".bmlp");
    if (!fs::exists(path))
        throw std::runtime_error("missing model '" + path.string() + "'; run the train command first.");
    return load_model(path.string());
}

} // namespace

std::string dataset_path(const RunConfig &config, const std::string &set)
{
    dataset_stream(set);
    return (fs::path(config.out) / (set + ".brss")).string();
}

std::string model_dir(const RunConfig &config)
{
    return (fs::path(config.out) / "models" / config.train_set).string();
}

TrainingData training_data(const Dataset &data, const SimSetup &setup)
{
    const Codebook ut = setup.ut_codebook();
    const Eigen::Index n = Eigen::Index(data.size());
    TrainingData t;
    t.sn.features.resize(6, n);
    t.net1.features.resize(3, n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const Sample &s = data.samples[std::size_t(k)];
        t.sn.features.col(k) = encode_pose(s.pose, setup.scene.room);
        t.net1.features.col(k) = encode_location(s.pose.position, setup.scene.room);
        t.pair_labels.push_back(s.label.ap * data.n_ut + s.label.ut);
        t.ap_labels.push_back(s.label.ap);
        t.panel_labels.push_back(ut.panel_of(s.label.ut));
        t.beam_labels.push_back(s.label.ut);
    }
    // NET_II sees the pose and the optimal AP beam
    t.net2.features = t.sn.features;
    t.net2.tokens = t.ap_labels;
    return t;
}

void cmd_dataset(const RunConfig &config, std::ostream &log)
{
    config.validate();
    ensure_dir(config.out);
    const SimSetup setup = config.setup();
    const fs::path out(config.out);

    write_text(out / "config.toml", config.to_text());
    write_text(out / "manifest.json", json_text(manifest_of(config, setup)));

    for (const std::string set : {"train", "train_small", "test"})
    {
        const std::size_t n =
            set == "train" ? config.train_size() : (set == "test" ? config.test_size() : config.small_size());
        std::vector<RaySample> rays;
        const Dataset d = generate(setup, n, derive_seed(config.seed, {dataset_stream(set)}),
                                   config.write_rays ? &rays : nullptr);
        save_dataset(dataset_path(config, set), d);

        std::size_t los = 0, portrait = 0;
        for (const auto &s : d.samples)
        {
            los += s.los;
            portrait += s.mode == OrientationMode::portrait;
        }
        log << set << ": " << n << " samples (" << portrait << " portrait, " << los << " LOS), N_AP " << d.n_ap
            << ", N_UT " << d.n_ut << '\n';

        if (config.write_rays)
        {
            const bool binary = config.ray_format == "binary";
            const fs::path rp = out / ("rays_" + set + (binary ? ".bray" : ".csv"));
            std::ofstream rf(rp, std::ios::binary);
            if (!rf)
                throw std::runtime_error("Cannot write '" + rp.string() + "'.");
            if (binary)
                write_rays_binary(rf, rays);
            else
                write_rays_csv(rf, rays);
        }
    }
}

void cmd_train(const RunConfig &config, const std::vector<Method> &methods, std::ostream &log)
{
    config.validate();
    const SimSetup setup = config.setup();
    check_manifest(config, setup);
    const Dataset data = load_set(config, setup, train_file_set(config));
    const TrainingData td = training_data(data, setup);
    ensure_dir(model_dir(config));

    const int n_ap = data.n_ap, n_ut = data.n_ut, n_p = setup.design.n_panels();
    const int nh = config.n_hidden, w = config.width;
    auto has = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };

    log << "training on " << data.size() << " samples (" << config.train_set << " set)\n";
    if (has(Method::sn))
    {
        MlpModel sn = build_sn(n_ap, n_ut, nh, w, derive_seed(config.seed, {20}));
        log << "sn parameters: " << sn.parameter_count() << '\n';
        save_trained(config, "sn", fit(std::move(sn), td.sn, td.pair_labels, config.train_config(30)), log);
    }
    if (has(Method::mnps) || has(Method::mnbs))
    {
        // NET_I is shared by both multi-network designs
        MlpModel net1 = build_net1(n_ap, nh, w, derive_seed(config.seed, {21}));
        const std::size_t c1 = net1.parameter_count();
        const Trained t1 = fit(std::move(net1), td.net1, td.ap_labels, config.train_config(31));
        save_trained(config, "net1", t1, log);
        if (has(Method::mnps))
        {
            MlpModel net2 = build_net2(n_ap, n_p, nh, w, derive_seed(config.seed, {22}));
            const std::size_t c2 = net2.parameter_count();
            log << "mnps parameters: " << c1 + c2 << " (net1 " << c1 << " + net2 " << c2 << ")\n";
            save_trained(config, "net2_ps", fit(std::move(net2), td.net2, td.panel_labels, config.train_config(32)),
                         log);
        }
        if (has(Method::mnbs))
        {
            MlpModel net2 = build_net2(n_ap, n_ut, nh, w, derive_seed(config.seed, {23}));
            const std::size_t c2 = net2.parameter_count();
            log << "mnbs parameters: " << c1 + c2 << " (net1 " << c1 << " + net2 " << c2 << ")\n";
            save_trained(config, "net2_bs", fit(std::move(net2), td.net2, td.beam_labels, config.train_config(33)),
                         log);
        }
    }
}

int cmd_eval(const RunConfig &config, std::ostream &log)
{
    config.validate();
    const SimSetup setup = config.setup();
    check_manifest(config, setup);
    const Dataset train_set = load_set(config, setup, train_file_set(config));
    const Dataset test = load_set(config, setup, "test");

    auto has = [&](Method m) { return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end(); };
    MlpModel sn, net1, net2_ps, net2_bs;
    GifpTable gifp;
    MethodModels models;
    if (has(Method::sn))
    {
        sn = load_required(config, "sn");
        models.sn = &sn;
    }
    if (has(Method::mnps) || has(Method::mnbs))
    {
        net1 = load_required(config, "net1");
        models.net1 = &net1;
    }
    if (has(Method::mnps))
    {
        net2_ps = load_required(config, "net2_ps");
        models.net2_ps = &net2_ps;
    }
    if (has(Method::mnbs))
    {
        net2_bs = load_required(config, "net2_bs");
        models.net2_bs = &net2_bs;
    }
    if (has(Method::gifp))
    {
        std::vector<GifpSample> samples;
        for (const auto &s : train_set.samples)
            samples.push_back({s.pose, s.mode, s.label.ap, s.label.ut});
        gifp = gifp_build(samples, setup.scene.room, train_set.n_ap, train_set.n_ut, config.gifp_config());
        models.gifp = &gifp;
    }

    SweepConfig sc;
    sc.methods = config.methods;
    sc.n_b = config.n_b;
    sc.n_rf = config.n_rf;
    sc.top_k = config.top_k;
    sc.n_train = train_set.size();
    sc.seed = config.seed;
    const EvalResult result = sweep(setup, test, models, sc);

    const fs::path path = fs::path(config.out) / ("results_" + config.train_set + ".csv");
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("Cannot write '" + path.string() + "'.");
        result.write_csv(out);
    }

    log << std::left << std::setw(6) << "method" << std::right << std::setw(6) << "n_rf" << std::setw(6) << "N_b"
        << std::setw(8) << "slots" << std::setw(14) << "misalignment" << std::setw(10) << "SE_eff" << '\n';
    for (const auto &r : result.rows)
        log << std::left << std::setw(6) << r.method << std::right << std::setw(6) << r.n_rf << std::setw(6) << r.n_b
            << std::setw(8) << std::fixed << std::setprecision(1) << r.slots << std::setw(14) << std::setprecision(4)
            << r.misalignment << std::setw(10) << std::setprecision(3) << r.mean_se_eff << '\n';
    log.unsetf(std::ios::floatfield);
    log << "results written to " << path.string() << '\n';

    if (!result.violations.empty())
    {
        for (const auto &v : result.violations)
            log << "invariant violated: " << v << '\n';
        return 2;
    }
    return 0;
}

void cmd_coverage(const RunConfig &config, std::ostream &log)
{
    config.validate();
    ensure_dir(config.out);
    const SimSetup setup = config.setup();
    const CoverageMap map = spherical_coverage(setup.design, setup.pattern, config.coverage_step_deg);
    const fs::path path = fs::path(config.out) / ("coverage_" + setup.design.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write '" + path.string() + "'.");
    map.write_csv(out);
    log << setup.design.name << ": " << map.size() << " directions, 5th percentile gain " << std::fixed
        << std::setprecision(2) << map.percentile_db(5.0) << " dB, median " << map.percentile_db(50.0) << " dB\n";
    log.unsetf(std::ios::floatfield);
    log << "coverage written to " << path.string() << '\n';
}

} // namespace beamsim
