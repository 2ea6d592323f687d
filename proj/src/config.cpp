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

#include "beamsim/config.hpp"
#include "beamsim/binary_io.hpp"
#include "beamsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beamsim
{

namespace
{

std::string trim(const std::string &s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    std::string t = s.substr(a, b - a + 1);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
        t = t.substr(1, t.size() - 2);
    return t;
}

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

double to_double(const std::string &key, const std::string &v)
{
    double d = 0.0;
    if (!io::parse_double(trim(v), d) || !std::isfinite(d))
        throw std::invalid_argument("Config key '" + key + "': expected a number, got '" + v + "'.");
    return d;
}

template <typename Int>
Int to_int(const std::string &key, const std::string &v)
{
    Int i = 0;
    if (!io::parse_int(trim(v), i))
        throw std::invalid_argument("Config key '" + key + "': expected an integer, got '" + v + "'.");
    return i;
}

bool to_bool(const std::string &key, const std::string &v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw std::invalid_argument("Config key '" + key + "': expected true or false.");
}

Vec3 to_vec3(const std::string &key, const std::string &v)
{
    const auto parts = split_list(v);
    if (parts.size() != 3)
        throw std::invalid_argument("Config key '" + key + "': expected three comma-separated numbers.");
    return Vec3(to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2]));
}

std::string fmt(double v)
{
    return io::format_double(v);
}

std::string fmt(const Vec3 &v)
{
    return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z());
}

template <typename T, typename F>
std::string join(const std::vector<T> &items, F f)
{
    std::string s;
    for (std::size_t k = 0; k < items.size(); ++k)
        s += (k ? "," : "") + f(items[k]);
    return s;
}

std::size_t scaled(std::size_t explicit_size, double base, double scale)
{
    if (explicit_size > 0)
        return explicit_size;
    return std::max<std::size_t>(1, std::size_t(std::llround(base * scale)));
}

} // namespace

std::vector<int> parse_int_list(const std::string &text)
{
    std::vector<int> out;
    for (const auto &s : split_list(text))
        out.push_back(to_int<int>("list", s));
    if (out.empty())
        throw std::invalid_argument("Empty list.");
    return out;
}

std::vector<Method> parse_method_list(const std::string &text)
{
    std::vector<Method> out;
    for (const auto &s : split_list(text))
        out.push_back(method_from_string(s));
    if (out.empty())
        throw std::invalid_argument("Empty method list.");
    return out;
}

std::size_t RunConfig::train_size() const
{
    return scaled(n_train, 56000.0, scale);
}

std::size_t RunConfig::small_size() const
{
    return scaled(n_small, 560.0, scale);
}

std::size_t RunConfig::test_size() const
{
    return scaled(n_test, 14000.0, scale);
}

SimSetup RunConfig::setup() const
{
    SimSetup s;
    s.scene = Scene::living_room();
    s.scene.room = room;
    s.scene.ap_pose.position = ap_position;
    s.scene.max_order = max_order;
    s.scene.reflection_loss_db = reflection_loss_db;
    s.scene.carrier_hz = carrier_ghz * 1e9;
    const bool is_file = design.size() > 5 && design.substr(design.size() - 5) == ".json";
    s.design = is_file ? load_design_file(design) : design_by_name(design);
    s.budget.p_ap_dbm = p_ap_dbm;
    s.budget.sigma_n_dbm = sigma_n_dbm;
    s.region_lo = region_lo;
    s.region_hi = region_hi;
    return s;
}

TrainConfig RunConfig::train_config(std::uint64_t stream) const
{
    TrainConfig t;
    t.learning_rate = learning_rate;
    t.batch_size = batch_size;
    t.max_epochs = max_epochs;
    t.patience = patience;
    t.validation_fraction = validation_fraction;
    t.seed = derive_seed(seed, {stream});
    return t;
}

GifpConfig RunConfig::gifp_config() const
{
    GifpConfig g;
    g.cell_m = gifp_cell_m;
    g.alpha_sectors = gifp_sectors;
    g.min_samples = gifp_min_samples;
    return g;
}

void RunConfig::validate() const
{
    auto fail = [](const std::string &key, const std::string &why)
    { throw std::invalid_argument("Config key '" + key + "': " + why); };
    if (design.empty())
        fail("design", "must not be empty");
    if (out.empty())
        fail("out", "must not be empty");
    if (!(scale > 0.0 && scale <= 10.0))
        fail("scale", "must lie in (0, 10]");
    if (n_hidden < 1)
        fail("n_hidden", "must be at least 1");
    if (width < 2 || width % 2 != 0)
        fail("width", "must be even and at least 2");
    if (!(learning_rate > 0.0 && learning_rate < 1.0))
        fail("learning_rate", "must lie in (0, 1)");
    if (batch_size < 1)
        fail("batch_size", "must be at least 1");
    if (max_epochs < 0)
        fail("max_epochs", "must be non-negative");
    if (patience < 1)
        fail("patience", "must be at least 1");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
        fail("validation_fraction", "must lie in [0, 1)");
    if (methods.empty())
        fail("methods", "must not be empty");
    if (n_b.empty())
        fail("n_b", "must not be empty");
    for (int b : n_b)
        if (b < 1 || b > 200)
            fail("n_b", "budgets must lie in [1, 200]");
    if (n_rf.empty())
        fail("n_rf", "must not be empty");
    for (int r : n_rf)
        if (r < 1)
            fail("n_rf", "must be at least 1");
    if (top_k == 0 || top_k < -1)
        fail("top_k", "must be -1 or positive");
    if (!(coverage_step_deg > 0.0 && coverage_step_deg <= 90.0))
        fail("coverage_step_deg", "must lie in (0, 90]");
    if (ray_format != "csv" && ray_format != "binary")
        fail("ray_format", "must be csv or binary");
    if (train_set != "large" && train_set != "small")
        fail("train_set", "must be large or small");

    const SimSetup s = setup();
    try
    {
        s.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw std::invalid_argument(std::string("Config scene: ") + e.what());
    }
    for (int r : n_rf)
        if (r > s.design.n_panels())
            fail("n_rf", "exceeds the number of panels");
    gifp_config().validate();
}

void RunConfig::set(const std::string &key, const std::string &raw)
{
    const std::string v = trim(raw);
    if (key == "seed")
        seed = to_int<std::uint64_t>(key, v);
    else if (key == "design")
        design = v;
    else if (key == "out")
        out = v;
    else if (key == "scale")
        scale = to_double(key, v);
    else if (key == "n_train")
        n_train = to_int<std::size_t>(key, v);
    else if (key == "n_small")
        n_small = to_int<std::size_t>(key, v);
    else if (key == "n_test")
        n_test = to_int<std::size_t>(key, v);
    else if (key == "room")
        room = to_vec3(key, v);
    else if (key == "ap_position")
        ap_position = to_vec3(key, v);
    else if (key == "region_lo")
        region_lo = to_vec3(key, v);
    else if (key == "region_hi")
        region_hi = to_vec3(key, v);
    else if (key == "max_order")
        max_order = to_int<int>(key, v);
    else if (key == "reflection_loss_db")
        reflection_loss_db = to_double(key, v);
    else if (key == "carrier_ghz")
        carrier_ghz = to_double(key, v);
    else if (key == "p_ap_dbm")
        p_ap_dbm = to_double(key, v);
    else if (key == "sigma_n_dbm")
        sigma_n_dbm = to_double(key, v);
    else if (key == "n_hidden")
        n_hidden = to_int<int>(key, v);
    else if (key == "width")
        width = to_int<int>(key, v);
    else if (key == "learning_rate")
        learning_rate = to_double(key, v);
    else if (key == "batch_size")
        batch_size = to_int<int>(key, v);
    else if (key == "max_epochs")
        max_epochs = to_int<int>(key, v);
    else if (key == "patience")
        patience = to_int<int>(key, v);
    else if (key == "validation_fraction")
        validation_fraction = to_double(key, v);
    else if (key == "methods")
        methods = parse_method_list(v);
    else if (key == "n_b")
        n_b = parse_int_list(v);
    else if (key == "n_rf")
        n_rf = parse_int_list(v);
    else if (key == "top_k")
        top_k = to_int<int>(key, v);
    else if (key == "gifp_cell_m")
        gifp_cell_m = to_double(key, v);
    else if (key == "gifp_sectors")
        gifp_sectors = to_int<int>(key, v);
    else if (key == "gifp_min_samples")
        gifp_min_samples = to_int<int>(key, v);
    else if (key == "coverage_step_deg")
        coverage_step_deg = to_double(key, v);
    else if (key == "write_rays")
        write_rays = to_bool(key, v);
    else if (key == "ray_format")
        ray_format = v;
    else if (key == "train_set")
        train_set = v;
    else
        throw std::invalid_argument("Unknown config key '" + key + "'.");
}

std::string RunConfig::to_text() const
{
    std::ostringstream o;
    o << "seed = " << seed << '\n'
      << "design = " << design << '\n'
      << "out = " << out << '\n'
      << "scale = " << fmt(scale) << '\n'
      << "n_train = " << n_train << '\n'
      << "n_small = " << n_small << '\n'
      << "n_test = " << n_test << '\n'
      << "room = " << fmt(room) << '\n'
      << "ap_position = " << fmt(ap_position) << '\n'
      << "region_lo = " << fmt(region_lo) << '\n'
      << "region_hi = " << fmt(region_hi) << '\n'
      << "max_order = " << max_order << '\n'
      << "reflection_loss_db = " << fmt(reflection_loss_db) << '\n'
      << "carrier_ghz = " << fmt(carrier_ghz) << '\n'
      << "p_ap_dbm = " << fmt(p_ap_dbm) << '\n'
      << "sigma_n_dbm = " << fmt(sigma_n_dbm) << '\n'
      << "n_hidden = " << n_hidden << '\n'
      << "width = " << width << '\n'
      << "learning_rate = " << fmt(learning_rate) << '\n'
      << "batch_size = " << batch_size << '\n'
      << "max_epochs = " << max_epochs << '\n'
      << "patience = " << patience << '\n'
      << "validation_fraction = " << fmt(validation_fraction) << '\n'
      << "methods = " << join(methods, [](Method m) { return to_string(m); }) << '\n'
      << "n_b = " << join(n_b, [](int v) { return std::to_string(v); }) << '\n'
      << "n_rf = " << join(n_rf, [](int v) { return std::to_string(v); }) << '\n'
      << "top_k = " << top_k << '\n'
      << "gifp_cell_m = " << fmt(gifp_cell_m) << '\n'
      << "gifp_sectors = " << gifp_sectors << '\n'
      << "gifp_min_samples = " << gifp_min_samples << '\n'
      << "coverage_step_deg = " << fmt(coverage_step_deg) << '\n'
      << "write_rays = " << (write_rays ? "true" : "false") << '\n'
      << "ray_format = " << ray_format << '\n'
      << "train_set = " << train_set << '\n';
    return o.str();
}

RunConfig parse_config(const std::string &text)
{
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("Config line " + std::to_string(line_no) + ": expected key = value.");
        c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("Cannot open config file '" + path + "'.");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace beamsim
