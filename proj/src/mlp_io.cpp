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

#include "beamsim/binary_io.hpp"
#include "beamsim/mlp.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace beamsim
{

static constexpr std::uint32_t model_version = 1;

// Layout: "BMLP1", u32 version, u8 merge, u8 trained, u32 layer count, then per layer
// u8 kind, u8 activation, u32 in_dim, u32 out_dim, weights (column-major f64), bias (f64)
void save_model(std::ostream &out, const MlpModel &model)
{
    model.validate();
    out.write("BMLP1", 5);
    io::put<std::uint32_t>(out, model_version);
    io::put<std::uint8_t>(out, model.merge ? 1 : 0);
    io::put<std::uint8_t>(out, model.trained ? 1 : 0);
    io::put<std::uint32_t>(out, std::uint32_t(model.layers.size()));
    for (const auto &l : model.layers)
    {
        io::put<std::uint8_t>(out, std::uint8_t(l.spec.kind));
        io::put<std::uint8_t>(out, std::uint8_t(l.spec.activation));
        io::put<std::uint32_t>(out, std::uint32_t(l.spec.in_dim));
        io::put<std::uint32_t>(out, std::uint32_t(l.spec.out_dim));
        for (Eigen::Index k = 0; k < l.weight.size(); ++k)
            io::put<double>(out, l.weight.data()[k]);
        for (Eigen::Index k = 0; k < l.bias.size(); ++k)
            io::put<double>(out, l.bias[k]);
    }
    if (!out)
        throw std::runtime_error("Failed to write model.");
}

MlpModel load_model(std::istream &in)
{
    io::expect_magic(in, "BMLP1");
    if (io::get<std::uint32_t>(in) != model_version)
        throw std::runtime_error("Unsupported model file version.");
    MlpModel m;
    m.merge = io::get<std::uint8_t>(in) != 0;
    m.trained = io::get<std::uint8_t>(in) != 0;
    const auto n_layers = io::get<std::uint32_t>(in);
    if (n_layers > 1024)
        throw std::runtime_error("Corrupt model file: layer count.");
    for (std::uint32_t k = 0; k < n_layers; ++k)
    {
        Layer l;
        const auto kind = io::get<std::uint8_t>(in);
        const auto act = io::get<std::uint8_t>(in);
        if (kind > 1 || act > 1)
            throw std::runtime_error("Corrupt model file: layer kind.");
        l.spec.kind = LayerKind(kind);
        l.spec.activation = Activation(act);
        l.spec.in_dim = int(io::get<std::uint32_t>(in));
        l.spec.out_dim = int(io::get<std::uint32_t>(in));
        if (l.spec.in_dim < 1 || l.spec.out_dim < 1 || l.spec.in_dim > (1 << 20) || l.spec.out_dim > (1 << 20))
            throw std::runtime_error("Corrupt model file: layer size.");
        l.weight.resize(l.spec.out_dim, l.spec.in_dim);
        for (Eigen::Index i = 0; i < l.weight.size(); ++i)
            l.weight.data()[i] = io::get<double>(in);
        if (l.spec.kind == LayerKind::dense)
        {
            l.bias.resize(l.spec.out_dim);
            for (Eigen::Index i = 0; i < l.bias.size(); ++i)
                l.bias[i] = io::get<double>(in);
        }
        m.layers.push_back(std::move(l));
    }
    try
    {
        m.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw std::runtime_error(std::string("Corrupt model file: ") + e.what());
    }
    if (!m.all_finite())
        throw std::runtime_error("Corrupt model file: non-finite weights.");
    return m;
}

void save_model(const std::string &path, const MlpModel &model)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write model file '" + path + "'.");
    save_model(out, model);
}

MlpModel load_model(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("Cannot open model file '" + path + "'.");
    return load_model(in);
}

void write_loss_csv(std::ostream &out, const TrainReport &report)
{
    out << "epoch,train_loss,val_loss\n";
    for (const auto &e : report.curve)
    {
        out << e.epoch << ',' << io::format_double(e.train_loss) << ',';
        if (!std::isnan(e.val_loss))
            out << io::format_double(e.val_loss);
        out << '\n';
    }
}

} // namespace beamsim
