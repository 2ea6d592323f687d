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

#include "beamsim/mlp.hpp"
#include "beamsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace beamsim
{

using Eigen::MatrixXd;
using Eigen::VectorXd;

void LayerSpec::validate() const
{
    if (in_dim < 1 || out_dim < 1)
        throw std::invalid_argument("Layer dimensions must be at least 1.");
    if (kind == LayerKind::embedding && activation != Activation::none)
        throw std::invalid_argument("An embedding layer has no activation.");
}

std::size_t Layer::parameter_count() const
{
    return std::size_t(weight.size()) + std::size_t(bias.size());
}

int MlpModel::input_dim() const
{
    return layers.empty() ? 0 : layers.front().spec.in_dim;
}

int MlpModel::vocabulary() const
{
    return merge ? layers[1].spec.in_dim : 0;
}

int MlpModel::output_dim() const
{
    return layers.empty() ? 0 : layers.back().spec.out_dim;
}

std::size_t MlpModel::parameter_count() const
{
    std::size_t n = 0;
    for (const auto &l : layers)
        n += l.parameter_count();
    return n;
}

bool MlpModel::all_finite() const
{
    for (const auto &l : layers)
        if (!l.weight.allFinite() || !l.bias.allFinite())
            return false;
    return true;
}

static int trunk_start(const MlpModel &m)
{
    return m.merge ? 2 : 1;
}

void MlpModel::validate() const
{
    const int t0 = trunk_start(*this);
    if (layers.empty() || (merge && int(layers.size()) < t0 + 1))
        throw std::invalid_argument("Model needs an input layer and an output layer.");
    for (const auto &l : layers)
    {
        l.spec.validate();
        const bool is_emb = l.spec.kind == LayerKind::embedding;
        if (l.weight.rows() != l.spec.out_dim || l.weight.cols() != l.spec.in_dim)
            throw std::invalid_argument("Layer weight shape does not match its spec.");
        if (l.bias.size() != (is_emb ? 0 : l.spec.out_dim))
            throw std::invalid_argument("Layer bias shape does not match its spec.");
    }
    if (layers[0].spec.kind != LayerKind::dense)
        throw std::invalid_argument("First layer must be dense.");
    int width = layers[0].spec.out_dim;
    if (merge)
    {
        if (layers[1].spec.kind != LayerKind::embedding)
            throw std::invalid_argument("Merged model needs an embedding as second layer.");
        if (layers[0].spec.activation != Activation::none)
            throw std::invalid_argument("Merged branches are activated after concatenation.");
        width += layers[1].spec.out_dim;
    }
    for (std::size_t k = std::size_t(t0); k < layers.size(); ++k)
    {
        if (layers[k].spec.kind != LayerKind::dense)
            throw std::invalid_argument("Trunk layers must be dense.");
        if (layers[k].spec.in_dim != width)
            throw std::invalid_argument("Layer input width does not match the previous layer.");
        width = layers[k].spec.out_dim;
    }
    if (layers.back().spec.activation != Activation::none)
        throw std::invalid_argument("Output layer feeds the softmax and has no activation.");
}

// He-uniform weights, zero biases
static Layer make_dense(int in, int out, Activation act, Rng &rng)
{
    Layer l;
    l.spec = {LayerKind::dense, in, out, act};
    const double limit = std::sqrt(6.0 / in);
    std::uniform_real_distribution<double> u(-limit, limit);
    l.weight.resize(out, in);
    for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            l.weight(r, c) = u(rng);
    l.bias = VectorXd::Zero(out);
    return l;
}

static Layer make_embedding(int vocab, int out, Rng &rng)
{
    Layer l;
    l.spec = {LayerKind::embedding, vocab, out, Activation::none};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    l.weight.resize(out, vocab);
    for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            l.weight(r, c) = u(rng);
    return l;
}

static void check_sizes(std::initializer_list<int> args)
{
    for (int a : args)
        if (a < 1)
            throw std::invalid_argument("Network sizes must be at least 1.");
}

static void append_trunk(MlpModel &m, int n_hidden, int width, int out, Rng &rng)
{
    for (int k = 1; k < n_hidden; ++k)
        m.layers.push_back(make_dense(width, width, Activation::relu, rng));
    m.layers.push_back(make_dense(width, out, Activation::none, rng));
}

MlpModel build_sn(int n_ap, int n_ut, int n_hidden, int width, std::uint64_t seed)
{
    check_sizes({n_ap, n_ut, n_hidden, width});
    Rng rng(derive_seed(seed, {0x5e}));
    MlpModel m;
    m.layers.push_back(make_dense(6, width, Activation::relu, rng));
    append_trunk(m, n_hidden, width, n_ap * n_ut, rng);
    return m;
}

MlpModel build_net1(int n_ap, int n_hidden, int width, std::uint64_t seed)
{
    check_sizes({n_ap, n_hidden, width});
    Rng rng(derive_seed(seed, {0x01}));
    MlpModel m;
    m.layers.push_back(make_dense(3, width, Activation::relu, rng));
    append_trunk(m, n_hidden, width, n_ap, rng);
    return m;
}

MlpModel build_net2(int n_ap, int out_dim, int n_hidden, int width, std::uint64_t seed)
{
    check_sizes({n_ap, out_dim, n_hidden, width});
    if (width % 2 != 0)
        throw std::invalid_argument("Hidden width must be even to split between the two branches.");
    Rng rng(derive_seed(seed, {0x02}));
    MlpModel m;
    m.merge = true;
    m.layers.push_back(make_dense(6, width / 2, Activation::none, rng));
    m.layers.push_back(make_embedding(n_ap, width / 2, rng));
    append_trunk(m, n_hidden, width, out_dim, rng);
    return m;
}

std::size_t sn_parameter_count(int n_ap, int n_ut, int n_hidden, int width)
{
    const std::size_t h = std::size_t(width);
    return 7 * h + std::size_t(n_hidden - 1) * (h + 1) * h + (h + 1) * std::size_t(n_ut) * std::size_t(n_ap);
}

std::size_t net1_parameter_count(int n_ap, int n_hidden, int width)
{
    const std::size_t h = std::size_t(width);
    return 4 * h + std::size_t(n_hidden - 1) * (h + 1) * h + (h + 1) * std::size_t(n_ap);
}

std::size_t net2_parameter_count(int n_ap, int out_dim, int n_hidden, int width)
{
    const std::size_t h = std::size_t(width);
    return (7 + std::size_t(n_ap)) * h / 2 + std::size_t(n_hidden - 1) * (h + 1) * h + (h + 1) * std::size_t(out_dim);
}

namespace
{

struct Cache
{
    std::vector<MatrixXd> pre;  // one per activation stage
    std::vector<MatrixXd> post;
};

void apply(Activation act, const MatrixXd &z, MatrixXd &h)
{
    if (act == Activation::relu)
        h = z.cwiseMax(0.0);
    else
        h = z;
}

void check_input(const MlpModel &model, const ModelInput &input)
{
    if (model.layers.empty())
        throw std::invalid_argument("Empty model.");
    if (input.features.rows() != model.input_dim())
        throw std::invalid_argument("Input feature dimension does not match the model.");
    if (model.merge)
    {
        if (Eigen::Index(input.tokens.size()) != input.features.cols())
            throw std::invalid_argument("One embedding token per sample is required.");
        for (int t : input.tokens)
            if (t < 0 || t >= model.vocabulary())
                throw std::invalid_argument("Embedding token out of range.");
    }
    else if (!input.tokens.empty())
        throw std::invalid_argument("Model has no embedding input.");
}

// Returns logits; the cache keeps every stage for backpropagation
MatrixXd run(const MlpModel &model, const ModelInput &input, Cache *cache)
{
    check_input(model, input);
    const Layer &first = model.layers[0];
    MatrixXd z(first.spec.out_dim + (model.merge ? model.layers[1].spec.out_dim : 0), input.size());
    z.topRows(first.spec.out_dim).noalias() = first.weight * input.features;
    z.topRows(first.spec.out_dim).colwise() += first.bias;
    Activation act = first.spec.activation;
    if (model.merge)
    {
        const Layer &emb = model.layers[1];
        for (Eigen::Index b = 0; b < input.size(); ++b)
            z.col(b).bottomRows(emb.spec.out_dim) = emb.weight.col(input.tokens[std::size_t(b)]);
        act = Activation::relu;
    }
    MatrixXd h;
    apply(act, z, h);
    if (cache)
    {
        cache->pre.push_back(z);
        cache->post.push_back(h);
    }

    for (std::size_t k = std::size_t(trunk_start(model)); k < model.layers.size(); ++k)
    {
        const Layer &l = model.layers[k];
        MatrixXd zk = l.weight * h;
        zk.colwise() += l.bias;
        apply(l.spec.activation, zk, h);
        if (cache)
        {
            cache->pre.push_back(std::move(zk));
            cache->post.push_back(h);
        }
    }
    return h;
}

} // namespace

MatrixXd logits(const MlpModel &model, const ModelInput &input)
{
    return run(model, input, nullptr);
}

MatrixXd softmax(const MatrixXd &z)
{
    MatrixXd p(z.rows(), z.cols());
    for (Eigen::Index b = 0; b < z.cols(); ++b)
    {
        const double m = z.col(b).maxCoeff();
        p.col(b) = (z.col(b).array() - m).exp();
        p.col(b) /= p.col(b).sum();
    }
    return p;
}

MatrixXd forward(const MlpModel &model, const ModelInput &input)
{
    return softmax(logits(model, input));
}

double loss_and_gradients(const MlpModel &model, const ModelInput &input, const std::vector<int> &labels,
                          Gradients *grad)
{
    if (Eigen::Index(labels.size()) != input.size() || labels.empty())
        throw std::invalid_argument("One label per sample is required.");
    for (int y : labels)
        if (y < 0 || y >= model.output_dim())
            throw std::invalid_argument("Label out of range.");

    Cache cache;
    const MatrixXd z = run(model, input, grad ? &cache : nullptr);
    const Eigen::Index n = input.size();

    // Log-softmax for a stable loss
    MatrixXd delta(z.rows(), z.cols());
    double loss = 0.0;
    for (Eigen::Index b = 0; b < n; ++b)
    {
        const double m = z.col(b).maxCoeff();
        const double lse = m + std::log((z.col(b).array() - m).exp().sum());
        const int y = labels[std::size_t(b)];
        loss += lse - z(y, b);
        if (grad)
        {
            delta.col(b) = (z.col(b).array() - lse).exp();
            delta(y, b) -= 1.0;
        }
    }
    loss /= double(n);
    if (!grad)
        return loss;

    delta /= double(n);
    const std::size_t L = model.layers.size();
    const std::size_t t0 = std::size_t(trunk_start(model));
    grad->weight.assign(L, MatrixXd());
    grad->bias.assign(L, VectorXd());

    // cache index s corresponds to layer t0 - 1 + s for s >= 1, stage 0 is the input stage
    for (std::size_t k = L; k-- > t0;)
    {
        const std::size_t s = k - t0 + 1;
        const MatrixXd &h_prev = cache.post[s - 1];
        grad->weight[k].noalias() = delta * h_prev.transpose();
        grad->bias[k] = delta.rowwise().sum();
        MatrixXd back = model.layers[k].weight.transpose() * delta;
        const Activation act = s - 1 == 0 ? (model.merge ? Activation::relu : model.layers[0].spec.activation)
                                          : model.layers[t0 + s - 2].spec.activation;
        if (act == Activation::relu)
            back.array() *= (cache.pre[s - 1].array() > 0.0).cast<double>();
        delta = std::move(back);
    }

    const Layer &first = model.layers[0];
    const int d = first.spec.out_dim;
    grad->weight[0].noalias() = delta.topRows(d) * input.features.transpose();
    grad->bias[0] = delta.topRows(d).rowwise().sum();
    if (model.merge)
    {
        const Layer &emb = model.layers[1];
        grad->weight[1] = MatrixXd::Zero(emb.spec.out_dim, emb.spec.in_dim);
        grad->bias[1] = VectorXd();
        for (Eigen::Index b = 0; b < n; ++b)
            grad->weight[1].col(input.tokens[std::size_t(b)]) += delta.col(b).bottomRows(emb.spec.out_dim);
    }
    return loss;
}

double grad_check(const MlpModel &model, const ModelInput &input, const std::vector<int> &labels)
{
    Gradients g;
    loss_and_gradients(model, input, labels, &g);

    // Near the cube root of machine epsilon, balancing truncation against cancellation
    const double step = 1e-5;
    MlpModel probe = model;
    double worst = 0.0;
    auto compare = [&](double analytic, double &param)
    {
        const double saved = param;
        param = saved + step;
        const double up = loss_and_gradients(probe, input, labels, nullptr);
        param = saved - step;
        const double down = loss_and_gradients(probe, input, labels, nullptr);
        param = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double scale = std::max(std::abs(analytic), std::abs(numeric));
        if (scale > 1e-12)
            worst = std::max(worst, std::abs(analytic - numeric) / scale);
    };

    for (std::size_t k = 0; k < probe.layers.size(); ++k)
    {
        Layer &l = probe.layers[k];
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
                compare(g.weight[k](r, c), l.weight(r, c));
        for (Eigen::Index r = 0; r < l.bias.size(); ++r)
            compare(g.bias[k](r), l.bias(r));
    }
    return worst;
}

void TrainConfig::validate() const
{
    if (!(learning_rate > 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
        !(epsilon > 0.0))
        throw std::invalid_argument("Invalid optimizer settings.");
    if (batch_size < 1 || max_epochs < 0 || patience < 1)
        throw std::invalid_argument("Invalid training schedule.");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
        throw std::invalid_argument("Validation fraction must lie in [0, 1).");
}

static ModelInput gather(const ModelInput &input, const std::vector<int> &labels, const int *idx, std::size_t n,
                         std::vector<int> &batch_labels)
{
    ModelInput b;
    b.features.resize(input.features.rows(), Eigen::Index(n));
    batch_labels.resize(n);
    if (!input.tokens.empty())
        b.tokens.resize(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        b.features.col(Eigen::Index(k)) = input.features.col(idx[k]);
        batch_labels[k] = labels[std::size_t(idx[k])];
        if (!input.tokens.empty())
            b.tokens[k] = input.tokens[std::size_t(idx[k])];
    }
    return b;
}

TrainReport train(MlpModel &model, const ModelInput &input, const std::vector<int> &labels,
                  const TrainConfig &config)
{
    config.validate();
    model.validate();
    if (input.size() == 0)
        throw std::invalid_argument("Cannot train on an empty dataset.");
    if (Eigen::Index(labels.size()) != input.size())
        throw std::invalid_argument("One label per sample is required.");

    Rng rng(derive_seed(config.seed, {0x7a}));
    const std::size_t n = std::size_t(input.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::size_t n_val = std::size_t(std::floor(config.validation_fraction * double(n)));
    if (n_val >= n)
        n_val = 0;
    std::vector<int> train_idx(order.begin(), order.end() - std::ptrdiff_t(n_val));
    const std::vector<int> val_idx(order.end() - std::ptrdiff_t(n_val), order.end());
    std::sort(train_idx.begin(), train_idx.end());

    std::vector<int> train_labels, val_labels;
    const ModelInput train_set = gather(input, labels, train_idx.data(), train_idx.size(), train_labels);
    ModelInput val_set;
    if (n_val > 0)
        val_set = gather(input, labels, val_idx.data(), val_idx.size(), val_labels);

    auto val_loss = [&]()
    {
        return n_val > 0 ? loss_and_gradients(model, val_set, val_labels, nullptr)
                         : std::numeric_limits<double>::quiet_NaN();
    };

    TrainReport report;
    report.curve.push_back({0, loss_and_gradients(model, train_set, train_labels, nullptr), val_loss()});

    const std::size_t L = model.layers.size();
    Gradients m, v;
    for (const auto &l : model.layers)
    {
        m.weight.push_back(MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
        v.weight.push_back(MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
        m.bias.push_back(VectorXd::Zero(l.bias.size()));
        v.bias.push_back(VectorXd::Zero(l.bias.size()));
    }

    MlpModel best = model;
    double best_val = report.curve[0].val_loss;
    report.best_epoch = 0;
    long step = 0;
    std::vector<int> perm(train_idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> batch_labels;
    Gradients g;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch)
    {
        std::shuffle(perm.begin(), perm.end(), rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < perm.size(); start += std::size_t(config.batch_size))
        {
            const std::size_t count = std::min(std::size_t(config.batch_size), perm.size() - start);
            const ModelInput batch = gather(train_set, train_labels, perm.data() + start, count, batch_labels);
            loss_sum += double(count) * loss_and_gradients(model, batch, batch_labels, &g);

            ++step;
            const double c1 = 1.0 - std::pow(config.beta1, double(step));
            const double c2 = 1.0 - std::pow(config.beta2, double(step));
            const double lr = config.learning_rate;
            auto update = [&](auto &param, auto &mom, auto &vel, const auto &grad)
            {
                mom = config.beta1 * mom + (1.0 - config.beta1) * grad;
                vel = config.beta2 * vel + (1.0 - config.beta2) * grad.cwiseAbs2();
                param.array() -= lr * (mom.array() / c1) / ((vel.array() / c2).sqrt() + config.epsilon);
            };
            for (std::size_t k = 0; k < L; ++k)
            {
                update(model.layers[k].weight, m.weight[k], v.weight[k], g.weight[k]);
                if (model.layers[k].bias.size() > 0)
                    update(model.layers[k].bias, m.bias[k], v.bias[k], g.bias[k]);
            }
        }

        const EpochLoss e{epoch, loss_sum / double(perm.size()), val_loss()};
        report.curve.push_back(e);
        if (n_val == 0)
        {
            report.best_epoch = epoch;
            continue;
        }
        if (e.val_loss < best_val)
        {
            best_val = e.val_loss;
            best = model;
            report.best_epoch = epoch;
        }
        else if (epoch - report.best_epoch >= config.patience)
            break;
    }

    if (n_val > 0)
        model = best;
    report.final_train_loss = report.curve[std::size_t(report.best_epoch)].train_loss;
    if (!model.all_finite())
        throw std::runtime_error("Training diverged: non-finite weights.");
    model.mark_trained();
    return report;
}

Eigen::Matrix<double, 6, 1> encode_pose(const Pose &pose, const Vec3 &room)
{
    Eigen::Matrix<double, 6, 1> f;
    f.head<3>() = encode_location(pose.position, room);
    f(3) = pose.rotation.alpha / pi;
    f(4) = 2.0 * pose.rotation.beta / pi;
    f(5) = pose.rotation.gamma / pi - 1.0;
    return f;
}

Eigen::Vector3d encode_location(const Vec3 &position, const Vec3 &room)
{
    return (2.0 * position.cwiseQuotient(room)).array() - 1.0;
}

} // namespace beamsim
