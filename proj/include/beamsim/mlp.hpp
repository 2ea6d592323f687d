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

#ifndef BEAMSIM_MLP_HPP
#define BEAMSIM_MLP_HPP

#include "beamsim/geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace beamsim
{

enum class LayerKind
{
    dense,
    embedding
};

enum class Activation
{
    relu,
    none
};

// Dense: in_dim -> out_dim. Embedding: in_dim is the vocabulary size.
struct LayerSpec
{
    LayerKind kind = LayerKind::dense;
    int in_dim = 1;
    int out_dim = 1;
    Activation activation = Activation::relu;

    void validate() const;
};

// Dense weights are (out x in) with a bias of length out. An embedding stores its table
// transposed, one column per token, and has no bias.
struct Layer
{
    LayerSpec spec;
    Eigen::MatrixXd weight;
    Eigen::VectorXd bias;

    std::size_t parameter_count() const;
};

// Feed-forward classifier with a softmax output.
//
// layers[0] is the dense input layer. With merge set, layers[1] is an embedding whose output is
// concatenated below the input layer output, and a relu is applied to the concatenation.
// The remaining layers form the trunk; the last one produces the logits.
struct MlpModel
{
    std::vector<Layer> layers;
    bool merge = false;
    bool trained = false;

    int input_dim() const;
    int vocabulary() const; // 0 without embedding
    int output_dim() const;
    std::size_t parameter_count() const;
    bool all_finite() const;
    void mark_trained() { trained = true; }
    void validate() const;
};

// Samples are stored as columns; tokens index the embedding (empty without one)
struct ModelInput
{
    Eigen::MatrixXd features;
    std::vector<int> tokens;

    Eigen::Index size() const { return features.cols(); }
};

MlpModel build_sn(int n_ap, int n_ut, int n_hidden, int width, std::uint64_t seed = 0);
MlpModel build_net1(int n_ap, int n_hidden, int width, std::uint64_t seed = 0);
MlpModel build_net2(int n_ap, int out_dim, int n_hidden, int width, std::uint64_t seed = 0);

// Closed-form trainable parameter counts
std::size_t sn_parameter_count(int n_ap, int n_ut, int n_hidden, int width);
std::size_t net1_parameter_count(int n_ap, int n_hidden, int width);
std::size_t net2_parameter_count(int n_ap, int out_dim, int n_hidden, int width);

// Pre-softmax outputs, (output_dim x batch)
Eigen::MatrixXd logits(const MlpModel &model, const ModelInput &input);

// Column-wise softmax of the logits
Eigen::MatrixXd forward(const MlpModel &model, const ModelInput &input);

Eigen::MatrixXd softmax(const Eigen::MatrixXd &logits);

// Gradient of the mean cross-entropy, one entry per layer
struct Gradients
{
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::VectorXd> bias;
};

// Mean cross-entropy over the batch; fills grad when non-null
double loss_and_gradients(const MlpModel &model, const ModelInput &input, const std::vector<int> &labels,
                          Gradients *grad);

// Max relative error between backpropagation and central finite differences (step 1e-6)
double grad_check(const MlpModel &model, const ModelInput &input, const std::vector<int> &labels);

struct TrainConfig
{
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 256;
    int max_epochs = 200;
    double validation_fraction = 0.1;
    int patience = 20;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochLoss
{
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0; // NaN without a validation split
};

struct TrainReport
{
    std::vector<EpochLoss> curve; // entry 0 holds the losses before training
    int best_epoch = 0;
    double final_train_loss = 0.0;
};

// Adam on mean cross-entropy with early stopping; restores the best validation weights
TrainReport train(MlpModel &model, const ModelInput &input, const std::vector<int> &labels,
                  const TrainConfig &config);

// Network inputs scaled to [-1, 1]
Eigen::Matrix<double, 6, 1> encode_pose(const Pose &pose, const Vec3 &room);
Eigen::Vector3d encode_location(const Vec3 &position, const Vec3 &room);

// Binary model file (magic "BMLP1")
void save_model(std::ostream &out, const MlpModel &model);
MlpModel load_model(std::istream &in);
void save_model(const std::string &path, const MlpModel &model);
MlpModel load_model(const std::string &path);

// epoch,train_loss,val_loss
void write_loss_csv(std::ostream &out, const TrainReport &report);

} // namespace beamsim

#endif
