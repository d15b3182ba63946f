// SPDX-License-Identifier: Apache-2.0
//
// Embedding network on scattering features: channel attention gate, two strided 3x3
// convolutions, global mean, affine head and L2 normalization. Supervised contrastive
// loss with its analytic gradient, augmentation, and the Adam training loop.

#pragma once

#include "awsp/common.hpp"
#include "awsp/scattering.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace awsp {

using Embedding = Eigen::VectorXd;

struct EncoderShape {
    std::size_t in_channels = 0;
    std::size_t reduction = 4;
    std::size_t conv1 = 32;
    std::size_t conv2 = 64;
    std::size_t embedding = 64;

    std::size_t hidden() const { return std::max<std::size_t>(1, in_channels / reduction); }
    void validate() const;
};

// Conv weights are stored [out][ky][kx][in]; affine weights [out][in].
struct EncoderParams {
    EncoderShape shape;
    std::vector<double> att_w1, att_b1, att_w2, att_b2;
    std::vector<double> conv1_w, conv1_b, conv2_w, conv2_b;
    std::vector<double> head_w, head_b;

    // He-normal weights, zero biases.
    static EncoderParams init(const EncoderShape& shape, std::uint64_t seed);
    static EncoderParams zeros(const EncoderShape& shape);

    struct Tensor {
        std::string name;
        std::vector<std::size_t> dims;
        std::vector<double>* values;
    };
    std::vector<Tensor> tensors();
    std::vector<Tensor> tensors() const { return const_cast<EncoderParams*>(this)->tensors(); }
    std::size_t size() const;
    bool all_finite() const;
};

// Per-channel gates in (0, 1).
std::vector<double> attention_gates(const ScatterFeatures& f, const EncoderParams& p);
ScatterFeatures attention_gate(const ScatterFeatures& f, const EncoderParams& p);

// Unit-norm embedding.
Embedding embed_forward(const ScatterFeatures& f, const EncoderParams& p);

// Head output before normalization, with everything needed to backpropagate.
struct ForwardCache {
    std::vector<double> descriptor, hidden_pre, gate;
    RealMatrix input;        // positions x channels
    RealMatrix col1, pre1;   // im2col of gated input, conv1 pre-activation
    RealMatrix col2, pre2;
    Eigen::VectorXd pooled;
    Embedding raw;
    std::size_t rows = 0, cols = 0, rows1 = 0, cols1 = 0;
};

ForwardCache forward_cache(const ScatterFeatures& f, const EncoderParams& p);

// Accumulates d(loss)/d(params) into grad given d(loss)/d(raw head output).
void backward(const ForwardCache& cache, const EncoderParams& p, const Embedding& d_raw, EncoderParams& grad);

// Supervised contrastive loss, summed over anchors. Rows of `raw` are normalized inside;
// the gradient is with respect to the unnormalized rows.
struct SclResult {
    double loss = 0.0;
    RealMatrix grad;
};

SclResult scl_loss(const RealMatrix& raw, std::span<const int> labels, double temperature);

struct TrainConfig {
    std::size_t batch_size = 64;
    std::size_t epochs = 50;
    double learning_rate = 5e-4;
    double temperature = 0.07;
    double augment_noise_sigma = 0.1;
    std::size_t max_shift = 8;
    std::size_t views = 3; // original plus augmentations per sample
    std::uint64_t seed = 0;

    void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

// Complex Gaussian noise at sigma * RMS, then a circular fast-time shift in [-max_shift, max_shift].
PulseMatrix augment(const PulseMatrix& sample, double sigma, std::size_t max_shift, std::uint64_t draw_seed);

// Feature views per sample, stored as float32 to keep the training cache small.
struct ViewSet {
    std::size_t channels = 0, rows = 0, cols = 0, views = 0;
    std::vector<std::vector<float>> data; // [sample * views + view]
    std::vector<int> labels;              // per sample

    std::size_t samples() const { return labels.size(); }
    ScatterFeatures view(std::size_t sample, std::size_t v) const;
};

struct TrainResult {
    EncoderParams params;
    std::vector<double> epoch_loss; // mean per-anchor loss per epoch
};

// Adam (0.9, 0.999, 1e-8). Per-view work is chunked in a fixed order so the result does
// not depend on the thread count.
TrainResult train_encoder(const ViewSet& views, const TrainConfig& cfg, const EncoderShape& shape);

// Weights: JSON manifest (name, shape, byte offset, dtype) plus a sibling ".bin" blob.
void write_weights(const std::filesystem::path& manifest, const EncoderParams& p);
EncoderParams read_weights(const std::filesystem::path& manifest);

void write_loss_csv(const std::filesystem::path& path, const std::vector<double>& epoch_loss);

} // namespace awsp
