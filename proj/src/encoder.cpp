// SPDX-License-Identifier: Apache-2.0

#include "awsp/encoder.hpp"

#include "awsp/binary_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace awsp {

namespace {

using MapMatrix = Eigen::Map<RealMatrix>;
using ConstMapMatrix = Eigen::Map<const RealMatrix>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::size_t out_extent(std::size_t n) { return (n + 1) / 2; } // 3x3, stride 2, pad 1

// Positions x (9 * channels) patch matrix; column (ky * 3 + kx) * channels + c.
RealMatrix im2col(const RealMatrix& x, std::size_t rows, std::size_t cols) {
    const std::size_t ch = static_cast<std::size_t>(x.cols());
    const std::size_t ro = out_extent(rows), co = out_extent(cols);
    RealMatrix out = RealMatrix::Zero(static_cast<Eigen::Index>(ro * co), static_cast<Eigen::Index>(9 * ch));
    for (std::size_t oy = 0; oy < ro; ++oy)
        for (std::size_t ox = 0; ox < co; ++ox) {
            const auto prow = static_cast<Eigen::Index>(oy * co + ox);
            for (std::size_t ky = 0; ky < 3; ++ky) {
                const auto iy = static_cast<std::ptrdiff_t>(2 * oy + ky) - 1;
                if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(rows)) continue;
                for (std::size_t kx = 0; kx < 3; ++kx) {
                    const auto ix = static_cast<std::ptrdiff_t>(2 * ox + kx) - 1;
                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(cols)) continue;
                    out.row(prow).segment(static_cast<Eigen::Index>((ky * 3 + kx) * ch), static_cast<Eigen::Index>(ch)) =
                        x.row(static_cast<Eigen::Index>(static_cast<std::size_t>(iy) * cols + static_cast<std::size_t>(ix)));
                }
            }
        }
    return out;
}

// Adjoint of im2col.
RealMatrix col2im(const RealMatrix& col, std::size_t rows, std::size_t cols, std::size_t ch) {
    const std::size_t ro = out_extent(rows), co = out_extent(cols);
    RealMatrix x = RealMatrix::Zero(static_cast<Eigen::Index>(rows * cols), static_cast<Eigen::Index>(ch));
    for (std::size_t oy = 0; oy < ro; ++oy)
        for (std::size_t ox = 0; ox < co; ++ox) {
            const auto prow = static_cast<Eigen::Index>(oy * co + ox);
            for (std::size_t ky = 0; ky < 3; ++ky) {
                const auto iy = static_cast<std::ptrdiff_t>(2 * oy + ky) - 1;
                if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(rows)) continue;
                for (std::size_t kx = 0; kx < 3; ++kx) {
                    const auto ix = static_cast<std::ptrdiff_t>(2 * ox + kx) - 1;
                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(cols)) continue;
                    x.row(static_cast<Eigen::Index>(static_cast<std::size_t>(iy) * cols + static_cast<std::size_t>(ix))) +=
                        col.row(prow).segment(static_cast<Eigen::Index>((ky * 3 + kx) * ch), static_cast<Eigen::Index>(ch));
                }
            }
        }
    return x;
}

ConstMapMatrix as_matrix(const std::vector<double>& v, std::size_t r, std::size_t c) {
    return ConstMapMatrix(v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

MapMatrix as_matrix(std::vector<double>& v, std::size_t r, std::size_t c) {
    return MapMatrix(v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

Eigen::Map<const Eigen::RowVectorXd> as_row(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_finite(const RealMatrix& m, const char* layer) {
    if (!all_finite(m)) throw NumericError(std::string("encoder: non-finite values after ") + layer);
}

void fill_normal(std::vector<double>& v, std::size_t n, double stddev, Rng& rng) {
    v.resize(n);
    for (auto& x : v) x = stddev * rng.normal();
}

} // namespace

void EncoderShape::validate() const {
    if (in_channels == 0 || conv1 == 0 || conv2 == 0 || embedding == 0 || reduction == 0)
        throw ConfigError("encoder: all layer widths must be positive");
}

EncoderParams EncoderParams::zeros(const EncoderShape& s) {
    s.validate();
    EncoderParams p;
    p.shape = s;
    const std::size_t c = s.in_channels, h = s.hidden();
    p.att_w1.assign(h * c, 0.0);
    p.att_b1.assign(h, 0.0);
    p.att_w2.assign(c * h, 0.0);
    p.att_b2.assign(c, 0.0);
    p.conv1_w.assign(s.conv1 * 9 * c, 0.0);
    p.conv1_b.assign(s.conv1, 0.0);
    p.conv2_w.assign(s.conv2 * 9 * s.conv1, 0.0);
    p.conv2_b.assign(s.conv2, 0.0);
    p.head_w.assign(s.embedding * s.conv2, 0.0);
    p.head_b.assign(s.embedding, 0.0);
    return p;
}

EncoderParams EncoderParams::init(const EncoderShape& s, std::uint64_t seed) {
    EncoderParams p = zeros(s);
    Rng rng(derive_seed(seed, {0x656e63}));
    const std::size_t c = s.in_channels, h = s.hidden();
    fill_normal(p.att_w1, h * c, std::sqrt(2.0 / double(c)), rng);
    fill_normal(p.att_w2, c * h, std::sqrt(1.0 / double(h)), rng);
    fill_normal(p.conv1_w, s.conv1 * 9 * c, std::sqrt(2.0 / double(9 * c)), rng);
    fill_normal(p.conv2_w, s.conv2 * 9 * s.conv1, std::sqrt(2.0 / double(9 * s.conv1)), rng);
    fill_normal(p.head_w, s.embedding * s.conv2, std::sqrt(1.0 / double(s.conv2)), rng);
    return p;
}

std::vector<EncoderParams::Tensor> EncoderParams::tensors() {
    const std::size_t c = shape.in_channels, h = shape.hidden();
    return {{"attention.fc1.weight", {h, c}, &att_w1},
            {"attention.fc1.bias", {h}, &att_b1},
            {"attention.fc2.weight", {c, h}, &att_w2},
            {"attention.fc2.bias", {c}, &att_b2},
            {"conv1.weight", {shape.conv1, 3, 3, c}, &conv1_w},
            {"conv1.bias", {shape.conv1}, &conv1_b},
            {"conv2.weight", {shape.conv2, 3, 3, shape.conv1}, &conv2_w},
            {"conv2.bias", {shape.conv2}, &conv2_b},
            {"head.weight", {shape.embedding, shape.conv2}, &head_w},
            {"head.bias", {shape.embedding}, &head_b}};
}

std::size_t EncoderParams::size() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) n += t.values->size();
    return n;
}

bool EncoderParams::all_finite() const {
    for (const auto& t : tensors())
        for (double v : *t.values)
            if (!std::isfinite(v)) return false;
    return true;
}

std::vector<double> attention_gates(const ScatterFeatures& f, const EncoderParams& p) {
    return forward_cache(f, p).gate;
}

ScatterFeatures attention_gate(const ScatterFeatures& f, const EncoderParams& p) {
    const auto g = attention_gates(f, p);
    ScatterFeatures out = f;
    for (std::size_t c = 0; c < f.channels; ++c) {
        double* ch = out.channel(c);
        for (std::size_t k = 0; k < f.plane_size(); ++k) ch[k] *= g[c];
    }
    return out;
}

ForwardCache forward_cache(const ScatterFeatures& f, const EncoderParams& p) {
    const auto& s = p.shape;
    if (f.channels != s.in_channels) throw DimensionError("encoder: feature channel count does not match weights");
    if (f.rows == 0 || f.cols == 0) throw DimensionError("encoder: empty feature grid");
    const std::size_t c = s.in_channels, h = s.hidden(), hw = f.plane_size();
    ForwardCache k;
    k.rows = f.rows;
    k.cols = f.cols;
    k.rows1 = out_extent(f.rows);
    k.cols1 = out_extent(f.cols);

    // Squeeze: per-channel spatial mean, then the two-layer gate.
    const ConstMapMatrix planes(f.data.data(), static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(hw));
    const Eigen::VectorXd desc = planes.rowwise().mean();
    k.descriptor.assign(desc.data(), desc.data() + desc.size());
    const Eigen::VectorXd pre_h = as_matrix(p.att_w1, h, c) * desc + as_row(p.att_b1).transpose();
    k.hidden_pre.assign(pre_h.data(), pre_h.data() + pre_h.size());
    const Eigen::VectorXd act_h = pre_h.cwiseMax(0.0);
    const Eigen::VectorXd a = as_matrix(p.att_w2, c, h) * act_h + as_row(p.att_b2).transpose();
    k.gate.resize(c);
    for (std::size_t i = 0; i < c; ++i) k.gate[i] = sigmoid(a(static_cast<Eigen::Index>(i)));

    k.input = planes.transpose();
    RealMatrix gated = k.input;
    for (std::size_t i = 0; i < c; ++i) gated.col(static_cast<Eigen::Index>(i)) *= k.gate[i];
    check_finite(gated, "attention");

    k.col1 = im2col(gated, f.rows, f.cols);
    k.pre1 = k.col1 * as_matrix(p.conv1_w, s.conv1, 9 * c).transpose();
    k.pre1.rowwise() += as_row(p.conv1_b);
    check_finite(k.pre1, "conv1");
    const RealMatrix act1 = k.pre1.cwiseMax(0.0);

    k.col2 = im2col(act1, k.rows1, k.cols1);
    k.pre2 = k.col2 * as_matrix(p.conv2_w, s.conv2, 9 * s.conv1).transpose();
    k.pre2.rowwise() += as_row(p.conv2_b);
    check_finite(k.pre2, "conv2");
    k.pooled = k.pre2.cwiseMax(0.0).colwise().mean().transpose();

    k.raw = as_matrix(p.head_w, s.embedding, s.conv2) * k.pooled + as_row(p.head_b).transpose();
    if (!k.raw.allFinite()) throw NumericError("encoder: non-finite values after head");
    return k;
}

Embedding embed_forward(const ScatterFeatures& f, const EncoderParams& p) {
    const auto k = forward_cache(f, p);
    const double n = k.raw.norm();
    if (!(n > 0.0)) throw NumericError("encoder: zero head output cannot be normalized");
    return k.raw / n;
}

void backward(const ForwardCache& k, const EncoderParams& p, const Embedding& d_raw, EncoderParams& g) {
    const auto& s = p.shape;
    const std::size_t c = s.in_channels, h = s.hidden();

    as_matrix(g.head_w, s.embedding, s.conv2).noalias() += d_raw * k.pooled.transpose();
    as_matrix(g.head_b, 1, s.embedding) += d_raw.transpose();
    const Eigen::VectorXd d_pooled = as_matrix(p.head_w, s.embedding, s.conv2).transpose() * d_raw;

    const double inv2 = 1.0 / static_cast<double>(k.pre2.rows());
    RealMatrix d_pre2(k.pre2.rows(), k.pre2.cols());
    for (Eigen::Index r = 0; r < d_pre2.rows(); ++r)
        for (Eigen::Index j = 0; j < d_pre2.cols(); ++j) d_pre2(r, j) = k.pre2(r, j) > 0.0 ? d_pooled(j) * inv2 : 0.0;
    as_matrix(g.conv2_w, s.conv2, 9 * s.conv1).noalias() += d_pre2.transpose() * k.col2;
    as_matrix(g.conv2_b, 1, s.conv2) += d_pre2.colwise().sum();
    const RealMatrix d_act1 = col2im(d_pre2 * as_matrix(p.conv2_w, s.conv2, 9 * s.conv1), k.rows1, k.cols1, s.conv1);

    const RealMatrix d_pre1 = (k.pre1.array() > 0.0).select(d_act1, 0.0);
    as_matrix(g.conv1_w, s.conv1, 9 * c).noalias() += d_pre1.transpose() * k.col1;
    as_matrix(g.conv1_b, 1, s.conv1) += d_pre1.colwise().sum();
    const RealMatrix d_gated = col2im(d_pre1 * as_matrix(p.conv1_w, s.conv1, 9 * c), k.rows, k.cols, c);

    Eigen::VectorXd d_a(static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < c; ++i) {
        const double d_gate = d_gated.col(static_cast<Eigen::Index>(i)).dot(k.input.col(static_cast<Eigen::Index>(i)));
        d_a(static_cast<Eigen::Index>(i)) = d_gate * k.gate[i] * (1.0 - k.gate[i]);
    }
    Eigen::VectorXd act_h(static_cast<Eigen::Index>(h));
    for (std::size_t i = 0; i < h; ++i) act_h(static_cast<Eigen::Index>(i)) = std::max(k.hidden_pre[i], 0.0);
    as_matrix(g.att_w2, c, h).noalias() += d_a * act_h.transpose();
    as_matrix(g.att_b2, 1, c) += d_a.transpose();
    Eigen::VectorXd d_h = as_matrix(p.att_w2, c, h).transpose() * d_a;
    for (std::size_t i = 0; i < h; ++i)
        if (!(k.hidden_pre[i] > 0.0)) d_h(static_cast<Eigen::Index>(i)) = 0.0;
    const Eigen::Map<const Eigen::VectorXd> desc(k.descriptor.data(), static_cast<Eigen::Index>(c));
    as_matrix(g.att_w1, h, c).noalias() += d_h * desc.transpose();
    as_matrix(g.att_b1, 1, h) += d_h.transpose();
}

SclResult scl_loss(const RealMatrix& raw, std::span<const int> labels, double temperature) {
    const Eigen::Index n = raw.rows();
    if (static_cast<std::size_t>(n) != labels.size()) throw DimensionError("scl_loss: labels do not match rows");
    if (!(temperature > 0.0)) throw ParameterError("scl_loss: temperature must be positive");
    if (n < 2) throw ParameterError("scl_loss: batch needs at least two views");

    Eigen::VectorXd norms = raw.rowwise().norm();
    if (!(norms.minCoeff() > 0.0)) throw NumericError("scl_loss: zero embedding cannot be normalized");
    RealMatrix z = raw;
    for (Eigen::Index i = 0; i < n; ++i) z.row(i) /= norms(i);

    const RealMatrix logits = (z * z.transpose()) / temperature;
    RealMatrix weight = RealMatrix::Zero(n, n); // d loss / d logits(i, j)
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t positives = 0;
        double m = -std::numeric_limits<double>::infinity();
        for (Eigen::Index a = 0; a < n; ++a) {
            if (a == i) continue;
            m = std::max(m, logits(i, a));
            if (labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(i)]) ++positives;
        }
        if (positives == 0) throw ParameterError("scl_loss: anchor without a positive in the batch");
        double denom = 0.0;
        for (Eigen::Index a = 0; a < n; ++a)
            if (a != i) denom += std::exp(logits(i, a) - m);
        const double log_denom = m + std::log(denom);
        const double inv_p = 1.0 / static_cast<double>(positives);
        for (Eigen::Index a = 0; a < n; ++a) {
            if (a == i) continue;
            const bool pos = labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(i)];
            if (pos) loss -= inv_p * (logits(i, a) - log_denom);
            weight(i, a) = std::exp(logits(i, a) - log_denom) - (pos ? inv_p : 0.0);
        }
    }
    // logits = z z^T / tau, so dL/dz = (W + W^T) z / tau; then project through the normalization.
    const RealMatrix dz = (weight + weight.transpose()) * z / temperature;
    SclResult r;
    r.loss = loss;
    r.grad.resize(n, raw.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double radial = dz.row(i).dot(z.row(i));
        r.grad.row(i) = (dz.row(i) - radial * z.row(i)) / norms(i);
    }
    return r;
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (!(temperature > 0.0)) throw ConfigError("train: temperature must be positive");
    if (!(learning_rate >= 0.0)) throw ConfigError("train: learning_rate must be non-negative");
    if (!(augment_noise_sigma >= 0.0)) throw ConfigError("train: augment_noise_sigma must be non-negative");
    if (views < 2) throw ConfigError("train: at least two views per sample");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
    j = {{"batch_size", c.batch_size},
         {"epochs", c.epochs},
         {"learning_rate", c.learning_rate},
         {"temperature", c.temperature},
         {"augment_noise_sigma", c.augment_noise_sigma},
         {"max_shift", c.max_shift},
         {"views", c.views},
         {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
    try {
        c.batch_size = j.value("batch_size", c.batch_size);
        c.epochs = j.value("epochs", c.epochs);
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.temperature = j.value("temperature", c.temperature);
        c.augment_noise_sigma = j.value("augment_noise_sigma", c.augment_noise_sigma);
        c.max_shift = j.value("max_shift", c.max_shift);
        c.views = j.value("views", c.views);
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("train config: ") + e.what());
    }
}

PulseMatrix augment(const PulseMatrix& sample, double sigma, std::size_t max_shift, std::uint64_t draw_seed) {
    if (!(sigma >= 0.0)) throw ParameterError("augment: sigma must be non-negative");
    Rng rng(draw_seed);
    PulseMatrix noisy = sample;
    if (sigma > 0.0 && sample.size() > 0) {
        const double rms = std::sqrt(sample.squaredNorm() / static_cast<double>(sample.size()));
        for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy.data()[i] += sigma * rms * rng.complex_normal();
    }
    const auto m = static_cast<std::int64_t>(max_shift);
    const std::int64_t shift = m > 0 ? rng.uniform_int(-m, m) : 0;
    if (shift == 0) return noisy;
    const Eigen::Index cols = sample.cols();
    PulseMatrix out(sample.rows(), cols);
    for (Eigen::Index n = 0; n < cols; ++n) {
        const Eigen::Index to = ((n + static_cast<Eigen::Index>(shift)) % cols + cols) % cols;
        out.col(to) = noisy.col(n);
    }
    return out;
}

ScatterFeatures ViewSet::view(std::size_t sample, std::size_t v) const {
    const auto& src = data.at(sample * views + v);
    ScatterFeatures f;
    f.channels = channels;
    f.rows = rows;
    f.cols = cols;
    f.data.assign(src.begin(), src.end());
    return f;
}

TrainResult train_encoder(const ViewSet& vs, const TrainConfig& cfg, const EncoderShape& shape_in) {
    cfg.validate();
    if (vs.views < 2 || vs.samples() < 1) throw ConfigError("train: view set is empty");
    {
        auto sorted = vs.labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 2)
            throw ConfigError("train: dataset needs at least two classes");
    }
    EncoderShape shape = shape_in;
    shape.in_channels = vs.channels;
    TrainResult result;
    result.params = EncoderParams::init(shape, cfg.seed);
    auto& params = result.params;

    const std::size_t n_params = params.size();
    std::vector<double> m1(n_params, 0.0), m2(n_params, 0.0);
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::size_t step = 0;
    constexpr std::size_t kChunks = 16;

    std::vector<std::size_t> order(vs.samples());
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng shuffle(derive_seed(cfg.seed, {0x73687566, epoch}));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);

        double epoch_loss = 0.0;
        std::size_t epoch_anchors = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, order.size() - start);
            const std::size_t n_views = count * vs.views;
            std::vector<ForwardCache> caches(n_views);
            std::vector<int> labels(n_views);
            parallel_for(n_views, [&](std::size_t i) {
                const std::size_t sample = order[start + i / vs.views];
                caches[i] = forward_cache(vs.view(sample, i % vs.views), params);
            });
            RealMatrix raw(static_cast<Eigen::Index>(n_views), static_cast<Eigen::Index>(shape.embedding));
            for (std::size_t i = 0; i < n_views; ++i) {
                raw.row(static_cast<Eigen::Index>(i)) = caches[i].raw.transpose();
                labels[i] = vs.labels[order[start + i / vs.views]];
            }
            const auto scl = scl_loss(raw, labels, cfg.temperature);
            if (!std::isfinite(scl.loss))
                throw NumericError("train: loss diverged in epoch " + std::to_string(epoch));
            epoch_loss += scl.loss;
            epoch_anchors += n_views;

            // Fixed chunking keeps the gradient sum order independent of the worker count.
            std::vector<EncoderParams> partial(kChunks, EncoderParams::zeros(shape));
            parallel_for(kChunks, [&](std::size_t c) {
                for (std::size_t i = c; i < n_views; i += kChunks) {
                    const Embedding d_raw = scl.grad.row(static_cast<Eigen::Index>(i)).transpose() / double(n_views);
                    backward(caches[i], params, d_raw, partial[c]);
                }
            });
            auto grads = partial[0].tensors();
            for (std::size_t c = 1; c < kChunks; ++c) {
                auto more = partial[c].tensors();
                for (std::size_t t = 0; t < grads.size(); ++t)
                    for (std::size_t e = 0; e < grads[t].values->size(); ++e) (*grads[t].values)[e] += (*more[t].values)[e];
            }

            ++step;
            const double c1 = 1.0 - std::pow(beta1, double(step)), c2 = 1.0 - std::pow(beta2, double(step));
            std::size_t offset = 0;
            auto weights = params.tensors();
            for (std::size_t t = 0; t < weights.size(); ++t) {
                auto& w = *weights[t].values;
                const auto& g = *grads[t].values;
                for (std::size_t e = 0; e < w.size(); ++e, ++offset) {
                    m1[offset] = beta1 * m1[offset] + (1.0 - beta1) * g[e];
                    m2[offset] = beta2 * m2[offset] + (1.0 - beta2) * g[e] * g[e];
                    w[e] -= cfg.learning_rate * (m1[offset] / c1) / (std::sqrt(m2[offset] / c2) + eps);
                }
            }
            if (!params.all_finite()) throw NumericError("train: parameters diverged in epoch " + std::to_string(epoch));
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(epoch_anchors));
    }
    return result;
}

void write_weights(const std::filesystem::path& manifest, const EncoderParams& p) {
    auto blob_path = manifest;
    blob_path += ".bin";
    std::ofstream blob(blob_path, std::ios::binary | std::ios::trunc);
    if (!blob) throw IoError("cannot open " + blob_path.string() + " for writing");
    nlohmann::json j;
    j["format"] = "awsp-encoder-weights";
    j["blob"] = blob_path.filename().string();
    j["shape"] = {{"in_channels", p.shape.in_channels},
                  {"reduction", p.shape.reduction},
                  {"conv1", p.shape.conv1},
                  {"conv2", p.shape.conv2},
                  {"embedding", p.shape.embedding}};
    auto list = nlohmann::json::array();
    std::size_t offset = 0;
    for (const auto& t : p.tensors()) {
        list.push_back({{"name", t.name}, {"shape", t.dims}, {"offset", offset}, {"dtype", "f64"}});
        write_f64(blob, *t.values);
        offset += t.values->size() * sizeof(double);
    }
    j["tensors"] = list;
    if (!blob) throw IoError("write failed: " + blob_path.string());
    write_json_file(manifest, j);
}

EncoderParams read_weights(const std::filesystem::path& manifest) {
    const auto j = read_json_file(manifest);
    EncoderShape s;
    try {
        const auto& sh = j.at("shape");
        s.in_channels = sh.at("in_channels").get<std::size_t>();
        s.reduction = sh.at("reduction").get<std::size_t>();
        s.conv1 = sh.at("conv1").get<std::size_t>();
        s.conv2 = sh.at("conv2").get<std::size_t>();
        s.embedding = sh.at("embedding").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("weights manifest: ") + e.what());
    }
    auto p = EncoderParams::zeros(s);
    std::ifstream blob(manifest.parent_path() / j.at("blob").get<std::string>(), std::ios::binary);
    if (!blob) throw IoError("cannot open weights blob next to " + manifest.string());
    for (auto& t : p.tensors()) {
        const auto it = std::find_if(j["tensors"].begin(), j["tensors"].end(),
                                     [&](const nlohmann::json& e) { return e.at("name") == t.name; });
        if (it == j["tensors"].end()) throw ConfigError("weights manifest: missing tensor " + t.name);
        if ((*it).at("dtype") != "f64") throw ConfigError("weights manifest: unsupported dtype");
        if ((*it).at("shape").get<std::vector<std::size_t>>() != t.dims)
            throw DimensionError("weights manifest: shape mismatch for " + t.name);
        blob.seekg(static_cast<std::streamoff>((*it).at("offset").get<std::size_t>()));
        read_f64(blob, *t.values);
    }
    return p;
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<double>& epoch_loss) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < epoch_loss.size(); ++e) out << e << ',' << epoch_loss[e] << '\n';
    write_text_file(path, out.str());
}

} // namespace awsp
