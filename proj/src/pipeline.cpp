// SPDX-License-Identifier: Apache-2.0

#include "awsp/pipeline.hpp"

#include "awsp/binary_io.hpp"

namespace awsp {

namespace {

constexpr std::uint64_t kViewStream = 0x76696577;

PulseMatrix fit_width(const PulseMatrix& z, std::size_t rows, std::size_t cols) {
    if (static_cast<std::size_t>(z.rows()) != rows || static_cast<std::size_t>(z.cols()) > cols)
        throw DimensionError("model input is " + std::to_string(z.rows()) + "x" + std::to_string(z.cols()) +
                             ", model expects " + std::to_string(rows) + "x" + std::to_string(cols));
    if (static_cast<std::size_t>(z.cols()) == cols) return z;
    PulseMatrix out = PulseMatrix::Zero(z.rows(), static_cast<Eigen::Index>(cols));
    out.leftCols(z.cols()) = z;
    return out;
}

std::vector<float> to_float(const ScatterFeatures& f) { return {f.data.begin(), f.data.end()}; }

} // namespace

ScatterConfig default_model_scatter() {
    ScatterConfig c;
    c.max_order = 1;
    return c;
}

const FilterBank& default_filterbank() {
    static const FilterBank bank = build_filterbank();
    return bank;
}

ScatterFeatures featurize(const PulseMatrix& z, const Model& m) {
    return feature_normalize(scatter(fit_width(z, m.rows, m.cols), default_filterbank(), m.scatter), m.scales);
}

Embedding embed(const PulseMatrix& z, const Model& m) { return embed_forward(featurize(z, m), m.encoder); }

std::vector<Embedding> embed_all(std::span<const LabeledSample> samples, const Model& m) {
    std::vector<Embedding> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { out[i] = embed(samples[i].matrix, m); });
    return out;
}

ViewSet build_views(std::span<const LabeledSample> samples, const TrainConfig& cfg, const ScatterConfig& sc,
                    FeatureScales& scales) {
    cfg.validate();
    if (samples.empty()) throw ConfigError("train: empty training set");
    const auto& bank = default_filterbank();
    const auto rows = samples.front().matrix.rows(), cols = samples.front().matrix.cols();
    for (const auto& s : samples)
        if (s.matrix.rows() != rows || s.matrix.cols() != cols) throw DimensionError("train: samples differ in shape");

    std::vector<ScatterFeatures> originals(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { originals[i] = scatter(samples[i].matrix, bank, sc); });
    std::vector<const ScatterFeatures*> refs;
    for (const auto& f : originals) refs.push_back(&f);
    scales = fit_feature_scales(refs);

    ViewSet vs;
    vs.channels = originals.front().channels;
    vs.rows = originals.front().rows;
    vs.cols = originals.front().cols;
    vs.views = cfg.views;
    vs.data.resize(samples.size() * cfg.views);
    for (const auto& s : samples) vs.labels.push_back(s.label);
    parallel_for(samples.size(), [&](std::size_t i) {
        vs.data[i * cfg.views] = to_float(feature_normalize(originals[i], scales));
        originals[i] = ScatterFeatures{};
        for (std::size_t v = 1; v < cfg.views; ++v) {
            const auto aug = augment(samples[i].matrix, cfg.augment_noise_sigma, cfg.max_shift,
                                     derive_seed(cfg.seed, {kViewStream, i, v}));
            vs.data[i * cfg.views + v] = to_float(feature_normalize(scatter(aug, bank, sc), scales));
        }
    });
    return vs;
}

void set_prototypes(Model& m, std::span<const LabeledSample> support) {
    if (support.empty()) throw ConfigError("prototypes: empty support set");
    const auto emb = embed_all(support, m);
    std::vector<int> labels;
    for (const auto& s : support) labels.push_back(s.label);
    m.prototypes = compute_prototypes(emb, labels);
    m.prototypes.logit_scale = 1.0 / (2.0 * m.train.temperature);
}

Model train_model(std::span<const LabeledSample> train, std::span<const LabeledSample> support,
                  const TrainConfig& cfg, const ScatterConfig& sc, const EncoderShape& shape) {
    Model m;
    m.scatter = sc;
    m.train = cfg;
    m.rows = static_cast<std::size_t>(train.front().matrix.rows());
    m.cols = static_cast<std::size_t>(train.front().matrix.cols());
    {
        const auto views = build_views(train, cfg, sc, m.scales);
        auto result = train_encoder(views, cfg, shape);
        m.encoder = std::move(result.params);
        m.epoch_loss = std::move(result.epoch_loss);
    }
    set_prototypes(m, support);
    return m;
}

std::vector<Prediction> predict(std::span<const LabeledSample> samples, const Model& m) {
    std::vector<Prediction> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { out[i] = classify(embed(samples[i].matrix, m), m.prototypes); });
    return out;
}

Metrics evaluate_model(std::span<const LabeledSample> samples, const Model& m, std::size_t num_classes) {
    const auto preds = predict(samples, m);
    std::vector<int> predicted, truth;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        predicted.push_back(preds[i].class_id);
        truth.push_back(samples[i].label);
    }
    return evaluate(predicted, truth, num_classes);
}

void save_model(const std::filesystem::path& dir, const Model& m) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["format"] = "awsp-model";
    j["input"] = {{"rows", m.rows}, {"cols", m.cols}};
    j["scatter"] = {{"scales", m.scatter.scales},
                    {"max_order", m.scatter.max_order},
                    {"orientations", m.scatter.orientations},
                    {"input_channels", m.scatter.input_channels}};
    j["feature_scales"] = m.scales.scales;
    j["train"] = m.train;
    j["prototypes"] = m.prototypes;
    j["epoch_loss"] = m.epoch_loss;
    j["weights"] = "weights.json";
    write_json_file(dir / "model.json", j);
    write_weights(dir / "weights.json", m.encoder);
}

Model load_model(const std::filesystem::path& dir) {
    const auto j = read_json_file(dir / "model.json");
    Model m;
    try {
        m.rows = j.at("input").at("rows").get<std::size_t>();
        m.cols = j.at("input").at("cols").get<std::size_t>();
        const auto& s = j.at("scatter");
        m.scatter.scales = s.at("scales").get<std::size_t>();
        m.scatter.max_order = s.at("max_order").get<std::size_t>();
        m.scatter.orientations = s.at("orientations").get<std::size_t>();
        m.scatter.input_channels = s.at("input_channels").get<std::size_t>();
        m.scales.scales = j.at("feature_scales").get<std::vector<double>>();
        m.train = j.at("train").get<TrainConfig>();
        m.prototypes = j.at("prototypes").get<PrototypeSet>();
        m.epoch_loss = j.value("epoch_loss", std::vector<double>{});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model.json: ") + e.what());
    }
    m.scatter.validate();
    m.encoder = read_weights(dir / j.at("weights").get<std::string>());
    if (m.encoder.shape.in_channels != m.scatter.channel_count() || m.scales.scales.size() != m.scatter.channel_count())
        throw ConfigError("model.json: scatter channels do not match weights");
    return m;
}

} // namespace awsp
