// SPDX-License-Identifier: Apache-2.0
//
// Trained model bundle: scattering configuration, feature scales, encoder weights and
// prototypes, plus the train / embed / predict plumbing shared by the CLI and tests.

#pragma once

#include "awsp/encoder.hpp"
#include "awsp/protonet.hpp"
#include "awsp/scattering.hpp"
#include "awsp/scene.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace awsp {

struct Model {
    ScatterConfig scatter;
    FeatureScales scales;
    EncoderParams encoder;
    PrototypeSet prototypes;
    TrainConfig train;
    std::size_t rows = 0, cols = 0; // input matrix extent the model was trained on
    std::vector<double> epoch_loss;
};

// Training uses first-order scattering unless overridden.
ScatterConfig default_model_scatter();

const FilterBank& default_filterbank();

// scatter then log-normalize with the model's scales; inputs narrower than the model are
// zero-padded on the fast-time axis.
ScatterFeatures featurize(const PulseMatrix& z, const Model& m);
Embedding embed(const PulseMatrix& z, const Model& m);
std::vector<Embedding> embed_all(std::span<const LabeledSample> samples, const Model& m);

// View 0 is the sample itself; views 1.. are augmentations drawn from (seed, sample, view).
// Scales are fit on view 0 of every sample.
ViewSet build_views(std::span<const LabeledSample> samples, const TrainConfig& cfg, const ScatterConfig& sc,
                    FeatureScales& scales);

// Trains the encoder on `train`, then builds prototypes from `support`.
Model train_model(std::span<const LabeledSample> train, std::span<const LabeledSample> support,
                  const TrainConfig& cfg, const ScatterConfig& sc = default_model_scatter(),
                  const EncoderShape& shape = {});

void set_prototypes(Model& m, std::span<const LabeledSample> support);

std::vector<Prediction> predict(std::span<const LabeledSample> samples, const Model& m);

// Class-id predictions against the labels, over num_classes.
Metrics evaluate_model(std::span<const LabeledSample> samples, const Model& m, std::size_t num_classes);

// Directory with model.json, weights.json and weights.json.bin.
void save_model(const std::filesystem::path& dir, const Model& m);
Model load_model(const std::filesystem::path& dir);

} // namespace awsp
