// SPDX-License-Identifier: Apache-2.0
//
// Class prototypes, nearest-prototype classification with softmax confidence, and
// accuracy / F1 / confusion metrics.

#pragma once

#include "awsp/encoder.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <vector>

namespace awsp {

struct PrototypeSet {
    RealMatrix centers;          // classes x embedding
    std::vector<int> class_ids;  // label carried by each row
    // Confidence is softmax(-logit_scale * d^2). Trained models use 1 / (2 tau), which for
    // unit-norm embeddings equals the cos / tau logits of the contrastive loss up to a constant.
    double logit_scale = 1.0;

    std::size_t size() const { return class_ids.size(); }
};

// Center k is the plain mean of the class-k embeddings, not renormalized. Rows follow
// ascending class id.
PrototypeSet compute_prototypes(std::span<const Embedding> support, std::span<const int> labels);

struct Prediction {
    std::size_t class_index = 0; // row in the prototype set
    int class_id = 0;
    double confidence = 0.0;
    std::vector<double> probabilities;
};

// Argmin squared distance, softmax of scaled negative squared distances; ties go to the lower row.
Prediction classify(const Embedding& query, const PrototypeSet& protos);

struct Metrics {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<double> per_class_f1;
    std::vector<std::vector<std::size_t>> confusion; // [truth][predicted]
};

Metrics evaluate(std::span<const int> predicted, std::span<const int> truth, std::size_t num_classes);

nlohmann::json metrics_json(const Metrics& m);
void write_confusion_csv(const std::filesystem::path& path, const Metrics& m);

void to_json(nlohmann::json& j, const PrototypeSet& p);
void from_json(const nlohmann::json& j, PrototypeSet& p);

} // namespace awsp
