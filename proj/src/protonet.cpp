// SPDX-License-Identifier: Apache-2.0

#include "awsp/protonet.hpp"

#include "awsp/binary_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace awsp {

PrototypeSet compute_prototypes(std::span<const Embedding> support, std::span<const int> labels) {
    if (support.size() != labels.size()) throw DimensionError("compute_prototypes: labels do not match support");
    if (support.empty()) throw ParameterError("compute_prototypes: empty support set");
    const Eigen::Index dim = support.front().size();
    std::map<int, std::pair<Eigen::VectorXd, std::size_t>> sums;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i].size() != dim) throw DimensionError("compute_prototypes: embedding sizes differ");
        auto [it, fresh] = sums.try_emplace(labels[i], Eigen::VectorXd::Zero(dim), 0);
        it->second.first += support[i];
        ++it->second.second;
    }
    PrototypeSet p;
    p.centers.resize(static_cast<Eigen::Index>(sums.size()), dim);
    Eigen::Index row = 0;
    for (const auto& [id, acc] : sums) {
        p.centers.row(row++) = (acc.first / static_cast<double>(acc.second)).transpose();
        p.class_ids.push_back(id);
    }
    return p;
}

Prediction classify(const Embedding& query, const PrototypeSet& protos) {
    if (protos.size() == 0) throw ParameterError("classify: no prototypes");
    if (query.size() != protos.centers.cols()) throw DimensionError("classify: embedding size != prototype size");
    if (!(protos.logit_scale > 0.0)) throw ParameterError("classify: logit_scale must be positive");
    const std::size_t n = protos.size();
    std::vector<double> d2(n);
    for (std::size_t k = 0; k < n; ++k) d2[k] = (protos.centers.row(static_cast<Eigen::Index>(k)).transpose() - query).squaredNorm();
    Prediction out;
    out.class_index = static_cast<std::size_t>(std::min_element(d2.begin(), d2.end()) - d2.begin());
    out.class_id = protos.class_ids[out.class_index];
    const double best = d2[out.class_index];
    out.probabilities.resize(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) total += out.probabilities[k] = std::exp(protos.logit_scale * (best - d2[k]));
    for (auto& p : out.probabilities) p /= total;
    out.confidence = out.probabilities[out.class_index];
    return out;
}

Metrics evaluate(std::span<const int> predicted, std::span<const int> truth, std::size_t num_classes) {
    if (predicted.size() != truth.size()) throw DimensionError("evaluate: prediction and truth lengths differ");
    if (num_classes == 0) throw ParameterError("evaluate: no classes");
    Metrics m;
    m.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto t = static_cast<std::size_t>(truth[i]), p = static_cast<std::size_t>(predicted[i]);
        if (truth[i] < 0 || predicted[i] < 0 || t >= num_classes || p >= num_classes)
            throw ParameterError("evaluate: class index out of range");
        ++m.confusion[t][p];
        if (t == p) ++correct;
    }
    m.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
    m.per_class_f1.resize(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::size_t predicted_c = 0, truth_c = 0;
        for (std::size_t k = 0; k < num_classes; ++k) {
            predicted_c += m.confusion[k][c];
            truth_c += m.confusion[c][k];
        }
        const double tp = static_cast<double>(m.confusion[c][c]);
        const double precision = predicted_c ? tp / static_cast<double>(predicted_c) : 0.0;
        const double recall = truth_c ? tp / static_cast<double>(truth_c) : 0.0;
        m.per_class_f1[c] = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    double sum = 0.0;
    for (double f : m.per_class_f1) sum += f;
    m.macro_f1 = sum / static_cast<double>(num_classes);
    return m;
}

nlohmann::json metrics_json(const Metrics& m) {
    return {{"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}, {"per_class_f1", m.per_class_f1}, {"confusion", m.confusion}};
}

void write_confusion_csv(const std::filesystem::path& path, const Metrics& m) {
    std::ostringstream out;
    out << "truth";
    for (std::size_t c = 0; c < m.confusion.size(); ++c) out << ",pred_" << c;
    out << '\n';
    for (std::size_t r = 0; r < m.confusion.size(); ++r) {
        out << r;
        for (auto v : m.confusion[r]) out << ',' << v;
        out << '\n';
    }
    write_text_file(path, out.str());
}

void to_json(nlohmann::json& j, const PrototypeSet& p) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < p.centers.rows(); ++r) {
        std::vector<double> v(p.centers.row(r).data(), p.centers.row(r).data() + p.centers.cols());
        rows.push_back(v);
    }
    j = {{"class_ids", p.class_ids}, {"centers", rows}, {"logit_scale", p.logit_scale}};
}

void from_json(const nlohmann::json& j, PrototypeSet& p) {
    try {
        p.class_ids = j.at("class_ids").get<std::vector<int>>();
        p.logit_scale = j.value("logit_scale", 1.0);
        const auto rows = j.at("centers").get<std::vector<std::vector<double>>>();
        if (rows.size() != p.class_ids.size() || rows.empty()) throw ConfigError("prototypes: row count mismatch");
        p.centers.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.front().size()) throw ConfigError("prototypes: ragged centers");
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                p.centers(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("prototypes: ") + e.what());
    }
}

} // namespace awsp
