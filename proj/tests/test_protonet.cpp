// SPDX-License-Identifier: Apache-2.0

#include "awsp/protonet.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

using namespace awsp;

namespace {

Embedding unit(std::initializer_list<double> v) {
    Embedding e(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) e(i++) = x;
    return e;
}

Embedding random_embedding(Rng& rng, Eigen::Index dim) {
    Embedding e(dim);
    for (Eigen::Index i = 0; i < dim; ++i) e(i) = rng.normal();
    return e / e.norm();
}

} // namespace

TEST_CASE("prototypes are class means") {
    SUBCASE("single support vector per class") {
        const std::vector<Embedding> s{unit({0, 1}), unit({1, 0})};
        const std::vector<int> labels{4, 2};
        const auto p = compute_prototypes(s, labels);
        CHECK(p.class_ids == std::vector<int>{2, 4});
        CHECK(p.centers.row(0).transpose() == s[1]);
        CHECK(p.centers.row(1).transpose() == s[0]);
    }
    SUBCASE("antipodal pair averages to zero and still classifies") {
        const std::vector<Embedding> s{unit({1, 0}), unit({-1, 0}), unit({0, 1})};
        const std::vector<int> labels{0, 0, 1};
        const auto p = compute_prototypes(s, labels);
        CHECK(p.centers.row(0).norm() == 0.0);
        const auto pred = classify(unit({0.1, 0}), p);
        CHECK(pred.class_id == 0);
    }
    SUBCASE("matches elementwise summation") {
        Rng rng(3);
        std::vector<Embedding> s;
        std::vector<int> labels;
        for (int i = 0; i < 60; ++i) {
            s.push_back(random_embedding(rng, 16));
            labels.push_back(i % 3);
        }
        const auto p = compute_prototypes(s, labels);
        for (int c = 0; c < 3; ++c)
            for (Eigen::Index d = 0; d < 16; ++d) {
                double acc = 0.0;
                int n = 0;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (labels[i] == c) {
                        acc += s[i](d);
                        ++n;
                    }
                CHECK(std::abs(p.centers(c, d) - acc / n) <= 1e-15);
            }
    }
    CHECK_THROWS_AS(compute_prototypes(std::vector<Embedding>{}, std::vector<int>{}), ParameterError);
    CHECK_THROWS_AS(compute_prototypes(std::vector<Embedding>{unit({1, 0})}, std::vector<int>{}), DimensionError);
}

TEST_CASE("nearest-prototype classification") {
    PrototypeSet p;
    p.centers.resize(3, 2);
    p.centers << 1, 0, 0, 1, -1, 0;
    p.class_ids = {0, 1, 2};

    const auto hit = classify(unit({0, 1}), p);
    CHECK(hit.class_index == 1);
    CHECK(hit.confidence == *std::max_element(hit.probabilities.begin(), hit.probabilities.end()));
    CHECK(std::accumulate(hit.probabilities.begin(), hit.probabilities.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));

    PrototypeSet one;
    one.centers = RealMatrix::Ones(1, 2);
    one.class_ids = {7};
    const auto lone = classify(unit({5, -3}), one);
    CHECK(lone.confidence == 1.0);
    CHECK(lone.class_id == 7);

    const auto tie = classify(unit({0.5, 0.5}), PrototypeSet{p.centers.topRows(2), {0, 1}});
    CHECK(tie.class_index == 0);
    CHECK(tie.confidence == doctest::Approx(0.5).epsilon(1e-15));

    // Large distances stay finite thanks to max subtraction.
    PrototypeSet far;
    far.centers.resize(2, 1);
    far.centers << 0, 100;
    far.class_ids = {0, 1};
    const auto f = classify(unit({99}), far);
    CHECK(f.class_id == 1);
    CHECK(std::isfinite(f.confidence));
    CHECK(f.confidence == 1.0);

    CHECK_THROWS_AS(classify(unit({1, 2, 3}), p), DimensionError);
}

TEST_CASE("logit scale sharpens confidence without moving the argmin") {
    PrototypeSet p;
    p.centers.resize(3, 2);
    p.centers << 1, 0, 0, 1, -1, 0;
    p.class_ids = {0, 1, 2};
    const Embedding q = unit({0.9, 0.1});
    const auto plain = classify(q, p);
    p.logit_scale = 1.0 / (2.0 * 0.07);
    const auto sharp = classify(q, p);
    CHECK(plain.class_index == sharp.class_index);
    CHECK(sharp.confidence > plain.confidence);
    CHECK(sharp.confidence > 0.99);
    // Direct evaluation of the scaled softmax.
    double total = 0.0;
    for (Eigen::Index k = 0; k < 3; ++k) total += std::exp(-p.logit_scale * (p.centers.row(k).transpose() - q).squaredNorm());
    CHECK(sharp.confidence == doctest::Approx(std::exp(-p.logit_scale * (p.centers.row(0).transpose() - q).squaredNorm()) / total).epsilon(1e-12));
    p.logit_scale = 0.0;
    CHECK_THROWS_AS(classify(q, p), ParameterError);
}

TEST_CASE("classification is rotation invariant") {
    Rng rng(8);
    PrototypeSet p;
    p.centers.resize(5, 3);
    for (Eigen::Index i = 0; i < p.centers.size(); ++i) p.centers.data()[i] = rng.normal();
    p.class_ids = {0, 1, 2, 3, 4};
    const double a = 1.1;
    Eigen::Matrix3d rot;
    rot << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    PrototypeSet q = p;
    q.centers = p.centers * rot.transpose();
    for (int t = 0; t < 50; ++t) {
        const Embedding e = random_embedding(rng, 3);
        const auto r1 = classify(e, p);
        const auto r2 = classify(rot * e, q);
        CHECK(r1.class_index == r2.class_index);
        CHECK(r1.confidence == doctest::Approx(r2.confidence).epsilon(1e-12));
    }
}

TEST_CASE("metrics") {
    SUBCASE("all correct") {
        const std::vector<int> t{0, 1, 2, 2, 1};
        const auto m = evaluate(t, t, 3);
        CHECK(m.accuracy == 1.0);
        CHECK(m.macro_f1 == 1.0);
        CHECK(m.confusion[2][2] == 2);
        CHECK(m.confusion[0][1] == 0);
    }
    SUBCASE("binary hand computation") {
        // TP=1 FN=1 for class 0; FP=1 TN=1.
        const std::vector<int> truth{0, 0, 1, 1};
        const std::vector<int> pred{0, 1, 0, 1};
        const auto m = evaluate(pred, truth, 2);
        CHECK(m.per_class_f1[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(m.accuracy == 0.5);
    }
    SUBCASE("absent class has zero F1") {
        const std::vector<int> truth{0, 0};
        const std::vector<int> pred{0, 0};
        const auto m = evaluate(pred, truth, 2);
        CHECK(m.per_class_f1[1] == 0.0);
        CHECK(m.macro_f1 == 0.5);
    }
    SUBCASE("eleven classes with two cross errors") {
        std::vector<int> truth, pred;
        for (int c = 0; c < 11; ++c)
            for (int i = 0; i < 500; ++i) {
                truth.push_back(c);
                int p = c;
                if (c == 0 && i < 56) p = 9;
                if (c == 9 && i < 29) p = 0;
                pred.push_back(p);
            }
        const auto m = evaluate(pred, truth, 11);
        CHECK(m.confusion[0][9] == 56);
        CHECK(m.confusion[9][0] == 29);
        CHECK(m.confusion[0][0] == 444);
        CHECK(m.accuracy == doctest::Approx(1.0 - 85.0 / 5500.0).epsilon(1e-15));
        for (std::size_t r = 0; r < 11; ++r)
            CHECK(std::accumulate(m.confusion[r].begin(), m.confusion[r].end(), std::size_t{0}) == 500);
    }
    CHECK_THROWS_AS(evaluate(std::vector<int>{0}, std::vector<int>{0, 1}, 2), DimensionError);
    CHECK_THROWS_AS(evaluate(std::vector<int>{3}, std::vector<int>{0}, 2), ParameterError);
}

TEST_CASE("metrics and prototypes serialize") {
    const std::vector<int> truth{0, 1, 1}, pred{0, 0, 1};
    const auto m = evaluate(pred, truth, 2);
    const auto j = metrics_json(m);
    CHECK(j["confusion"][1][0] == 1);
    CHECK(j.contains("per_class_f1"));
    const auto path = std::filesystem::temp_directory_path() / "awsp_confusion.csv";
    write_confusion_csv(path, m);
    std::ifstream in(path);
    std::string header, row0;
    std::getline(in, header);
    std::getline(in, row0);
    CHECK(header == "truth,pred_0,pred_1");
    CHECK(row0 == "0,1,0");
    std::filesystem::remove(path);

    Rng rng(2);
    PrototypeSet p;
    p.centers.resize(2, 4);
    for (Eigen::Index i = 0; i < p.centers.size(); ++i) p.centers.data()[i] = rng.normal();
    p.class_ids = {3, 5};
    p.logit_scale = 7.25;
    const PrototypeSet back = nlohmann::json(p).get<PrototypeSet>();
    CHECK(back.class_ids == p.class_ids);
    CHECK(back.centers == p.centers);
    CHECK(back.logit_scale == 7.25);
}
