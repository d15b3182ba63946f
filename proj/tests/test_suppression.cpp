// SPDX-License-Identifier: Apache-2.0

#include "awsp/suppression.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace awsp;

namespace {

std::vector<double> direct_convolution(const std::vector<double>& p, std::size_t W) {
    std::vector<double> out(p.size() + W - 1, 0.0);
    for (std::size_t t = 0; t < p.size(); ++t)
        for (std::size_t k = 0; k < W; ++k) out[t + k] += p[t];
    return out;
}

} // namespace

TEST_CASE("accumulation") {
    SUBCASE("contiguous run of W ones gives a triangle of height W") {
        const std::size_t W = 6;
        std::vector<double> p(30, 0.0);
        std::fill(p.begin() + 10, p.begin() + 16, 1.0);
        const auto a = accumulate_profile(p, W);
        CHECK(a.size() == 35);
        CHECK(*std::max_element(a.begin(), a.end()) == 6.0);
        for (std::size_t i = 10; i <= 15; ++i) CHECK(a[i] == double(i - 9));
        for (std::size_t i = 15; i <= 20; ++i) CHECK(a[i] == double(21 - i));
    }
    SUBCASE("isolated spike") {
        std::vector<double> p(20, 0.0);
        p[7] = 1.0;
        const auto a = accumulate_profile(p, 9);
        CHECK(*std::max_element(a.begin(), a.end()) == 1.0);
        CHECK(detect_targets(a, 9, 0.5).empty());
    }
    SUBCASE("every other bin across 2W") {
        for (std::size_t W : {4, 8, 12}) {
            std::vector<double> p(4 * W, 0.0);
            for (std::size_t t = W; t < 3 * W; t += 2) p[t] = 1.0;
            const auto a = accumulate_profile(p, W);
            CHECK(*std::max_element(a.begin(), a.end()) == double(W / 2));
        }
    }
    SUBCASE("matches direct convolution, linear and shift equivariant") {
        Rng rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            const auto W = static_cast<std::size_t>(rng.uniform_int(1, 30));
            std::vector<double> p(60), q(60);
            for (auto& v : p) v = rng.uniform();
            for (auto& v : q) v = rng.uniform();
            const auto a = accumulate_profile(p, W);
            const auto want = direct_convolution(p, W);
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(want[i]).epsilon(1e-13));

            std::vector<double> sum(60);
            for (std::size_t i = 0; i < 60; ++i) sum[i] = 2.0 * p[i] + q[i];
            const auto as = accumulate_profile(sum, W), aq = accumulate_profile(q, W);
            for (std::size_t i = 0; i < as.size(); ++i) CHECK(as[i] == doctest::Approx(2.0 * a[i] + aq[i]).epsilon(1e-12));

            std::vector<double> shifted(65, 0.0);
            std::copy(p.begin(), p.end(), shifted.begin() + 5);
            const auto ash = accumulate_profile(shifted, W);
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(ash[i + 5] == doctest::Approx(a[i]).epsilon(1e-13));
        }
    }
    CHECK(accumulate_profile(std::vector<double>{}, 3).empty());
    CHECK_THROWS_AS(accumulate_profile(std::vector<double>{1.0}, 0), ParameterError);
}

TEST_CASE("detection") {
    CHECK(detect_targets(std::vector<double>(50, 0.0), 8, 0.5).empty());

    SUBCASE("run of ones maps back to its center") {
        const std::size_t W = 48;
        for (std::size_t b : {20, 60, 61, 100}) {
            for (std::size_t half : {0, 5, 16, 20}) {
                std::vector<double> p(194, 0.0);
                for (std::size_t t = b - half; t <= b + half; ++t) p[t] = 1.0;
                const auto d = detect_targets(accumulate_profile(p, W), W, half >= 24 ? 0.5 : double(half) / 48.0);
                REQUIRE(d.size() == 1);
                CHECK(d[0].bin == b);
                CHECK(d[0].peak == double(std::min<std::size_t>(2 * half + 1, W)));
            }
        }
    }
    SUBCASE("trapezoid of height W gives one detection at its plateau center") {
        const std::size_t W = 10;
        std::vector<double> p(80, 0.0);
        std::fill(p.begin() + 30, p.begin() + 45, 1.0);
        const auto a = accumulate_profile(p, W);
        const auto d = detect_targets(a, W, 0.5);
        REQUIRE(d.size() == 1);
        CHECK(d[0].peak == 10.0);
        // Plateau spans 39..44; the super-threshold run is symmetric around it.
        CHECK(d[0].first + d[0].last == 39 + 44);
    }
    SUBCASE("two separated runs") {
        std::vector<double> p(150, 0.0);
        std::fill(p.begin() + 10, p.begin() + 30, 0.9);
        std::fill(p.begin() + 90, p.begin() + 110, 1.0);
        const auto d = detect_targets(accumulate_profile(p, 16), 16, 0.5);
        REQUIRE(d.size() == 2);
        CHECK(d[0].bin < d[1].bin);
        CHECK(d[0].bin == 20);
        CHECK(d[1].bin == 100);
    }
    SUBCASE("isolated single-bin spikes never trigger") {
        Rng rng(17);
        for (int trial = 0; trial < 500; ++trial) {
            const auto W = static_cast<std::size_t>(rng.uniform_int(2, 64));
            std::vector<double> p(static_cast<std::size_t>(rng.uniform_int(1, 400)), 0.0);
            std::size_t t = static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(W)));
            while (t < p.size()) {
                p[t] = rng.uniform() > 0.1 ? rng.uniform(0.0, 1.0) : 1.0;
                t += W + static_cast<std::size_t>(rng.uniform_int(0, 10));
            }
            CHECK(detect_targets(accumulate_profile(p, W), W, 0.5).empty());
        }
    }
    SUBCASE("raising the threshold never adds detections") {
        Rng rng(23);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> p(200);
            for (auto& v : p) v = rng.uniform() < 0.3 ? rng.uniform() : 0.0;
            const auto a = accumulate_profile(p, 12);
            std::size_t prev_bins = a.size() + 1;
            for (double frac = 0.05; frac <= 1.0; frac += 0.05) {
                std::size_t bins = 0;
                for (double v : a) bins += v > 12 * frac;
                CHECK(bins <= prev_bins);
                prev_bins = bins;
                for (const auto& d : detect_targets(a, 12, frac))
                    for (std::size_t i = d.first; i <= d.last; ++i) CHECK(a[i] > 12 * frac);
            }
        }
    }
}

TEST_CASE("suppression scenario places disjoint footprints") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto sc = suppression_scenario(seed, 10.0, std::nullopt);
        REQUIRE(sc.scene.targets.size() == 1);
        REQUIRE(sc.scene.jammers.size() == 2);
        CHECK(sc.scene.jammers[0].family == JammingFamily::RGJ);
        CHECK(sc.scene.jammers[1].family == JammingFamily::ISRJ);
        const auto parts = compose_scene_parts(sc.scene);
        const auto col_energy = [](const PulseMatrix& m) { return Eigen::VectorXd(m.cwiseAbs2().colwise().sum().transpose()); };
        const Eigen::VectorXd et = col_energy(parts.targets), ej = col_energy(parts.jammers);
        std::size_t first = et.size(), last = 0;
        for (Eigen::Index c = 0; c < et.size(); ++c)
            if (et(c) > 0.0) {
                first = std::min<std::size_t>(first, c);
                last = c;
            }
        CHECK(first == sc.target_bin);
        CHECK(sc.target_bin >= 24);
        CHECK(sc.target_bin + 48 + 24 <= 241);
        CHECK(last - first + 1 == sc.scene.config.pulse_len());
        for (Eigen::Index c = 0; c < ej.size(); ++c) {
            const bool near_target = std::size_t(c) + 16 >= first && std::size_t(c) <= last + 16;
            if (near_target) CHECK(ej(c) == 0.0);
        }
        for (auto b : sc.jammer_bins) CHECK(ej(Eigen::Index(b)) > 0.0);
    }
    const auto a = suppression_scenario(3, 10.0, 10.0);
    const auto b = suppression_scenario(3, 10.0, 10.0);
    CHECK((compose_scene(a.scene) - compose_scene(b.scene)).norm() == 0.0);
    CHECK(a.scene.cnr_db.has_value());
}

TEST_CASE("window dataset") {
    WindowDatasetOptions o;
    o.per_class = 3;
    o.seed = 9;
    const auto w = window_dataset(o);
    REQUIRE(w.size() == 36);
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(w[i].label == int(i / 3));
        CHECK(w[i].matrix.rows() == 128);
        CHECK(w[i].matrix.cols() == 48);
        CHECK(all_finite(w[i].matrix));
    }
    const auto again = window_dataset(o);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK((again[i].matrix - w[i].matrix).norm() == 0.0);
    o.two_class = true;
    for (const auto& s : window_dataset(o)) CHECK((s.label == 0 || s.label == 1));
    o.clutter_fraction = 2.0;
    CHECK_THROWS_AS(window_dataset(o), ConfigError);
}

TEST_CASE("probability profile") {
    WindowDatasetOptions o;
    o.per_class = 4;
    o.seed = 1;
    const auto windows = window_dataset(o);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 16;
    const auto model = train_model(windows, windows, cfg);
    CHECK(model.cols == 48);

    const auto sc = suppression_scenario(5, 10.0, std::nullopt);
    const PulseMatrix z = compose_scene(sc.scene);
    DetectionConfig dc;
    const auto p = run_detection(z, model, dc, 48);
    CHECK(p.probs.size() == 241 - 48 + 1);
    CHECK(p.accumulated.size() == p.probs.size() + 47);
    for (double v : p.probs) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (double v : p.accumulated) CHECK(v >= 0.0);

    dc.target_class = 99;
    for (double v : probability_profile(z, model, dc)) CHECK(v == 0.0);
    dc.window_len = 300;
    CHECK_THROWS_AS(probability_profile(z, model, dc), ConfigError);

    // Narrower windows are padded to the model width.
    dc.window_len = 40;
    dc.target_class = 0;
    CHECK(probability_profile(z, model, dc).size() == 202);
}
