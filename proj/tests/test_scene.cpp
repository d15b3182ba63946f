// SPDX-License-Identifier: Apache-2.0

#include "awsp/scene.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

using namespace awsp;

namespace {

double support_power(const PulseMatrix& m) {
    double p = 0.0;
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (m.data()[i] != cplx(0.0, 0.0)) {
            p += std::norm(m.data()[i]);
            ++n;
        }
    return p / double(n);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("target_echo: zero range, support start, matched-filter peak") {
    RadarConfig cfg;
    const auto s = lfm_baseband(cfg.pulse_width, cfg.bandwidth, cfg.sample_rate);
    const auto m = target_echo(TargetSpec{}, cfg);
    for (Eigen::Index n = 0; n < m.cols(); ++n)
        CHECK(m(0, n) == (std::size_t(n) < s.size() ? s.samples[std::size_t(n)] : cplx(0.0, 0.0)));

    TargetSpec t;
    t.range = 60.0 * kSpeedOfLight / (2.0 * cfg.sample_rate);
    const auto m60 = target_echo(t, cfg);
    Eigen::Index first = 0;
    while (m60(3, first) == cplx(0.0, 0.0)) ++first;
    CHECK(first == 60);

    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
        TargetSpec r;
        r.range = rng.uniform(0.0, 180.0) * kSpeedOfLight / (2.0 * cfg.sample_rate);
        r.velocity = rng.uniform(-500.0, 500.0);
        const auto e = target_echo(r, cfg);
        const auto bin = std::llround(2.0 * r.range / kSpeedOfLight * cfg.sample_rate);
        Eigen::Index best = -1;
        double best_v = -1.0;
        for (Eigen::Index lag = 0; lag + Eigen::Index(s.size()) <= e.cols(); ++lag) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) acc += e(5, lag + Eigen::Index(i)) * std::conj(s.samples[i]);
            if (std::abs(acc) > best_v) {
                best_v = std::abs(acc);
                best = lag;
            }
        }
        CHECK(best == bin);
    }

    TargetSpec far;
    far.range = 230.0 * kSpeedOfLight / (2.0 * cfg.sample_rate);
    CHECK_THROWS_AS(target_echo(far, cfg), ParameterError);
}

TEST_CASE("complex_noise and clutter statistics") {
    const auto n = complex_noise(128, 241, 3);
    const double power = n.squaredNorm() / double(n.size());
    CHECK(power >= 0.96);
    CHECK(power <= 1.04);
    CHECK(std::abs(n.mean()) < 0.02);
    CHECK(n == complex_noise(128, 241, 3));

    const auto c = clutter(128, 241, 4, 0.9);
    const double cp = c.squaredNorm() / double(c.size());
    CHECK(cp >= 0.90);
    CHECK(cp <= 1.10);
    cplx lag1 = 0.0;
    for (Eigen::Index q = 0; q < c.rows(); ++q)
        for (Eigen::Index k = 1; k < c.cols(); ++k) lag1 += c(q, k) * std::conj(c(q, k - 1));
    const double rho = std::abs(lag1) / double(c.rows() * (c.cols() - 1)) / cp;
    CHECK(std::abs(rho - 0.9) <= 0.03);

    const auto c0 = clutter(128, 241, 4, 0.0);
    const double p0 = c0.squaredNorm() / double(c0.size());
    CHECK(p0 >= 0.96);
    CHECK(p0 <= 1.04);
    CHECK_THROWS_AS(clutter(4, 4, 1, 1.0), ParameterError);
}

TEST_CASE("scale_to_ratio") {
    RadarConfig cfg;
    const auto e = target_echo(TargetSpec{}, cfg);
    CHECK(std::abs(support_power(scale_to_ratio(e, 0.0)) - 1.0) < 1e-12);
    CHECK(std::abs(support_power(scale_to_ratio(e, 10.0)) - 10.0) < 1e-9);
    const auto s = scale_to_ratio(e, 3.0);
    for (Eigen::Index i = 0; i < e.size(); ++i) CHECK((e.data()[i] == cplx(0.0, 0.0)) == (s.data()[i] == cplx(0.0, 0.0)));
    CHECK_THROWS_AS(scale_to_ratio(PulseMatrix::Zero(4, 4), 0.0), ParameterError);
}

TEST_CASE("compose_scene: noise only, target power, linearity") {
    SceneSpec empty;
    empty.seed = 21;
    const auto z = compose_scene(empty);
    const auto parts = compose_scene_parts(empty);
    CHECK(z == parts.noise);

    SceneSpec one = empty;
    TargetSpec t;
    t.range = 600.0;
    one.targets.push_back(t);
    one.snr_db = 7.0;
    CHECK(std::abs(support_power(compose_scene_parts(one).targets) - std::pow(10.0, 0.7)) < 1e-9);

    SceneSpec jam = empty;
    JammingSpec j;
    j.family = JammingFamily::ISRJ;
    j.tau = 120.0 / jam.config.sample_rate;
    j.theta = 0.03;
    jam.jammers.push_back(j);
    SceneSpec both = one;
    both.jammers = jam.jammers;
    const auto a = compose_scene_parts(one), b = compose_scene_parts(jam), ab = compose_scene_parts(both);
    CHECK((compose_scene(both) - (a.targets + b.jammers + ab.noise)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ab.noise == a.noise);

    // Target plus two jammers shows structure in the matrix beyond noise.
    SceneSpec fig = both;
    JammingSpec rg;
    rg.family = JammingFamily::RGJ;
    rg.false_targets = {{cplx(1.0, 0.0)}, {20.0 / fig.config.sample_rate}, {}};
    fig.jammers.push_back(rg);
    fig.snr_db = 10.0;
    fig.inr_db = 10.0;
    const auto fz = compose_scene(fig);
    const auto fp = compose_scene_parts(fig);
    CHECK(fz.squaredNorm() > 1.5 * fp.noise.squaredNorm());
}

TEST_CASE("scene JSON round trip") {
    SceneSpec s;
    s.targets.push_back(TargetSpec{300.0, 12.0, 0.01, cplx(0.5, 0.5)});
    s.cnr_db = 4.0;
    s.seed = 99;
    nlohmann::json j = s;
    const auto back = j.get<SceneSpec>();
    CHECK(compose_scene(back) == compose_scene(s));
}

TEST_CASE("dataset protocols") {
    DatasetOptions train;
    train.per_class = 2;
    train.seed = 4;
    const auto d = generate_dataset(train);
    CHECK(d.samples.size() == 22);
    for (const auto& s : d.samples) {
        CHECK(s.matrix.rows() == 128);
        CHECK(s.matrix.cols() == 241);
    }
    for (const auto& s : d.manifest["samples"]) {
        CHECK(s["scene"]["config"]["carrier_f0"].get<double>() == 10e9);
        CHECK(s["scene"]["config"]["nominal_len"].get<int>() == 240);
        CHECK(s["scene"]["config"]["fast_time_len"].get<int>() == 241);
        const double snr = s["scene"]["snr_db"].get<double>();
        CHECK(snr >= -6.0);
        CHECK(snr <= 10.0);
        CHECK(s["scene"]["cnr_db"].is_null());
    }
    // Label purity: class 0 has targets only, the rest exactly one jammer of the class family.
    const auto specs = draw_dataset(train);
    for (const auto& s : specs) {
        if (s.label == 0) {
            CHECK(s.scene.jammers.empty());
            CHECK(s.scene.targets.size() == 1);
        } else {
            CHECK(s.scene.targets.empty());
            REQUIRE(s.scene.jammers.size() == 1);
            CHECK(class_of(s.scene.jammers[0].family) == s.label);
        }
    }

    DatasetOptions test = train;
    test.protocol = Protocol::Test;
    test.per_class = 6;
    bool multi = false;
    for (const auto& s : draw_dataset(test)) {
        CHECK(s.scene.cnr_db.has_value());
        CHECK(s.scene.config.fast_time_len() == 241);
        CHECK(s.scene.config.sample_rate == 68e6);
        if (s.scene.targets.size() > 1) multi = true;
        const auto m = realize(s);
        CHECK(all_finite(m.matrix));
    }
    CHECK(multi);

    DatasetOptions bad;
    bad.per_class = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("dataset file: round trip and byte-identical reruns") {
    const auto dir = std::filesystem::temp_directory_path() / "awsp_scene_test";
    std::filesystem::create_directories(dir);
    DatasetOptions o;
    o.per_class = 1;
    o.seed = 8;
    write_dataset(dir / "a.bin", o);
    write_dataset(dir / "b.bin", o);
    CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));
    CHECK(slurp(dir / "a.bin.json") == slurp(dir / "b.bin.json"));
    CHECK(slurp(dir / "a.bin").substr(0, 8) == "AWSPDS01");

    const auto back = read_dataset(dir / "a.bin");
    const auto ref = generate_dataset(o);
    REQUIRE(back.size() == ref.samples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].label == ref.samples[i].label);
        const PulseMatrix rounded = ref.samples[i].matrix.unaryExpr(
            [](cplx v) { return cplx(double(float(v.real())), double(float(v.imag()))); });
        CHECK(back[i].matrix == rounded);
    }
    std::filesystem::remove_all(dir);
}
