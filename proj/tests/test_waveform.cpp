// SPDX-License-Identifier: Apache-2.0

#include "awsp/waveform.hpp"

#include <doctest.h>

#include <cmath>

using namespace awsp;

TEST_CASE("lfm_baseband: unit modulus and length") {
    const auto s = lfm_baseband(1e-6, 40e6, 48e6);
    CHECK(s.size() == 48);
    double worst = 0.0;
    for (const auto& v : s.samples) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
    CHECK(worst < 1e-15);
    CHECK_THROWS_AS(lfm_baseband(0.0, 40e6, 48e6), ParameterError);
    CHECK_THROWS_AS(lfm_baseband(1e-6, -1.0, 48e6), ParameterError);
    CHECK_THROWS_AS(lfm_baseband(1e-6, 40e6, 0.0), ParameterError);
}

TEST_CASE("lfm_baseband: autocorrelation mainlobe") {
    const auto s = lfm_baseband(1e-6, 40e6, 48e6);
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    std::vector<double> mag;
    for (std::ptrdiff_t lag = 0; lag < n; ++lag) {
        cplx acc = 0.0;
        for (std::ptrdiff_t i = lag; i < n; ++i) acc += s.samples[i] * std::conj(s.samples[i - lag]);
        mag.push_back(std::abs(acc));
    }
    for (std::size_t l = 1; l < mag.size(); ++l) CHECK(mag[l] < mag[0]);

    // Band-limited interpolation of the correlation from the zero-padded power spectrum.
    const std::size_t nfft = 1024;
    std::vector<double> power(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            acc += s.samples[i] * std::polar(1.0, -2.0 * kPi * double(k * i) / double(nfft));
        power[k] = std::norm(acc);
    }
    auto corr = [&](double lag) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < nfft; ++k) {
            const double f = k < nfft / 2 ? double(k) : double(k) - double(nfft);
            acc += power[k] * std::polar(1.0, 2.0 * kPi * f * lag / double(nfft));
        }
        return std::abs(acc);
    };
    const double peak = corr(0.0);
    double lag = 0.0;
    while (corr(lag) > peak / std::sqrt(2.0)) lag += 0.001;
    const double width = 2.0 * lag;
    MESSAGE("mainlobe width " << width);
    CHECK(std::abs(width - 48.0 / 40.0) <= 0.2 * 48.0 / 40.0);
}

TEST_CASE("lfm_baseband: in-band energy") {
    const auto s = lfm_baseband(1e-6, 40e6, 48e6);
    const std::size_t nfft = 1024;
    double in = 0.0, total = 0.0;
    for (std::size_t k = 0; k < nfft; ++k) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            acc += s.samples[i] * std::polar(1.0, -2.0 * kPi * double(k * i) / double(nfft));
        double f = double(k) / double(nfft) * 48e6;
        if (f >= 24e6) f -= 48e6;
        total += std::norm(acc);
        if (std::abs(f) <= 20e6) in += std::norm(acc);
    }
    CHECK(in / total >= 0.95);
}

TEST_CASE("steering_vector") {
    const auto a0 = steering_vector(0.0, 4);
    for (const auto& v : a0) CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-15);
    const auto a30 = steering_vector(kPi / 6, 2);
    CHECK(std::abs(a30[1] - cplx(0.0, 1.0)) < 1e-12);
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        const double th = rng.uniform(-1.4, 1.4);
        const auto p = steering_vector(th, 8), m = steering_vector(-th, 8);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(std::abs(m[i] - std::conj(p[i])) < 1e-12);
            CHECK(std::abs(std::abs(p[i]) - 1.0) < 1e-15);
            norm2 += std::norm(p[i]);
        }
        CHECK(norm2 == doctest::Approx(8.0).epsilon(1e-14));
    }
}

TEST_CASE("doppler_frequency") {
    CHECK(doppler_frequency(0.0, 10e9) == 0.0);
    CHECK(doppler_frequency(300.0, 10e9) == doctest::Approx(20013.845711889).epsilon(1e-10));
    CHECK(doppler_frequency(-50.0, 10e9) < 0.0);
}

TEST_CASE("spatial_gain") {
    for (double th : {0.0, 0.3, -0.7}) {
        auto w = steering_vector(th, 4);
        for (auto& v : w) v /= 2.0;
        CHECK(std::abs(spatial_gain(w, th) - cplx(2.0, 0.0)) < 1e-12);
    }
    const std::vector<cplx> one{cplx(1.0, 0.0)};
    CHECK(std::abs(spatial_gain(one, 0.9) - cplx(1.0, 0.0)) < 1e-15);
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        std::vector<cplx> w(6);
        double nw = 0.0;
        for (auto& v : w) {
            v = rng.complex_normal();
            nw += std::norm(v);
        }
        CHECK(std::abs(spatial_gain(w, rng.uniform(-1.5, 1.5))) <= std::sqrt(nw) * std::sqrt(6.0) + 1e-12);
    }
}

TEST_CASE("drfm_intercept") {
    RadarConfig cfg;
    const auto s = lfm_baseband(cfg.pulse_width, cfg.bandwidth, cfg.sample_rate);
    const auto r = drfm_intercept(cfg, 0.0, 0.0, 0.0);
    CHECK(r.size() == cfg.fast_time_len());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.samples[i] == (i < s.size() ? s.samples[i] : cplx(0.0, 0.0)));

    const auto d = drfm_intercept(cfg, 0.0, 10.0 / cfg.sample_rate, 0.0);
    std::size_t first = 0;
    while (d.samples[first] == cplx(0.0, 0.0)) ++first;
    CHECK(first == 10);

    double e0 = 0.0, e1 = 0.0;
    for (const auto& v : r.samples) e0 += std::norm(v);
    for (const auto& v : drfm_intercept(cfg, 0.0, 150.0 / cfg.sample_rate, 0.0).samples) e1 += std::norm(v);
    CHECK(e1 == doctest::Approx(e0).epsilon(1e-12));

    const auto v = drfm_intercept(cfg, 0.0, 0.0, 300.0);
    const double fd = 2.0 * 300.0 * cfg.carrier_f0 / kSpeedOfLight;
    double worst = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        const double phase = std::arg(v.samples[n] / s.samples[n]);
        const double expect = std::remainder(-2.0 * kPi * fd * double(n) / cfg.sample_rate, 2.0 * kPi);
        worst = std::max(worst, std::abs(std::remainder(phase - expect, 2.0 * kPi)));
    }
    CHECK(worst < 1e-9);

    CHECK_THROWS_AS(drfm_intercept(cfg, 0.0, 230.0 / cfg.sample_rate, 0.0), ParameterError);
}

TEST_CASE("RadarConfig defaults") {
    RadarConfig cfg;
    CHECK(cfg.fast_time_len() == 241);
    CHECK(cfg.pulse_len() == 48);
    cfg.pulse_width = 6e-6;
    CHECK_THROWS(cfg.validate());
}
