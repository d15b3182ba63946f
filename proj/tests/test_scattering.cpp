// SPDX-License-Identifier: Apache-2.0

#include "awsp/scattering.hpp"
#include "awsp/scene.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace awsp;

namespace {

RealMatrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    Rng rng(seed);
    RealMatrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

double subband_energy(const Dtcwt2d& t) {
    double e = 0.0;
    for (const auto& lvl : t.levels)
        for (const auto& b : lvl) e += b.squaredNorm();
    return e;
}

// Critically sampled separable Daubechies-4 transform with periodic extension, one level.
struct RealDwtLevel {
    RealMatrix low;
    std::array<RealMatrix, 3> detail;
};

RealDwtLevel d4_level(const RealMatrix& x) {
    const double r3 = std::sqrt(3.0), nrm = 4.0 * std::sqrt(2.0);
    const double h[4] = {(1 + r3) / nrm, (3 + r3) / nrm, (3 - r3) / nrm, (1 - r3) / nrm};
    const double g[4] = {h[3], -h[2], h[1], -h[0]};
    auto rows = [&](const RealMatrix& m, const double* f) {
        RealMatrix y = RealMatrix::Zero(m.rows() / 2, m.cols());
        for (Eigen::Index k = 0; k < y.rows(); ++k)
            for (int i = 0; i < 4; ++i) y.row(k) += f[i] * m.row((2 * k + i) % m.rows());
        return y;
    };
    auto cols = [&](const RealMatrix& m, const double* f) { return RealMatrix(rows(RealMatrix(m.transpose()), f).transpose()); };
    const RealMatrix lo = rows(x, h), hi = rows(x, g);
    return {cols(lo, h), {cols(lo, g), cols(hi, h), cols(hi, g)}};
}

std::vector<double> flatten(const ScatterFeatures& f) { return f.data; }

double rel_change(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += a[i] * a[i];
    }
    return std::sqrt(num / den);
}

RealMatrix shift_cols(const RealMatrix& x, Eigen::Index s) {
    RealMatrix y(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) y.col((j + s) % x.cols()) = x.col(j);
    return y;
}

} // namespace

TEST_CASE("filter bank: lowpass DC gain and unavailable lengths") {
    const auto bank = build_filterbank();
    auto sum = [](const std::vector<double>& h) { return std::accumulate(h.begin(), h.end(), 0.0); };
    CHECK(std::abs(sum(bank.h0a) - std::sqrt(2.0)) < 1e-8);
    CHECK(std::abs(sum(bank.h0b) - std::sqrt(2.0)) < 1e-8);
    CHECK_THROWS_AS(build_filterbank(7, 14), ConfigError);
    CHECK_THROWS_AS(build_filterbank(13, 11), ConfigError);
}

TEST_CASE("filter bank: tree b lowpass is a half-sample delay of tree a") {
    const auto bank = build_filterbank();
    auto centroid = [](const std::vector<double>& h) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            num += static_cast<double>(i) * h[i] * h[i];
            den += h[i] * h[i];
        }
        return num / den;
    };
    CHECK(std::abs(std::abs(centroid(bank.h0a) - centroid(bank.h0b)) - 0.5) < 0.05);
}

TEST_CASE("1-D dual tree: perfect reconstruction and one-sided wavelet") {
    const auto bank = build_filterbank();
    Rng rng(3);
    Eigen::VectorXd x(256);
    for (auto& v : x) v = rng.normal();
    const auto t = dtcwt1d_forward(x, bank, 4);
    const auto y = dtcwt1d_inverse(t, bank);
    CHECK((y - x).norm() / x.norm() <= 1e-10);

    // Impulse response of the level-3 complex wavelet: energy in negative frequencies.
    Dtcwt1d probe = dtcwt1d_forward(Eigen::VectorXd::Zero(256), bank, 4);
    probe.levels[2](probe.levels[2].size() / 2) = cplx(1.0, 0.0);
    Dtcwt1d probe_i = probe;
    probe_i.levels[2](probe.levels[2].size() / 2) = cplx(0.0, 1.0);
    const Eigen::VectorXd re = dtcwt1d_inverse(probe, bank), im = dtcwt1d_inverse(probe_i, bank);
    // Complex wavelet psi = re - j im reconstructs the analytic atom; check via brute DFT.
    const Eigen::Index n = re.size();
    double neg = 0.0, total = 0.0;
    for (Eigen::Index k = 1; k < n; ++k) {
        cplx acc = 0.0, acc_conj = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const cplx w = std::polar(1.0, -2.0 * kPi * double(k * i) / double(n));
            acc += cplx(re(i), -im(i)) * w;
            acc_conj += cplx(re(i), im(i)) * w;
        }
        const double e = std::max(std::norm(acc), std::norm(acc_conj));
        total += e;
        if (k > n / 2) neg += std::min(std::norm(acc), std::norm(acc_conj));
        else neg += std::min(std::norm(acc), std::norm(acc_conj)) * 0.0;
    }
    MESSAGE("negative-frequency fraction " << neg / total);
    CHECK(neg / total < 0.01);
}

TEST_CASE("2-D dual tree: round trip on 128x240") {
    const auto bank = build_filterbank();
    for (std::uint64_t s = 0; s < 5; ++s) {
        const RealMatrix x = random_matrix(128, 240, 100 + s);
        const auto t = dtcwt_forward(x, bank, 3);
        const RealMatrix y = dtcwt_inverse(t, bank);
        CHECK((y - x).norm() / x.norm() <= 1e-10);
    }
}

TEST_CASE("2-D dual tree: constant input, Parseval, linearity, lowpass-only projection") {
    const auto bank = build_filterbank();
    const RealMatrix c = RealMatrix::Constant(64, 64, 3.0);
    const auto tc = dtcwt_forward(c, bank, 3);
    for (const auto& b : tc.levels[0]) CHECK(b.cwiseAbs().maxCoeff() <= 1e-9);
    // The q-shift highpass taps do not sum to exactly zero; the residue scales with that leak.
    const double leak = std::abs(std::accumulate(bank.h1a.begin(), bank.h1a.end(), 0.0));
    for (std::size_t j = 1; j < tc.levels.size(); ++j)
        for (const auto& b : tc.levels[j]) CHECK(b.cwiseAbs().maxCoeff() <= 20.0 * leak * 3.0);

    const RealMatrix x = random_matrix(128, 240, 7);
    auto t = dtcwt_forward(x, bank, 3);
    const double low = t.lowpass.squaredNorm();
    const double ratio = (subband_energy(t) + low) / x.squaredNorm();
    MESSAGE("energy ratio " << ratio);
    CHECK(std::abs(ratio - 1.0) < 0.01);

    const RealMatrix y2 = dtcwt_inverse(dtcwt_forward(2.5 * x, bank, 3), bank);
    CHECK(((y2 - 2.5 * dtcwt_inverse(t, bank)).cwiseAbs().maxCoeff()) < 1e-12);

    for (auto& lvl : t.levels)
        for (auto& b : lvl) b.setZero();
    CHECK(dtcwt_inverse(t, bank).squaredNorm() <= x.squaredNorm());

    CHECK_THROWS_AS(dtcwt_forward(random_matrix(60, 64, 1), bank, 3), DimensionError);
}

TEST_CASE("2-D dual tree: impulse shift changes subband energy less than a real DWT") {
    const auto bank = build_filterbank();
    double worst_dtcwt = 0.0, worst_dwt = 0.0;
    for (Eigen::Index s = 0; s < 2; ++s) {
        RealMatrix a = RealMatrix::Zero(64, 64), b = RealMatrix::Zero(64, 64);
        a(32, 32 + s) = 1.0;
        b(32, 33 + s) = 1.0;
        const auto ta = dtcwt_forward(a, bank, 3), tb = dtcwt_forward(b, bank, 3);
        for (std::size_t j = 1; j < 3; ++j) {
            double ea = 0.0, eb = 0.0;
            for (std::size_t k = 0; k < kOrientations; ++k) {
                ea += ta.levels[j][k].squaredNorm();
                eb += tb.levels[j][k].squaredNorm();
            }
            worst_dtcwt = std::max(worst_dtcwt, std::abs(ea - eb) / ea);
        }
        RealMatrix la = a, lb = b;
        for (int j = 0; j < 3; ++j) {
            const auto da = d4_level(la), db = d4_level(lb);
            double ea = 0.0, eb = 0.0;
            for (int k = 0; k < 3; ++k) {
                ea += da.detail[k].squaredNorm();
                eb += db.detail[k].squaredNorm();
            }
            if (j > 0) worst_dwt = std::max(worst_dwt, std::abs(ea - eb) / ea);
            la = da.low;
            lb = db.low;
        }
    }
    MESSAGE("dtcwt " << worst_dtcwt << " dwt " << worst_dwt);
    CHECK(worst_dtcwt <= 0.05);
    CHECK(worst_dwt > 0.20);
}

TEST_CASE("scatter: shapes, channel counts, zero input, nonnegativity") {
    const auto bank = build_filterbank();
    ScatterConfig cfg;
    CHECK(cfg.channel_count() == 2 * (1 + 18 + 108));
    cfg.max_order = 1;
    CHECK(cfg.channel_count() == 38);
    CHECK(channel_manifest(cfg)["channels"].size() == 38);

    const PulseMatrix zero = PulseMatrix::Zero(128, 241);
    const auto fz = scatter(zero, bank, cfg);
    CHECK(fz.rows == 16);
    CHECK(fz.cols == 32);
    CHECK(std::all_of(fz.data.begin(), fz.data.end(), [](double v) { return v == 0.0; }));

    cfg.max_order = 2;
    PulseMatrix z = complex_noise(128, 241, 5);
    const auto f = scatter(z, bank, cfg);
    CHECK(f.channels == cfg.channel_count());
    for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t c = 1; c < cfg.channels_per_plane(); ++c) {
            const double* ch = f.channel(p * cfg.channels_per_plane() + c);
            CHECK(*std::min_element(ch, ch + f.plane_size()) >= -1e-9);
        }
    const auto f2 = scatter(z, bank, cfg);
    CHECK(f.data == f2.data);
}

TEST_CASE("scatter: second order carries less energy than first order") {
    const auto bank = build_filterbank();
    ScatterConfig cfg;
    DatasetOptions opts;
    for (int label = 0; label < kNumClasses; ++label) {
        const auto s = realize(draw_sample(opts, label, 0));
        const auto f = scatter(s.matrix, bank, cfg);
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t c = 1; c < cfg.channels_per_plane(); ++c) {
                const double* ch = f.channel(p * cfg.channels_per_plane() + c);
                const double e = std::inner_product(ch, ch + f.plane_size(), ch, 0.0);
                (c <= 18 ? e1 : e2) += e;
            }
        CHECK(e2 < e1);
    }
}

TEST_CASE("scatter: non-expansive on random pairs") {
    const auto bank = build_filterbank();
    ScatterConfig cfg;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const PulseMatrix x = complex_noise(64, 64, 10 + s), y = complex_noise(64, 64, 50 + s);
        const auto fx = scatter(x, bank, cfg), fy = scatter(y, bank, cfg);
        double d = 0.0;
        for (std::size_t i = 0; i < fx.data.size(); ++i) d += (fx.data[i] - fy.data[i]) * (fx.data[i] - fy.data[i]);
        CHECK(std::sqrt(d) <= (1 + 1e-6) * (x - y).norm());
    }
}

TEST_CASE("scatter: shift stability grows sub-linearly and beats raw first-level coefficients") {
    const auto bank = build_filterbank();
    const ScatterConfig cfg;
    DatasetOptions opts;
    for (int label : {0, 5, 8}) {
        const PulseMatrix z = realize(draw_sample(opts, label, 1)).matrix;
        const auto base = flatten(scatter(z, bank, cfg));
        const RealMatrix re = z.real().leftCols(240);
        const auto t0 = dtcwt_forward(re, bank, 1);
        double first = 0.0;
        for (Eigen::Index k = 1; k <= 4; ++k) {
            PulseMatrix zs(z.rows(), z.cols());
            for (Eigen::Index j = 0; j < z.cols(); ++j) zs.col((j + k) % z.cols()) = z.col(j);
            const double ds = rel_change(base, flatten(scatter(zs, bank, cfg)));
            const auto tk = dtcwt_forward(shift_cols(re, k), bank, 1);
            double num = 0.0, den = 0.0;
            for (std::size_t o = 0; o < kOrientations; ++o) {
                num += (tk.levels[0][o] - t0.levels[0][o]).squaredNorm();
                den += t0.levels[0][o].squaredNorm();
            }
            CHECK(ds < std::sqrt(num / den));
            if (k == 1) first = ds;
            else CHECK(ds < double(k) * first);
        }
    }
}

TEST_CASE("feature normalization and file round trip") {
    ScatterFeatures f;
    f.channels = 2;
    f.rows = 2;
    f.cols = 2;
    f.data = {0, 0, 0, 0, 1, 2, 3, 4};
    const auto scales = fit_feature_scales({&f});
    CHECK(scales.scales[0] == 0.0);
    CHECK(scales.scales[1] == doctest::Approx(2.5));
    const auto n = feature_normalize(f, scales);
    for (int i = 0; i < 4; ++i) CHECK(n.data[i] == 0.0);
    ScatterFeatures g = f;
    for (auto& v : g.data) v *= 2;
    const auto ng = feature_normalize(g, scales);
    for (int i = 4; i < 8; ++i) CHECK(ng.data[i] / n.data[i] < 2.0);

    const auto path = std::filesystem::temp_directory_path() / "awsp_features_test.bin";
    ScatterConfig cfg;
    write_features(path, f, channel_manifest(cfg));
    nlohmann::json m;
    const auto r = read_features(path, &m);
    CHECK(r.data == f.data);
    CHECK(m["channels"].size() == cfg.channel_count());
    std::filesystem::remove(path);
}
