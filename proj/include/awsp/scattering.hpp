// SPDX-License-Identifier: Apache-2.0
//
// Dual-tree complex wavelet transform (1-D and 2-D) and the scattering network
// built on it.

#pragma once

#include "awsp/common.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace awsp {

struct FilterBank {
    std::string first_name, qshift_name;
    // First level: odd-length near-symmetric analysis/synthesis pairs shared by both trees.
    std::vector<double> h0o, h1o, g0o, g1o;
    // Later levels: quarter-shift pairs, tree b is the time reverse of tree a.
    std::vector<double> h0a, h0b, h1a, h1b, g0a, g0b, g1a, g1b;
};

// first_len in {5, 13}, qshift_len in {10, 14, 16, 18}.
FilterBank build_filterbank(std::size_t first_len = 13, std::size_t qshift_len = 14);

// Orientation order: 15, 45, 75, 105, 135, 165 degrees.
inline constexpr std::size_t kOrientations = 6;

struct Dtcwt2d {
    // levels[j] holds the six complex subbands of level j + 1, each (H / 2^(j+1)) x (W / 2^(j+1)).
    std::vector<std::array<ComplexMatrix, kOrientations>> levels;
    // Interleaved lowpass of the last level, (H / 2^(J-1)) x (W / 2^(J-1)).
    RealMatrix lowpass;
};

// Requires both dimensions to be multiples of 2^J.
Dtcwt2d dtcwt_forward(const RealMatrix& x, const FilterBank& bank, std::size_t levels);
RealMatrix dtcwt_inverse(const Dtcwt2d& t, const FilterBank& bank);

struct Dtcwt1d {
    std::vector<ComplexVector> levels;
    Eigen::VectorXd lowpass;
};

Dtcwt1d dtcwt1d_forward(const Eigen::VectorXd& x, const FilterBank& bank, std::size_t levels);
Eigen::VectorXd dtcwt1d_inverse(const Dtcwt1d& t, const FilterBank& bank);

// Column-axis primitives (filtering along rows index), exposed for tests.
RealMatrix colfilter(const RealMatrix& x, std::span<const double> h);
RealMatrix coldfilt(const RealMatrix& x, std::span<const double> ha, std::span<const double> hb);
RealMatrix colifilt(const RealMatrix& x, std::span<const double> ha, std::span<const double> hb);

// ---------------------------------------------------------------------------------------------
// Scattering

struct ScatterConfig {
    std::size_t scales = 3;    // J
    std::size_t max_order = 2; // 0, 1 or 2
    std::size_t orientations = kOrientations;
    std::size_t input_channels = 2; // real and imaginary planes

    void validate() const;
    std::size_t channels_per_plane() const;
    std::size_t channel_count() const { return input_channels * channels_per_plane(); }
    // Padded extent: smallest multiple of 2^(J+1) that is >= n.
    std::size_t padded(std::size_t n) const;
};

struct ScatterFeatures {
    std::size_t channels = 0, rows = 0, cols = 0;
    std::vector<double> data; // channel-major

    double* channel(std::size_t c) { return data.data() + c * rows * cols; }
    const double* channel(std::size_t c) const { return data.data() + c * rows * cols; }
    std::size_t plane_size() const { return rows * cols; }
};

// Channel descriptors in canonical order: per plane (re, im), order 0, then order 1
// by (j, k), then order 2 by (j1, k1, j2, k2).
nlohmann::json channel_manifest(const ScatterConfig& cfg);

// Each plane is zero-padded at the trailing edges to padded() before the transform.
// Output grid is padded(Q) / 2^J by padded(L) / 2^J.
ScatterFeatures scatter(const PulseMatrix& z, const FilterBank& bank, const ScatterConfig& cfg);
ScatterFeatures scatter_plane(const RealMatrix& x, const FilterBank& bank, const ScatterConfig& cfg);

// Nonnegative averaging: `decimations` halvings with a [1 3 3 1] / (4 sqrt 2) kernel per axis,
// then two [1 2 1] / 4 smoothing passes at the final resolution. Second-order paths smooth the
// first-order modulus once with [1 2 1] / 4 before the second transform.
RealMatrix average(const RealMatrix& u, std::size_t decimations);

struct FeatureScales {
    std::vector<double> scales; // one per channel, 0 means pass-through
};

// Median over samples of the per-channel mean absolute value.
FeatureScales fit_feature_scales(const std::vector<const ScatterFeatures*>& samples);

// sign(x) log(1 + |x| / scale_c); channels with zero scale are left unchanged.
ScatterFeatures feature_normalize(const ScatterFeatures& f, const FeatureScales& s);

void write_features(const std::filesystem::path& path, const ScatterFeatures& f, const nlohmann::json& manifest);
ScatterFeatures read_features(const std::filesystem::path& path, nlohmann::json* manifest = nullptr);

} // namespace awsp
