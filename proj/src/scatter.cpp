// SPDX-License-Identifier: Apache-2.0

#include "awsp/binary_io.hpp"
#include "awsp/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace awsp {

namespace {

Eigen::Index mirror(std::ptrdiff_t i, std::ptrdiff_t n) {
    const std::ptrdiff_t period = 2 * n;
    std::ptrdiff_t p = i % period;
    if (p < 0) p += period;
    return static_cast<Eigen::Index>(p < n ? p : period - 1 - p);
}

constexpr double kDecimate[4] = {0.17677669529663688, 0.53033008588991065, 0.53033008588991065,
                                 0.17677669529663688}; // [1 3 3 1] / (4 sqrt 2)
constexpr double kSmooth[3] = {0.25, 0.5, 0.25};

// Halve the row count; output k is centered between input rows 2k and 2k+1.
RealMatrix decimate_rows(const RealMatrix& x) {
    const auto r = static_cast<std::ptrdiff_t>(x.rows());
    if (r % 2 != 0) throw DimensionError("average: odd extent cannot be halved");
    RealMatrix y = RealMatrix::Zero(r / 2, x.cols());
    for (std::ptrdiff_t k = 0; k < r / 2; ++k)
        for (std::ptrdiff_t i = 0; i < 4; ++i) y.row(k).noalias() += kDecimate[i] * x.row(mirror(2 * k - 1 + i, r));
    return y;
}

RealMatrix smooth_rows(const RealMatrix& x) {
    const auto r = static_cast<std::ptrdiff_t>(x.rows());
    RealMatrix y = RealMatrix::Zero(x.rows(), x.cols());
    for (std::ptrdiff_t k = 0; k < r; ++k)
        for (std::ptrdiff_t i = 0; i < 3; ++i) y.row(k).noalias() += kSmooth[i] * x.row(mirror(k - 1 + i, r));
    return y;
}

RealMatrix smooth(const RealMatrix& x) {
    return RealMatrix(smooth_rows(RealMatrix(smooth_rows(x).transpose())).transpose());
}

RealMatrix modulus(const ComplexMatrix& z) { return z.cwiseAbs(); }

RealMatrix pad_trailing(const RealMatrix& x, std::size_t rows, std::size_t cols) {
    if (static_cast<std::size_t>(x.rows()) == rows && static_cast<std::size_t>(x.cols()) == cols) return x;
    RealMatrix p = RealMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    p.topLeftCorner(x.rows(), x.cols()) = x;
    return p;
}

void append(std::vector<double>& dst, const RealMatrix& m) { dst.insert(dst.end(), m.data(), m.data() + m.size()); }

} // namespace

void ScatterConfig::validate() const {
    if (scales < 1) throw ConfigError("ScatterConfig: at least one scale");
    if (max_order > 2) throw ConfigError("ScatterConfig: max_order must be 0, 1 or 2");
    if (orientations != kOrientations) throw ConfigError("ScatterConfig: the 2-D dual tree has six orientations");
    if (input_channels != 1 && input_channels != 2) throw ConfigError("ScatterConfig: input_channels must be 1 or 2");
}

std::size_t ScatterConfig::channels_per_plane() const {
    std::size_t n = 1;
    if (max_order >= 1) n += orientations * scales;
    if (max_order >= 2) n += orientations * orientations * scales * (scales - 1) / 2;
    return n;
}

std::size_t ScatterConfig::padded(std::size_t n) const {
    const std::size_t unit = std::size_t{1} << (scales + 1);
    return (n + unit - 1) / unit * unit;
}

nlohmann::json channel_manifest(const ScatterConfig& cfg) {
    cfg.validate();
    auto list = nlohmann::json::array();
    const char* planes[2] = {"re", "im"};
    for (std::size_t p = 0; p < cfg.input_channels; ++p) {
        list.push_back({{"plane", planes[p]}, {"order", 0}, {"path", nlohmann::json::array()}});
        if (cfg.max_order >= 1)
            for (std::size_t j = 1; j <= cfg.scales; ++j)
                for (std::size_t k = 0; k < cfg.orientations; ++k)
                    list.push_back({{"plane", planes[p]}, {"order", 1}, {"path", {{j, k}}}});
        if (cfg.max_order >= 2)
            for (std::size_t j1 = 1; j1 < cfg.scales; ++j1)
                for (std::size_t k1 = 0; k1 < cfg.orientations; ++k1)
                    for (std::size_t j2 = j1 + 1; j2 <= cfg.scales; ++j2)
                        for (std::size_t k2 = 0; k2 < cfg.orientations; ++k2)
                            list.push_back({{"plane", planes[p]}, {"order", 2}, {"path", {{j1, k1}, {j2, k2}}}});
    }
    return {{"scales", cfg.scales},
            {"max_order", cfg.max_order},
            {"orientations", cfg.orientations},
            {"input_channels", cfg.input_channels},
            {"channels", list}};
}

RealMatrix average(const RealMatrix& u, std::size_t decimations) {
    RealMatrix x = u;
    for (std::size_t d = 0; d < decimations; ++d) {
        x = decimate_rows(x);
        x = RealMatrix(decimate_rows(RealMatrix(x.transpose())).transpose());
    }
    return smooth(smooth(x));
}

ScatterFeatures scatter_plane(const RealMatrix& plane, const FilterBank& bank, const ScatterConfig& cfg) {
    cfg.validate();
    const std::size_t J = cfg.scales;
    const std::size_t unit = std::size_t{1} << J;
    if (static_cast<std::size_t>(plane.rows()) < unit || static_cast<std::size_t>(plane.cols()) < unit)
        throw DimensionError("scatter: input smaller than 2^J");
    const RealMatrix x = pad_trailing(plane, cfg.padded(static_cast<std::size_t>(plane.rows())),
                                      cfg.padded(static_cast<std::size_t>(plane.cols())));
    ScatterFeatures f;
    f.rows = static_cast<std::size_t>(x.rows()) >> J;
    f.cols = static_cast<std::size_t>(x.cols()) >> J;
    f.channels = cfg.channels_per_plane();
    f.data.reserve(f.channels * f.rows * f.cols);

    append(f.data, average(x, J));
    if (cfg.max_order >= 1) {
        const auto t = dtcwt_forward(x, bank, J);
        std::vector<RealMatrix> first;
        first.reserve(J * kOrientations);
        for (std::size_t j = 1; j <= J; ++j)
            for (std::size_t k = 0; k < kOrientations; ++k) {
                first.push_back(modulus(t.levels[j - 1][k]));
                append(f.data, average(first.back(), J - j));
            }
        if (cfg.max_order >= 2)
            for (std::size_t j1 = 1; j1 < J; ++j1)
                for (std::size_t k1 = 0; k1 < kOrientations; ++k1) {
                    // The decimated modulus aliases; one smoothing pass keeps the second layer stable.
                    const auto t2 = dtcwt_forward(smooth(first[(j1 - 1) * kOrientations + k1]), bank, J - j1);
                    for (std::size_t j2 = j1 + 1; j2 <= J; ++j2)
                        for (std::size_t k2 = 0; k2 < kOrientations; ++k2)
                            append(f.data, average(modulus(t2.levels[j2 - j1 - 1][k2]), J - j2));
                }
    }
    return f;
}

ScatterFeatures scatter(const PulseMatrix& z, const FilterBank& bank, const ScatterConfig& cfg) {
    cfg.validate();
    ScatterFeatures out;
    for (std::size_t p = 0; p < cfg.input_channels; ++p) {
        const RealMatrix plane = p == 0 ? RealMatrix(z.real()) : RealMatrix(z.imag());
        auto f = scatter_plane(plane, bank, cfg);
        if (p == 0) {
            out.rows = f.rows;
            out.cols = f.cols;
        }
        out.channels += f.channels;
        out.data.insert(out.data.end(), f.data.begin(), f.data.end());
    }
    return out;
}

FeatureScales fit_feature_scales(const std::vector<const ScatterFeatures*>& samples) {
    if (samples.empty()) throw ParameterError("fit_feature_scales: no samples");
    const std::size_t channels = samples.front()->channels;
    FeatureScales s;
    s.scales.resize(channels);
    std::vector<double> means(samples.size());
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& f = *samples[i];
            if (f.channels != channels) throw DimensionError("fit_feature_scales: channel count differs");
            const double* ch = f.channel(c);
            double acc = 0.0;
            for (std::size_t k = 0; k < f.plane_size(); ++k) acc += std::abs(ch[k]);
            means[i] = acc / static_cast<double>(f.plane_size());
        }
        std::sort(means.begin(), means.end());
        const std::size_t n = means.size();
        s.scales[c] = n % 2 == 1 ? means[n / 2] : 0.5 * (means[n / 2 - 1] + means[n / 2]);
    }
    return s;
}

ScatterFeatures feature_normalize(const ScatterFeatures& f, const FeatureScales& s) {
    if (s.scales.size() != f.channels) throw DimensionError("feature_normalize: scale count != channel count");
    ScatterFeatures out = f;
    for (std::size_t c = 0; c < f.channels; ++c) {
        const double scale = s.scales[c];
        if (!(scale > 0.0)) continue;
        double* ch = out.channel(c);
        for (std::size_t k = 0; k < f.plane_size(); ++k) ch[k] = std::copysign(std::log1p(std::abs(ch[k]) / scale), ch[k]);
    }
    return out;
}

void write_features(const std::filesystem::path& path, const ScatterFeatures& f, const nlohmann::json& manifest) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open feature file for writing: " + path.string());
    const std::string text = manifest.dump();
    write_u32(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    write_u32(out, static_cast<std::uint32_t>(f.channels));
    write_u32(out, static_cast<std::uint32_t>(f.rows));
    write_u32(out, static_cast<std::uint32_t>(f.cols));
    std::vector<float> buf(f.data.begin(), f.data.end());
    write_f32(out, buf);
    if (!out) throw IoError("feature write failed: " + path.string());
}

ScatterFeatures read_features(const std::filesystem::path& path, nlohmann::json* manifest) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature file: " + path.string());
    const std::uint32_t len = read_u32(in);
    std::string text(len, '\0');
    in.read(text.data(), len);
    if (!in) throw IoError("truncated feature manifest: " + path.string());
    if (manifest) *manifest = nlohmann::json::parse(text);
    ScatterFeatures f;
    f.channels = read_u32(in);
    f.rows = read_u32(in);
    f.cols = read_u32(in);
    std::vector<float> buf(f.channels * f.rows * f.cols);
    read_f32(in, buf);
    f.data.assign(buf.begin(), buf.end());
    return f;
}

} // namespace awsp
