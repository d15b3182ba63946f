// SPDX-License-Identifier: Apache-2.0

#include "awsp/binary_io.hpp"
#include "awsp/scene.hpp"

#include <algorithm>
#include <cstring>

namespace awsp {

namespace {

constexpr char kMagic[8] = {'A', 'W', 'S', 'P', 'D', 'S', '0', '1'};

} // namespace

DatasetWriter::DatasetWriter(const std::filesystem::path& path, std::uint32_t count, std::uint32_t rows,
                             std::uint32_t cols)
    : out_(path, std::ios::binary | std::ios::trunc), expected_(count), rows_(rows), cols_(cols) {
    if (!out_) throw IoError("cannot open dataset file for writing: " + path.string());
    out_.write(kMagic, sizeof kMagic);
    write_u32(out_, count);
    write_u32(out_, rows);
    write_u32(out_, cols);
}

void DatasetWriter::write(const LabeledSample& s) {
    if (written_ == expected_) throw IoError("dataset writer: more samples than declared");
    if (s.matrix.rows() != rows_ || s.matrix.cols() != cols_)
        throw DimensionError("dataset writer: sample shape differs from header");
    if (s.label < 0 || s.label > 255) throw ParameterError("dataset writer: label does not fit in u8");
    const auto label = static_cast<std::uint8_t>(s.label);
    out_.write(reinterpret_cast<const char*>(&label), 1);
    std::vector<float> buf(static_cast<std::size_t>(s.matrix.size()) * 2);
    for (Eigen::Index i = 0; i < s.matrix.size(); ++i) {
        buf[2 * static_cast<std::size_t>(i)] = static_cast<float>(s.matrix.data()[i].real());
        buf[2 * static_cast<std::size_t>(i) + 1] = static_cast<float>(s.matrix.data()[i].imag());
    }
    write_f32(out_, buf);
    if (!out_) throw IoError("dataset writer: write failed");
    ++written_;
}

void DatasetWriter::close() {
    if (written_ != expected_) throw IoError("dataset writer: fewer samples than declared");
    out_.close();
    if (!out_) throw IoError("dataset writer: close failed");
}

DatasetReader::DatasetReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open dataset file: " + path.string());
    char magic[8];
    in_.read(magic, sizeof magic);
    if (!in_ || std::memcmp(magic, kMagic, sizeof magic) != 0) throw IoError("not an AWSPDS01 dataset: " + path.string());
    count_ = read_u32(in_);
    rows_ = read_u32(in_);
    cols_ = read_u32(in_);
}

LabeledSample DatasetReader::next() {
    if (read_ == count_) throw IoError("dataset reader: no more samples");
    std::uint8_t label = 0;
    in_.read(reinterpret_cast<char*>(&label), 1);
    std::vector<float> buf(static_cast<std::size_t>(rows_) * cols_ * 2);
    read_f32(in_, buf);
    if (!in_) throw IoError("dataset reader: truncated file");
    LabeledSample s;
    s.label = label;
    s.matrix.resize(rows_, cols_);
    for (Eigen::Index i = 0; i < s.matrix.size(); ++i)
        s.matrix.data()[i] = {buf[2 * static_cast<std::size_t>(i)], buf[2 * static_cast<std::size_t>(i) + 1]};
    ++read_;
    return s;
}

void write_dataset(const std::filesystem::path& path, const DatasetOptions& opts) {
    const auto specs = draw_dataset(opts);
    const auto& cfg = specs.front().scene.config;
    DatasetWriter writer(path, static_cast<std::uint32_t>(specs.size()), static_cast<std::uint32_t>(cfg.num_pulses),
                         static_cast<std::uint32_t>(cfg.fast_time_len()));
    const std::size_t chunk = std::max<std::size_t>(16, 4 * worker_count());
    std::vector<LabeledSample> block;
    for (std::size_t start = 0; start < specs.size(); start += chunk) {
        const std::size_t n = std::min(chunk, specs.size() - start);
        block.assign(n, LabeledSample{});
        parallel_for(n, [&](std::size_t i) { block[i] = realize(specs[start + i]); });
        for (const auto& s : block) writer.write(s);
    }
    writer.close();
    write_json_file(std::filesystem::path(path.string() + ".json"), dataset_manifest(opts, specs));
}

std::vector<LabeledSample> read_dataset(const std::filesystem::path& path) {
    DatasetReader r(path);
    std::vector<LabeledSample> out;
    out.reserve(r.count());
    while (!r.done()) out.push_back(r.next());
    return out;
}

} // namespace awsp
