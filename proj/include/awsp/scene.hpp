// SPDX-License-Identifier: Apache-2.0
//
// Echo composition, noise and clutter, and the labeled dataset protocols.

#pragma once

#include "awsp/common.hpp"
#include "awsp/jamming.hpp"
#include "awsp/waveform.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace awsp {

inline constexpr int kNumClasses = 11;

// Class index per sample label: 0 point target, then the jamming families in this order.
inline constexpr JammingFamily kClassFamilies[kNumClasses - 1] = {
    JammingFamily::RDFJ, JammingFamily::VDFJ, JammingFamily::RVDJ, JammingFamily::ISFJ, JammingFamily::ISRJ,
    JammingFamily::CSJ,  JammingFamily::RGJ,  JammingFamily::VGJ,  JammingFamily::RVGJ, JammingFamily::SSJ};

std::string class_name(int label);
int class_of(JammingFamily f);

struct TargetSpec {
    double range = 0.0;    // meters
    double velocity = 0.0; // m/s
    double angle = 0.0;    // radians
    cplx amplitude{1.0, 0.0};
};

struct SceneSpec {
    RadarConfig config;
    std::vector<TargetSpec> targets;
    std::vector<JammingSpec> jammers;
    double snr_db = 10.0;
    double inr_db = 10.0;
    std::optional<double> cnr_db;
    double clutter_correlation = 0.9;
    std::uint64_t seed = 0;
};

struct LabeledSample {
    PulseMatrix matrix;
    int label = 0;
};

PulseMatrix target_echo(const TargetSpec& t, const RadarConfig& config);
std::size_t target_delay_bin(const TargetSpec& t, const RadarConfig& config);

PulseMatrix complex_noise(std::size_t rows, std::size_t cols, std::uint64_t seed);
PulseMatrix clutter(std::size_t rows, std::size_t cols, std::uint64_t seed, double correlation);

// Scales so that the mean power over nonzero entries equals reference_power * 10^(ratio_db/10).
PulseMatrix scale_to_ratio(const PulseMatrix& signal, double ratio_db, double reference_power = 1.0);

// Per-component parts of a scene, all after spatial gain and ratio scaling.
struct SceneParts {
    PulseMatrix targets;
    PulseMatrix jammers;
    PulseMatrix clutter;
    PulseMatrix noise;
};

SceneParts compose_scene_parts(const SceneSpec& s);
PulseMatrix compose_scene(const SceneSpec& s);

void to_json(nlohmann::json& j, const RadarConfig& c);
void from_json(const nlohmann::json& j, RadarConfig& c);
void to_json(nlohmann::json& j, const TargetSpec& t);
void from_json(const nlohmann::json& j, TargetSpec& t);
void to_json(nlohmann::json& j, const SceneSpec& s);
void from_json(const nlohmann::json& j, SceneSpec& s);

// ---------------------------------------------------------------------------------------------
// Dataset protocols

enum class Protocol { Train, Test };

std::string protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

struct DatasetOptions {
    Protocol protocol = Protocol::Train;
    std::size_t per_class = 10;
    std::uint64_t seed = 0;
    // Pins SNR and INR to one value instead of the protocol range.
    std::optional<double> fixed_snr_db;

    void validate() const;
};

struct SampleSpec {
    int label = 0;
    std::size_t index = 0;
    SceneSpec scene;
};

// Parameter draw for (seed, class, index); independent of any other sample.
SampleSpec draw_sample(const DatasetOptions& opts, int label, std::size_t index);

// Class-major order: all class-0 samples, then class 1, ...
std::vector<SampleSpec> draw_dataset(const DatasetOptions& opts);

LabeledSample realize(const SampleSpec& spec);

struct Dataset {
    std::vector<LabeledSample> samples;
    nlohmann::json manifest;
};

Dataset generate_dataset(const DatasetOptions& opts);

nlohmann::json dataset_manifest(const DatasetOptions& opts, const std::vector<SampleSpec>& specs);

// ---------------------------------------------------------------------------------------------
// Binary dataset file: "AWSPDS01", u32 count, u32 Q, u32 L, then per sample u8 label and
// Q*L little-endian f32 (re, im) pairs, row-major.

class DatasetWriter {
  public:
    DatasetWriter(const std::filesystem::path& path, std::uint32_t count, std::uint32_t rows, std::uint32_t cols);
    void write(const LabeledSample& s);
    void close();

  private:
    std::ofstream out_;
    std::uint32_t expected_, written_ = 0, rows_, cols_;
};

class DatasetReader {
  public:
    explicit DatasetReader(const std::filesystem::path& path);
    std::uint32_t count() const { return count_; }
    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    // Reads sample i sequentially; throws IoError past the end.
    LabeledSample next();
    bool done() const { return read_ == count_; }

  private:
    std::ifstream in_;
    std::uint32_t count_ = 0, rows_ = 0, cols_ = 0, read_ = 0;
};

// Streams samples to disk plus a sibling manifest (path with ".json" appended).
void write_dataset(const std::filesystem::path& path, const DatasetOptions& opts);

std::vector<LabeledSample> read_dataset(const std::filesystem::path& path);

} // namespace awsp
