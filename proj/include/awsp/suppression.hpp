// SPDX-License-Identifier: Apache-2.0
//
// Sliding-window target probability over fast time, rectangular accumulation and
// thresholded localization. Also the window-level training set for the detection model
// and the target-plus-jammers scenario used for end-to-end runs.

#pragma once

#include "awsp/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace awsp {

struct DetectionConfig {
    std::size_t window_len = 48; // L0
    double threshold_frac = 0.5;
    int target_class = 0;

    void validate(std::size_t fast_time_len) const;
};

// One pulse width in samples.
std::size_t default_window_len(const RadarConfig& c);

struct Detection {
    std::size_t bin = 0;        // estimated target leading-edge sample
    double peak = 0.0;          // largest accumulated value in the segment
    std::size_t first = 0;      // super-threshold segment, accumulated indexing
    std::size_t last = 0;
};

struct DetectionProfile {
    std::vector<double> probs;       // length L - L0 + 1
    std::vector<double> accumulated; // length probs + W - 1
    std::vector<Detection> detections;
};

// probs[t] = p* when window t (columns t .. t + L0 - 1) is assigned target_class, else 0.
std::vector<double> probability_profile(const PulseMatrix& z, const Model& m, const DetectionConfig& cfg);

// Full convolution with a length-W all-ones kernel.
std::vector<double> accumulate_profile(std::span<const double> probs, std::size_t W);

// Each maximal run with accumulated > W * threshold_frac is one detection, reported at
// the run's center mapped back to a leading edge: bin = round(center - (W - 1) / 2).
std::vector<Detection> detect_targets(std::span<const double> accumulated, std::size_t W, double threshold_frac);

DetectionProfile run_detection(const PulseMatrix& z, const Model& m, const DetectionConfig& cfg, std::size_t W);

void write_profile_csv(const std::filesystem::path& path, const DetectionProfile& p);
nlohmann::json detections_json(const std::vector<Detection>& d);

// ---------------------------------------------------------------------------------------------
// Window-level training data for the detection model.

inline constexpr int kBackgroundClass = kNumClasses; // noise, clutter, misaligned pulse tails

struct WindowDatasetOptions {
    std::size_t per_class = 100;
    std::uint64_t seed = 0;
    double snr_db = 10.0;
    std::size_t window_len = 48;
    // Target windows start within this many bins of a leading edge; background windows
    // start farther than this from every edge, half of them overlapping a pulse partially.
    std::size_t aligned_tolerance = 16;
    double clutter_fraction = 0.75;     // share of scenes with clutter, CNR uniform in [-10, 15] dB
    bool two_class = false;             // relabel: target 0, everything else 1

    void validate() const;
};

// Labels 0 (aligned target), 1..10 (windows touching the jammer), kBackgroundClass.
std::vector<LabeledSample> window_dataset(const WindowDatasetOptions& opts);

// ---------------------------------------------------------------------------------------------
// One target, one range-gate pull-off false target and one ISRJ train with disjoint
// footprints, separated by at least `gap` bins. The target leading edge stays at least
// `edge_margin` bins inside the profile range [0, L - pulse_len].

struct SuppressionScenario {
    SceneSpec scene;
    std::size_t target_bin = 0;
    std::vector<std::size_t> jammer_bins;
};

SuppressionScenario suppression_scenario(std::uint64_t seed, double snr_db, std::optional<double> cnr_db,
                                         std::size_t gap = 16, std::size_t edge_margin = 24);

} // namespace awsp
