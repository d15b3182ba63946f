// SPDX-License-Identifier: Apache-2.0
//
// DRFM jamming generators. Every generator receives the undelayed intercept r
// (pulse leading edge at fast-time sample 0) and places its own delays, so the
// delay bookkeeping lives in one spot per family. Rows are pulses; the spatial
// factor toward the jammer is applied later by the scene.

#pragma once

#include "awsp/common.hpp"
#include "awsp/waveform.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace awsp {

enum class JammingFamily { RDFJ, VDFJ, RVDJ, ISFJ, ISRJ, CSJ, SSJ, RGJ, VGJ, RVGJ };

std::string_view family_name(JammingFamily f);
JammingFamily family_from_name(std::string_view name);

struct FalseTargetParams {
    std::vector<cplx> gains;
    std::vector<double> delays;   // seconds from the PRI start
    std::vector<double> dopplers; // Hz

    std::size_t count() const { return gains.size(); }
};

struct SamplingParams {
    double slice_width = 0.05e-6;
    double slice_period = 0.25e-6;
    double repeat_spacing = 0.05e-6;
    // Number of terms in the repeat train; unset means slice_count + 1.
    std::optional<std::size_t> repeat_count;

    // Slices per pulse: floor(Np / period) + 1 on the sample grid.
    std::size_t slice_count(const RadarConfig& config) const;
    std::size_t repeats(const RadarConfig& config) const;
};

struct CombParams {
    std::vector<cplx> amplitudes;
    std::vector<double> frequencies; // Hz
};

struct SmearParams {
    std::size_t subpulses = 5;
};

enum class PullOffMode { Range, Velocity, Both };

struct PullOffParams {
    PullOffMode mode = PullOffMode::Range;
    double drag_speed = 300.0; // m/s
    double drag_accel = 100.0; // m/s^2
    double standoff_frac = 0.2;
    double pull_frac = 0.6;
    double close_frac = 0.2;
    // Peak deviation clamps; unset means unbounded.
    std::optional<double> max_range_offset;    // meters
    std::optional<double> max_velocity_offset; // m/s

    void validate() const;
};

struct PullOffState {
    bool vanished = false;
    double delay_offset = 0.0;   // seconds
    double doppler_offset = 0.0; // Hz
};

struct JammingSpec {
    JammingFamily family = JammingFamily::RDFJ;
    double theta = 0.0;    // radians
    double tau = 0.0;      // base delay, seconds
    double velocity = 0.0; // jammer platform radial velocity, m/s
    std::uint64_t seed = 0;

    FalseTargetParams false_targets; // RDFJ VDFJ RVDJ RGJ VGJ RVGJ
    SamplingParams sampling;         // ISFJ ISRJ
    std::optional<double> tau_c;     // ISFJ ISRJ; defaults to tau
    CombParams comb;                 // CSJ
    SmearParams smear;               // SSJ
    PullOffParams pulloff;           // RGJ VGJ RVGJ

    void validate() const;
};

void to_json(nlohmann::json& j, const JammingSpec& s);
void from_json(const nlohmann::json& j, JammingSpec& s);

PulseMatrix rdfj(const ComplexSeries& r, const FalseTargetParams& p, const RadarConfig& config);
PulseMatrix vdfj(const ComplexSeries& r, const FalseTargetParams& p, double tau, const RadarConfig& config);
PulseMatrix rvdj(const ComplexSeries& r, const FalseTargetParams& p, const RadarConfig& config);
PulseMatrix isfj(const ComplexSeries& r, const SamplingParams& p, double tau_c, const RadarConfig& config);
PulseMatrix isrj(const ComplexSeries& r, const SamplingParams& p, double tau_c, const RadarConfig& config);
PulseMatrix ssj(const ComplexSeries& r, const SmearParams& p, double tau, const RadarConfig& config);
PulseMatrix csj(const CombParams& p, const RadarConfig& config);

PullOffState pulloff_trajectory(const PullOffParams& p, const RadarConfig& config, std::size_t pulse_index);

// Range mode drives RDFJ, velocity mode VDFJ at base delay tau, both modes RVDJ.
PulseMatrix apply_pulloff(const ComplexSeries& r, const PullOffParams& pull, const FalseTargetParams& ft,
                          double tau, const RadarConfig& config);

// Intercept plus family dispatch; the single-channel jamming matrix before spatial gain.
PulseMatrix generate_jamming(const JammingSpec& spec, const RadarConfig& config);

} // namespace awsp
