// SPDX-License-Identifier: Apache-2.0
//
// Transmit chirp, uniform-linear-array steering and the DRFM intercept.

#pragma once

#include "awsp/common.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace awsp {

struct ComplexSeries {
    std::vector<cplx> samples;
    double sample_rate = 0.0;

    std::size_t size() const { return samples.size(); }
};

struct RadarConfig {
    std::size_t num_tx = 1;
    std::size_t num_rx = 4;
    std::size_t num_pulses = 128;
    double carrier_f0 = 10e9;
    double bandwidth = 40e6;
    double sample_rate = 48e6;
    double pulse_width = 1e-6;
    double pri = 5e-6;
    // Extra fast-time samples appended after round(pri * sample_rate).
    std::size_t guard_samples = 1;
    // Fixed fast-time range window; overrides the PRI-derived length when set.
    std::optional<std::size_t> range_window;
    // +1 up-chirp, -1 down-chirp.
    int chirp_sign = 1;
    std::vector<cplx> tx_weights{cplx{1.0, 0.0}};
    // Empty means steering(look_angle) / sqrt(num_rx).
    std::vector<cplx> rx_weights;
    double look_angle = 0.0;

    std::size_t fast_time_len() const;
    std::size_t pulse_len() const;
    double prf() const { return 1.0 / pri; }
    std::vector<cplx> receive_weights() const;
    void validate() const;
};

ComplexSeries lfm_baseband(double pulse_width, double bandwidth, double sample_rate, int chirp_sign = 1);

std::vector<cplx> steering_vector(double theta, std::size_t n_elems);

double doppler_frequency(double velocity, double carrier_f0);

cplx spatial_gain(std::span<const cplx> weights, double theta);

// One PRI of the signal seen by the jammer: delayed, Doppler-shifted transmit pulse
// weighted by the transmit beam pattern toward theta.
ComplexSeries drfm_intercept(const RadarConfig& config, double theta, double tau, double velocity);

// Nearest-sample quantization of a time in seconds.
std::ptrdiff_t to_samples(double seconds, double sample_rate);

} // namespace awsp
