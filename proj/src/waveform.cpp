// SPDX-License-Identifier: Apache-2.0

#include "awsp/waveform.hpp"

#include <cmath>
#include <string>

namespace awsp {

std::ptrdiff_t to_samples(double seconds, double sample_rate) {
    return static_cast<std::ptrdiff_t>(std::llround(seconds * sample_rate));
}

std::size_t RadarConfig::fast_time_len() const {
    if (range_window) return *range_window;
    return static_cast<std::size_t>(std::llround(pri * sample_rate)) + guard_samples;
}

std::size_t RadarConfig::pulse_len() const {
    return static_cast<std::size_t>(std::llround(pulse_width * sample_rate));
}

std::vector<cplx> RadarConfig::receive_weights() const {
    if (!rx_weights.empty()) return rx_weights;
    auto w = steering_vector(look_angle, num_rx);
    const double norm = 1.0 / std::sqrt(static_cast<double>(num_rx));
    for (auto& v : w) v *= norm;
    return w;
}

void RadarConfig::validate() const {
    if (num_tx < 1 || num_rx < 1 || num_pulses < 1)
        throw ParameterError("RadarConfig: array sizes and pulse count must be >= 1");
    if (!(pulse_width > 0.0) || !(pri > 0.0) || !(sample_rate > 0.0) || !(bandwidth > 0.0))
        throw ParameterError("RadarConfig: times and rates must be positive");
    if (pulse_width >= pri) throw ParameterError("RadarConfig: pulse width must be shorter than the PRI");
    if (bandwidth > sample_rate) throw ParameterError("RadarConfig: bandwidth exceeds complex sample rate");
    if (tx_weights.size() != num_tx) throw DimensionError("RadarConfig: tx_weights length != num_tx");
    if (!rx_weights.empty() && rx_weights.size() != num_rx)
        throw DimensionError("RadarConfig: rx_weights length != num_rx");
    for (const auto& w : rx_weights)
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw ParameterError("RadarConfig: non-finite rx weight");
    if (chirp_sign != 1 && chirp_sign != -1) throw ParameterError("RadarConfig: chirp_sign must be +1 or -1");
    if (pulse_len() < 1) throw ParameterError("RadarConfig: pulse shorter than one sample");
}

ComplexSeries lfm_baseband(double pulse_width, double bandwidth, double sample_rate, int chirp_sign) {
    if (!(pulse_width > 0.0) || !(bandwidth > 0.0) || !(sample_rate > 0.0))
        throw ParameterError("lfm_baseband: pulse width, bandwidth and sample rate must be positive");
    if (bandwidth > sample_rate) throw ParameterError("lfm_baseband: bandwidth exceeds sample rate");
    const auto n = static_cast<std::size_t>(std::llround(pulse_width * sample_rate));
    if (n == 0) throw ParameterError("lfm_baseband: pulse shorter than one sample");
    ComplexSeries s;
    s.sample_rate = sample_rate;
    s.samples.resize(n);
    const double rate = chirp_sign * bandwidth / pulse_width;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate - 0.5 * pulse_width;
        s.samples[i] = std::polar(1.0, kPi * rate * t * t);
    }
    return s;
}

std::vector<cplx> steering_vector(double theta, std::size_t n_elems) {
    if (!(std::abs(theta) < 0.5 * kPi)) throw ParameterError("steering_vector: |theta| must be < pi/2");
    std::vector<cplx> a(n_elems);
    const double step = kPi * std::sin(theta);
    for (std::size_t n = 0; n < n_elems; ++n) a[n] = std::polar(1.0, step * static_cast<double>(n));
    return a;
}

double doppler_frequency(double velocity, double carrier_f0) {
    return 2.0 * velocity * carrier_f0 / kSpeedOfLight;
}

cplx spatial_gain(std::span<const cplx> weights, double theta) {
    const auto a = steering_vector(theta, weights.size());
    cplx g{0.0, 0.0};
    for (std::size_t n = 0; n < a.size(); ++n) g += std::conj(weights[n]) * a[n];
    return g;
}

ComplexSeries drfm_intercept(const RadarConfig& config, double theta, double tau, double velocity) {
    config.validate();
    if (tau < 0.0) throw ParameterError("drfm_intercept: negative delay");
    const auto pulse = lfm_baseband(config.pulse_width, config.bandwidth, config.sample_rate, config.chirp_sign);
    const std::size_t len = config.fast_time_len();
    const auto delay = static_cast<std::size_t>(to_samples(tau, config.sample_rate));
    if (delay + pulse.size() > len)
        throw ParameterError("drfm_intercept: delay " + std::to_string(delay) +
                             " samples truncates the pulse inside a PRI of " + std::to_string(len));
    // All transmit channels share the chirp, so the beam pattern collapses to one scalar.
    const cplx beam = spatial_gain(config.tx_weights, theta);
    const double fd = doppler_frequency(velocity, config.carrier_f0);
    ComplexSeries r;
    r.sample_rate = config.sample_rate;
    r.samples.assign(len, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < pulse.size(); ++i) {
        const std::size_t n = i + delay;
        const double phase = -2.0 * kPi * fd * static_cast<double>(n) / config.sample_rate;
        r.samples[n] = beam * pulse.samples[i] * std::polar(1.0, phase);
    }
    return r;
}

} // namespace awsp
