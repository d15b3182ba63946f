// SPDX-License-Identifier: Apache-2.0

#include "awsp/jamming.hpp"

#include <array>
#include <cmath>
#include <string>

namespace awsp {

namespace {

constexpr std::array<std::string_view, 10> kFamilyNames = {"RDFJ", "VDFJ", "RVDJ", "ISFJ", "ISRJ",
                                                           "CSJ",  "SSJ",  "RGJ",  "VGJ",  "RVGJ"};

// Index of the last nonzero sample, or -1 for an all-zero series.
std::ptrdiff_t last_nonzero(const std::vector<cplx>& x) {
    for (auto i = static_cast<std::ptrdiff_t>(x.size()) - 1; i >= 0; --i)
        if (x[static_cast<std::size_t>(i)] != cplx{0.0, 0.0}) return i;
    return -1;
}

void check_fits(std::ptrdiff_t last, std::ptrdiff_t shift, std::size_t len, const char* who) {
    if (shift < 0) throw ParameterError(std::string(who) + ": negative delay");
    if (last >= 0 && last + shift >= static_cast<std::ptrdiff_t>(len))
        throw ParameterError(std::string(who) + ": delayed support overflows the PRI");
}

void check_series(const ComplexSeries& r, const RadarConfig& config, const char* who) {
    if (r.size() != config.fast_time_len())
        throw DimensionError(std::string(who) + ": intercept length does not match the PRI");
}

// Shared dense-false-target row: sum_i g_i r[n - d_i] exp(j 2 pi f_i (q Tr + n / fs)).
// RDFJ, VDFJ, RVDJ and the pull-off families all go through here, which makes their
// reductions bit-exact.
void false_target_row(const ComplexSeries& r, const std::vector<cplx>& gains,
                      const std::vector<std::ptrdiff_t>& delays, const std::vector<double>& dopplers,
                      std::size_t q, const RadarConfig& config, cplx* row) {
    const std::size_t len = config.fast_time_len();
    const double slow = static_cast<double>(q) * config.pri;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        for (std::size_t n = static_cast<std::size_t>(delays[i]); n < len; ++n) {
            const cplx x = r.samples[n - static_cast<std::size_t>(delays[i])];
            if (x == cplx{0.0, 0.0}) continue;
            const double t = slow + static_cast<double>(n) / config.sample_rate;
            row[n] += gains[i] * x * std::polar(1.0, 2.0 * kPi * dopplers[i] * t);
        }
    }
}

void check_false_targets(const FalseTargetParams& p, bool need_delays, bool need_dopplers, const char* who) {
    if (p.gains.empty()) throw ParameterError(std::string(who) + ": at least one false target required");
    if (need_delays && p.delays.size() != p.gains.size())
        throw DimensionError(std::string(who) + ": delays length != number of false targets");
    if (need_dopplers && p.dopplers.size() != p.gains.size())
        throw DimensionError(std::string(who) + ": dopplers length != number of false targets");
}

std::vector<std::ptrdiff_t> delay_samples(const std::vector<double>& delays, double offset, double fs) {
    std::vector<std::ptrdiff_t> d(delays.size());
    for (std::size_t i = 0; i < delays.size(); ++i) d[i] = to_samples(delays[i] + offset, fs);
    return d;
}

void check_delays(const ComplexSeries& r, const std::vector<std::ptrdiff_t>& d, std::size_t len, const char* who) {
    const auto last = last_nonzero(r.samples);
    for (auto di : d) check_fits(last, di, len, who);
}

PulseMatrix repeat_rows(const std::vector<cplx>& row, std::size_t rows) {
    PulseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(row.size()));
    for (Eigen::Index q = 0; q < m.rows(); ++q)
        for (Eigen::Index n = 0; n < m.cols(); ++n) m(q, n) = row[static_cast<std::size_t>(n)];
    return m;
}

struct GateGrid {
    std::size_t width, period, spacing;
};

GateGrid gate_grid(const SamplingParams& p, const RadarConfig& config) {
    if (!(p.slice_width > 0.0)) throw ParameterError("sampling: slice width must be positive");
    if (!(p.slice_period > 0.0) || p.repeat_spacing < 0.0)
        throw ParameterError("sampling: slice period must be positive and spacing non-negative");
    const auto fs = config.sample_rate;
    GateGrid g{static_cast<std::size_t>(to_samples(p.slice_width, fs)),
               static_cast<std::size_t>(to_samples(p.slice_period, fs)),
               static_cast<std::size_t>(to_samples(p.repeat_spacing, fs))};
    if (g.width == 0) throw ParameterError("sampling: slice width below one sample");
    if (g.width > g.period) throw ParameterError("sampling: slice width exceeds slice period");
    return g;
}

// r gated from its leading edge (sample 0), undelayed.
std::vector<cplx> gated_intercept(const ComplexSeries& r, const SamplingParams& p, const RadarConfig& config) {
    const auto g = gate_grid(p, config);
    const std::size_t slices = p.slice_count(config);
    std::vector<cplx> out(r.size(), cplx{0.0, 0.0});
    for (std::size_t d = 0; d < slices; ++d)
        for (std::size_t k = 0; k < g.width; ++k) {
            const std::size_t n = d * g.period + k;
            if (n < r.size()) out[n] = r.samples[n];
        }
    return out;
}

} // namespace

std::string_view family_name(JammingFamily f) { return kFamilyNames.at(static_cast<std::size_t>(f)); }

JammingFamily family_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
        if (kFamilyNames[i] == name) return static_cast<JammingFamily>(i);
    throw ConfigError("unknown jamming family '" + std::string(name) + "'");
}

std::size_t SamplingParams::slice_count(const RadarConfig& config) const {
    const auto period = to_samples(slice_period, config.sample_rate);
    if (period <= 0) throw ParameterError("sampling: slice period below one sample");
    return config.pulse_len() / static_cast<std::size_t>(period) + 1;
}

std::size_t SamplingParams::repeats(const RadarConfig& config) const {
    if (repeat_count) {
        if (*repeat_count == 0) throw ParameterError("sampling: repeat count must be >= 1");
        return *repeat_count;
    }
    return slice_count(config) + 1;
}

void PullOffParams::validate() const {
    if (standoff_frac < 0.0 || pull_frac < 0.0 || close_frac < 0.0)
        throw ParameterError("pull-off: period fractions must be non-negative");
    if (std::abs(standoff_frac + pull_frac + close_frac - 1.0) > 1e-9)
        throw ParameterError("pull-off: period fractions must sum to 1");
    if (drag_speed < 0.0 || drag_accel < 0.0) throw ParameterError("pull-off: negative drag speed or acceleration");
}

void JammingSpec::validate() const {
    switch (family) {
    case JammingFamily::RDFJ: check_false_targets(false_targets, true, false, "RDFJ"); break;
    case JammingFamily::VDFJ: check_false_targets(false_targets, false, true, "VDFJ"); break;
    case JammingFamily::RVDJ: check_false_targets(false_targets, true, true, "RVDJ"); break;
    case JammingFamily::RGJ: check_false_targets(false_targets, true, false, "RGJ"); break;
    case JammingFamily::VGJ: check_false_targets(false_targets, false, true, "VGJ"); break;
    case JammingFamily::RVGJ: check_false_targets(false_targets, true, true, "RVGJ"); break;
    case JammingFamily::ISFJ:
    case JammingFamily::ISRJ:
        if (!(sampling.slice_width > 0.0)) throw ParameterError("ISFJ/ISRJ: slice width must be positive");
        break;
    case JammingFamily::CSJ:
        if (comb.amplitudes.empty() || comb.amplitudes.size() != comb.frequencies.size())
            throw DimensionError("CSJ: amplitudes and frequencies must be non-empty and equal length");
        break;
    case JammingFamily::SSJ:
        if (smear.subpulses < 2) throw ParameterError("SSJ: at least two sub-pulses");
        break;
    }
    if (family == JammingFamily::RGJ || family == JammingFamily::VGJ || family == JammingFamily::RVGJ) {
        pulloff.validate();
        const PullOffMode want = family == JammingFamily::RGJ   ? PullOffMode::Range
                                 : family == JammingFamily::VGJ ? PullOffMode::Velocity
                                                                : PullOffMode::Both;
        if (pulloff.mode != want) throw ParameterError("pull-off mode does not match jamming family");
    }
}

PulseMatrix rdfj(const ComplexSeries& r, const FalseTargetParams& p, const RadarConfig& config) {
    check_series(r, config, "rdfj");
    check_false_targets(p, true, false, "rdfj");
    const auto d = delay_samples(p.delays, 0.0, config.sample_rate);
    const std::size_t len = config.fast_time_len();
    check_delays(r, d, len, "rdfj");
    const std::vector<double> zero(p.count(), 0.0);
    PulseMatrix m = PulseMatrix::Zero(static_cast<Eigen::Index>(config.num_pulses), static_cast<Eigen::Index>(len));
    for (std::size_t q = 0; q < config.num_pulses; ++q)
        false_target_row(r, p.gains, d, zero, q, config, m.row(static_cast<Eigen::Index>(q)).data());
    return m;
}

PulseMatrix vdfj(const ComplexSeries& r, const FalseTargetParams& p, double tau, const RadarConfig& config) {
    check_series(r, config, "vdfj");
    check_false_targets(p, false, true, "vdfj");
    const std::vector<double> common(p.count(), tau);
    const auto d = delay_samples(common, 0.0, config.sample_rate);
    const std::size_t len = config.fast_time_len();
    check_delays(r, d, len, "vdfj");
    PulseMatrix m = PulseMatrix::Zero(static_cast<Eigen::Index>(config.num_pulses), static_cast<Eigen::Index>(len));
    for (std::size_t q = 0; q < config.num_pulses; ++q)
        false_target_row(r, p.gains, d, p.dopplers, q, config, m.row(static_cast<Eigen::Index>(q)).data());
    return m;
}

PulseMatrix rvdj(const ComplexSeries& r, const FalseTargetParams& p, const RadarConfig& config) {
    check_series(r, config, "rvdj");
    check_false_targets(p, true, true, "rvdj");
    const auto d = delay_samples(p.delays, 0.0, config.sample_rate);
    const std::size_t len = config.fast_time_len();
    check_delays(r, d, len, "rvdj");
    PulseMatrix m = PulseMatrix::Zero(static_cast<Eigen::Index>(config.num_pulses), static_cast<Eigen::Index>(len));
    for (std::size_t q = 0; q < config.num_pulses; ++q)
        false_target_row(r, p.gains, d, p.dopplers, q, config, m.row(static_cast<Eigen::Index>(q)).data());
    return m;
}

PulseMatrix isfj(const ComplexSeries& r, const SamplingParams& p, double tau_c, const RadarConfig& config) {
    check_series(r, config, "isfj");
    const auto gated = gated_intercept(r, p, config);
    const auto shift = to_samples(tau_c, config.sample_rate);
    const std::size_t len = config.fast_time_len();
    check_fits(last_nonzero(gated), shift, len, "isfj");
    std::vector<cplx> row(len, cplx{0.0, 0.0});
    for (std::size_t n = 0; n + static_cast<std::size_t>(shift) < len; ++n)
        row[n + static_cast<std::size_t>(shift)] = gated[n];
    return repeat_rows(row, config.num_pulses);
}

PulseMatrix isrj(const ComplexSeries& r, const SamplingParams& p, double tau_c, const RadarConfig& config) {
    check_series(r, config, "isrj");
    const auto gated = gated_intercept(r, p, config);
    const auto g = gate_grid(p, config);
    const std::size_t repeats = p.repeats(config);
    const auto shift = to_samples(tau_c, config.sample_rate);
    const std::size_t len = config.fast_time_len();
    check_fits(last_nonzero(gated), shift + static_cast<std::ptrdiff_t>((repeats - 1) * g.spacing), len, "isrj");
    if (shift < 0) throw ParameterError("isrj: negative delay");
    std::vector<cplx> row(len, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < repeats; ++k) {
        const std::size_t off = static_cast<std::size_t>(shift) + k * g.spacing;
        for (std::size_t n = 0; n + off < len; ++n) row[n + off] += gated[n];
    }
    return repeat_rows(row, config.num_pulses);
}

PulseMatrix ssj(const ComplexSeries& r, const SmearParams& p, double tau, const RadarConfig& config) {
    check_series(r, config, "ssj");
    const std::size_t np = config.pulse_len();
    if (p.subpulses < 2) throw ParameterError("ssj: at least two sub-pulses");
    if (p.subpulses > np) throw ParameterError("ssj: more sub-pulses than pulse samples");
    std::vector<cplx> compressed;
    for (std::size_t k = 0; k * p.subpulses < np; ++k) compressed.push_back(r.samples[k * p.subpulses]);
    const auto base = to_samples(tau, config.sample_rate);
    const std::size_t len = config.fast_time_len();
    std::vector<cplx> row(len, cplx{0.0, 0.0});
    for (std::size_t i = 1; i <= p.subpulses; ++i) {
        const auto start = base + to_samples(static_cast<double>(i) * config.pulse_width /
                                                 static_cast<double>(p.subpulses), config.sample_rate);
        check_fits(static_cast<std::ptrdiff_t>(compressed.size()) - 1, start, len, "ssj");
        for (std::size_t k = 0; k < compressed.size(); ++k) row[static_cast<std::size_t>(start) + k] += compressed[k];
    }
    return repeat_rows(row, config.num_pulses);
}

PulseMatrix csj(const CombParams& p, const RadarConfig& config) {
    if (p.amplitudes.empty() || p.amplitudes.size() != p.frequencies.size())
        throw DimensionError("csj: amplitudes and frequencies must be non-empty and equal length");
    for (double f : p.frequencies)
        if (!(std::abs(f) < 0.5 * config.sample_rate)) throw ParameterError("csj: tooth frequency aliases");
    const std::size_t len = config.fast_time_len();
    std::vector<cplx> row(len, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < p.amplitudes.size(); ++k)
        for (std::size_t n = 0; n < len; ++n)
            row[n] += p.amplitudes[k] *
                      std::polar(1.0, 2.0 * kPi * p.frequencies[k] * static_cast<double>(n) / config.sample_rate);
    return repeat_rows(row, config.num_pulses);
}

PullOffState pulloff_trajectory(const PullOffParams& p, const RadarConfig& config, std::size_t pulse_index) {
    p.validate();
    if (pulse_index >= config.num_pulses) throw ParameterError("pulloff_trajectory: pulse index out of range");
    const double cpi = static_cast<double>(config.num_pulses) * config.pri;
    const double t1 = p.standoff_frac * cpi;
    const double t2 = t1 + p.pull_frac * cpi;
    const double tq = static_cast<double>(pulse_index) * config.pri;
    PullOffState s;
    if (tq < t1) return s;
    if (tq >= t2) {
        s.vanished = true;
        return s;
    }
    const double t = tq - t1;
    if (p.mode != PullOffMode::Velocity) {
        double range = p.drag_speed * t + 0.5 * p.drag_accel * t * t;
        if (p.max_range_offset) range = std::min(range, *p.max_range_offset);
        s.delay_offset = 2.0 * range / kSpeedOfLight;
    }
    if (p.mode != PullOffMode::Range) {
        double vel = p.drag_speed + p.drag_accel * t;
        if (p.max_velocity_offset) vel = std::min(vel, *p.max_velocity_offset);
        s.doppler_offset = doppler_frequency(vel, config.carrier_f0);
    }
    return s;
}

PulseMatrix apply_pulloff(const ComplexSeries& r, const PullOffParams& pull, const FalseTargetParams& ft,
                          double tau, const RadarConfig& config) {
    check_series(r, config, "apply_pulloff");
    pull.validate();
    const bool range = pull.mode != PullOffMode::Velocity;
    const bool velocity = pull.mode != PullOffMode::Range;
    check_false_targets(ft, range, velocity, "apply_pulloff");
    const std::size_t len = config.fast_time_len();
    const std::vector<double> common(ft.count(), tau);
    const std::vector<double> zero(ft.count(), 0.0);
    PulseMatrix m = PulseMatrix::Zero(static_cast<Eigen::Index>(config.num_pulses), static_cast<Eigen::Index>(len));
    for (std::size_t q = 0; q < config.num_pulses; ++q) {
        const auto s = pulloff_trajectory(pull, config, q);
        if (s.vanished) continue;
        const auto d = delay_samples(range ? ft.delays : common, s.delay_offset, config.sample_rate);
        check_delays(r, d, len, "apply_pulloff");
        std::vector<double> f = zero;
        if (velocity)
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = ft.dopplers[i] + s.doppler_offset;
        false_target_row(r, ft.gains, d, f, q, config, m.row(static_cast<Eigen::Index>(q)).data());
    }
    return m;
}

PulseMatrix generate_jamming(const JammingSpec& spec, const RadarConfig& config) {
    spec.validate();
    const auto r = drfm_intercept(config, spec.theta, 0.0, spec.velocity);
    switch (spec.family) {
    case JammingFamily::RDFJ: return rdfj(r, spec.false_targets, config);
    case JammingFamily::VDFJ: return vdfj(r, spec.false_targets, spec.tau, config);
    case JammingFamily::RVDJ: return rvdj(r, spec.false_targets, config);
    case JammingFamily::ISFJ: return isfj(r, spec.sampling, spec.tau_c.value_or(spec.tau), config);
    case JammingFamily::ISRJ: return isrj(r, spec.sampling, spec.tau_c.value_or(spec.tau), config);
    case JammingFamily::CSJ: return csj(spec.comb, config);
    case JammingFamily::SSJ: return ssj(r, spec.smear, spec.tau, config);
    case JammingFamily::RGJ:
    case JammingFamily::VGJ:
    case JammingFamily::RVGJ: return apply_pulloff(r, spec.pulloff, spec.false_targets, spec.tau, config);
    }
    throw ConfigError("generate_jamming: unhandled family");
}

// ---------------------------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json complex_list(const std::vector<cplx>& v) {
    auto a = nlohmann::json::array();
    for (const auto& c : v) a.push_back({c.real(), c.imag()});
    return a;
}

std::vector<cplx> complex_list(const nlohmann::json& a) {
    std::vector<cplx> v;
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2) throw ConfigError("complex values are encoded as [re, im]");
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return v;
}

std::string_view mode_name(PullOffMode m) {
    switch (m) {
    case PullOffMode::Range: return "range";
    case PullOffMode::Velocity: return "velocity";
    case PullOffMode::Both: return "both";
    }
    return "range";
}

PullOffMode mode_from_name(const std::string& s) {
    if (s == "range") return PullOffMode::Range;
    if (s == "velocity") return PullOffMode::Velocity;
    if (s == "both") return PullOffMode::Both;
    throw ConfigError("unknown pull-off mode '" + s + "'");
}

bool uses_false_targets(JammingFamily f) {
    switch (f) {
    case JammingFamily::RDFJ:
    case JammingFamily::VDFJ:
    case JammingFamily::RVDJ:
    case JammingFamily::RGJ:
    case JammingFamily::VGJ:
    case JammingFamily::RVGJ: return true;
    default: return false;
    }
}

} // namespace

void to_json(nlohmann::json& j, const JammingSpec& s) {
    j = nlohmann::json{{"family", family_name(s.family)},
                       {"theta", s.theta},
                       {"tau", s.tau},
                       {"velocity", s.velocity},
                       {"seed", s.seed}};
    if (uses_false_targets(s.family))
        j["false_targets"] = {{"gains", complex_list(s.false_targets.gains)},
                              {"delays", s.false_targets.delays},
                              {"dopplers", s.false_targets.dopplers}};
    if (s.family == JammingFamily::ISFJ || s.family == JammingFamily::ISRJ) {
        j["sampling"] = {{"slice_width", s.sampling.slice_width},
                         {"slice_period", s.sampling.slice_period},
                         {"repeat_spacing", s.sampling.repeat_spacing}};
        if (s.sampling.repeat_count) j["sampling"]["repeat_count"] = *s.sampling.repeat_count;
        if (s.tau_c) j["tau_c"] = *s.tau_c;
    }
    if (s.family == JammingFamily::CSJ)
        j["comb"] = {{"amplitudes", complex_list(s.comb.amplitudes)}, {"frequencies", s.comb.frequencies}};
    if (s.family == JammingFamily::SSJ) j["smear"] = {{"subpulses", s.smear.subpulses}};
    if (s.family == JammingFamily::RGJ || s.family == JammingFamily::VGJ || s.family == JammingFamily::RVGJ) {
        const auto& p = s.pulloff;
        j["pulloff"] = {{"mode", mode_name(p.mode)},         {"drag_speed", p.drag_speed},
                        {"drag_accel", p.drag_accel},         {"standoff_frac", p.standoff_frac},
                        {"pull_frac", p.pull_frac},           {"close_frac", p.close_frac}};
        if (p.max_range_offset) j["pulloff"]["max_range_offset"] = *p.max_range_offset;
        if (p.max_velocity_offset) j["pulloff"]["max_velocity_offset"] = *p.max_velocity_offset;
    }
}

void from_json(const nlohmann::json& j, JammingSpec& s) {
    try {
        s = JammingSpec{};
        s.family = family_from_name(j.at("family").get<std::string>());
        s.theta = j.value("theta", 0.0);
        s.tau = j.value("tau", 0.0);
        s.velocity = j.value("velocity", 0.0);
        s.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("false_targets")) {
            const auto& f = j["false_targets"];
            s.false_targets.gains = complex_list(f.value("gains", nlohmann::json::array()));
            s.false_targets.delays = f.value("delays", std::vector<double>{});
            s.false_targets.dopplers = f.value("dopplers", std::vector<double>{});
        }
        if (j.contains("sampling")) {
            const auto& p = j["sampling"];
            s.sampling.slice_width = p.value("slice_width", s.sampling.slice_width);
            s.sampling.slice_period = p.value("slice_period", s.sampling.slice_period);
            s.sampling.repeat_spacing = p.value("repeat_spacing", s.sampling.repeat_spacing);
            if (p.contains("repeat_count")) s.sampling.repeat_count = p["repeat_count"].get<std::size_t>();
        }
        if (j.contains("tau_c")) s.tau_c = j["tau_c"].get<double>();
        if (j.contains("comb")) {
            s.comb.amplitudes = complex_list(j["comb"].at("amplitudes"));
            s.comb.frequencies = j["comb"].at("frequencies").get<std::vector<double>>();
        }
        if (j.contains("smear")) s.smear.subpulses = j["smear"].value("subpulses", s.smear.subpulses);
        if (j.contains("pulloff")) {
            const auto& p = j["pulloff"];
            auto& o = s.pulloff;
            o.mode = mode_from_name(p.value("mode", std::string("range")));
            o.drag_speed = p.value("drag_speed", o.drag_speed);
            o.drag_accel = p.value("drag_accel", o.drag_accel);
            o.standoff_frac = p.value("standoff_frac", o.standoff_frac);
            o.pull_frac = p.value("pull_frac", o.pull_frac);
            o.close_frac = p.value("close_frac", o.close_frac);
            if (p.contains("max_range_offset")) o.max_range_offset = p["max_range_offset"].get<double>();
            if (p.contains("max_velocity_offset")) o.max_velocity_offset = p["max_velocity_offset"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("jamming spec: ") + e.what());
    }
}

} // namespace awsp
