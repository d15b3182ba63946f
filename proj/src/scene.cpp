// SPDX-License-Identifier: Apache-2.0

#include "awsp/scene.hpp"

#include <algorithm>
#include <cmath>

namespace awsp {

namespace {

constexpr double kDeg = kPi / 180.0;

// Stream tags for per-scene random draws.
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kClutterStream = 2;
constexpr std::uint64_t kSceneStream = 3;

} // namespace

std::string class_name(int label) {
    if (label == 0) return "target";
    if (label < 0 || label >= kNumClasses) throw ParameterError("class label out of range");
    return std::string(family_name(kClassFamilies[label - 1]));
}

int class_of(JammingFamily f) {
    for (int i = 0; i < kNumClasses - 1; ++i)
        if (kClassFamilies[i] == f) return i + 1;
    throw ParameterError("family has no class index");
}

std::size_t target_delay_bin(const TargetSpec& t, const RadarConfig& config) {
    const auto bin = to_samples(2.0 * t.range / kSpeedOfLight, config.sample_rate);
    if (bin < 0) throw ParameterError("target_echo: negative range");
    return static_cast<std::size_t>(bin);
}

PulseMatrix target_echo(const TargetSpec& t, const RadarConfig& config) {
    config.validate();
    const auto pulse = lfm_baseband(config.pulse_width, config.bandwidth, config.sample_rate, config.chirp_sign);
    const std::size_t len = config.fast_time_len();
    const std::size_t delay = target_delay_bin(t, config);
    if (delay + pulse.size() > len) throw ParameterError("target_echo: echo does not fit inside the PRI");
    const double fd = doppler_frequency(t.velocity, config.carrier_f0);
    PulseMatrix m = PulseMatrix::Zero(static_cast<Eigen::Index>(config.num_pulses), static_cast<Eigen::Index>(len));
    for (std::size_t q = 0; q < config.num_pulses; ++q) {
        const double slow = static_cast<double>(q) * config.pri;
        for (std::size_t i = 0; i < pulse.size(); ++i) {
            const std::size_t n = i + delay;
            const double time = slow + static_cast<double>(n) / config.sample_rate;
            m(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n)) =
                t.amplitude * pulse.samples[i] * std::polar(1.0, 2.0 * kPi * fd * time);
        }
    }
    return m;
}

PulseMatrix complex_noise(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    PulseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
    return m;
}

PulseMatrix clutter(std::size_t rows, std::size_t cols, std::uint64_t seed, double correlation) {
    if (!(correlation >= 0.0 && correlation < 1.0)) throw ParameterError("clutter: correlation must be in [0, 1)");
    Rng rng(seed);
    const double innov = std::sqrt(1.0 - correlation * correlation);
    PulseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index q = 0; q < m.rows(); ++q) {
        cplx prev = rng.complex_normal();
        if (m.cols() > 0) m(q, 0) = prev;
        for (Eigen::Index n = 1; n < m.cols(); ++n) {
            prev = correlation * prev + innov * rng.complex_normal();
            m(q, n) = prev;
        }
    }
    return m;
}

PulseMatrix scale_to_ratio(const PulseMatrix& signal, double ratio_db, double reference_power) {
    double power = 0.0;
    std::size_t support = 0;
    for (Eigen::Index i = 0; i < signal.size(); ++i) {
        const cplx v = signal.data()[i];
        if (v != cplx{0.0, 0.0}) {
            power += std::norm(v);
            ++support;
        }
    }
    if (support == 0 || !(power > 0.0)) throw ParameterError("scale_to_ratio: signal has no energy");
    power /= static_cast<double>(support);
    const double target = reference_power * std::pow(10.0, ratio_db / 10.0);
    return signal * std::sqrt(target / power);
}

SceneParts compose_scene_parts(const SceneSpec& s) {
    const auto& cfg = s.config;
    cfg.validate();
    const auto rows = static_cast<Eigen::Index>(cfg.num_pulses);
    const auto cols = static_cast<Eigen::Index>(cfg.fast_time_len());
    const auto w = cfg.receive_weights();
    const cplx look = spatial_gain(w, cfg.look_angle);
    if (std::abs(look) == 0.0) throw ParameterError("compose_scene: receive beam has a null at the look angle");

    SceneParts parts{PulseMatrix::Zero(rows, cols), PulseMatrix::Zero(rows, cols), PulseMatrix::Zero(rows, cols),
                     PulseMatrix()};
    for (const auto& t : s.targets)
        parts.targets += scale_to_ratio(target_echo(t, cfg), s.snr_db) * (spatial_gain(w, t.angle) / look);
    for (const auto& j : s.jammers)
        parts.jammers += scale_to_ratio(generate_jamming(j, cfg), s.inr_db) * (spatial_gain(w, j.theta) / look);
    if (s.cnr_db)
        parts.clutter = clutter(cfg.num_pulses, cfg.fast_time_len(), derive_seed(s.seed, {kClutterStream}),
                                s.clutter_correlation) *
                        std::sqrt(std::pow(10.0, *s.cnr_db / 10.0));
    parts.noise = complex_noise(cfg.num_pulses, cfg.fast_time_len(), derive_seed(s.seed, {kNoiseStream}));
    return parts;
}

PulseMatrix compose_scene(const SceneSpec& s) {
    auto p = compose_scene_parts(s);
    PulseMatrix z = p.targets + p.jammers + p.clutter + p.noise;
    if (!all_finite(z)) throw NumericError("compose_scene: non-finite output");
    return z;
}

// ---------------------------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json cplx_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

cplx cplx_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::json cplx_list(const std::vector<cplx>& v) {
    auto a = nlohmann::json::array();
    for (auto c : v) a.push_back(cplx_json(c));
    return a;
}

std::vector<cplx> cplx_list(const nlohmann::json& a) {
    std::vector<cplx> v;
    for (const auto& e : a) v.push_back(cplx_from(e));
    return v;
}

} // namespace

void to_json(nlohmann::json& j, const RadarConfig& c) {
    j = {{"num_tx", c.num_tx},
         {"num_rx", c.num_rx},
         {"num_pulses", c.num_pulses},
         {"carrier_f0", c.carrier_f0},
         {"bandwidth", c.bandwidth},
         {"sample_rate", c.sample_rate},
         {"pulse_width", c.pulse_width},
         {"pri", c.pri},
         {"guard_samples", c.guard_samples},
         {"chirp_sign", c.chirp_sign},
         {"tx_weights", cplx_list(c.tx_weights)},
         {"look_angle", c.look_angle},
         {"nominal_len", static_cast<std::size_t>(std::llround(c.pri * c.sample_rate))},
         {"fast_time_len", c.fast_time_len()}};
    if (c.range_window) j["range_window"] = *c.range_window;
    if (!c.rx_weights.empty()) j["rx_weights"] = cplx_list(c.rx_weights);
}

void from_json(const nlohmann::json& j, RadarConfig& c) {
    c = RadarConfig{};
    c.num_tx = j.value("num_tx", c.num_tx);
    c.num_rx = j.value("num_rx", c.num_rx);
    c.num_pulses = j.value("num_pulses", c.num_pulses);
    c.carrier_f0 = j.value("carrier_f0", c.carrier_f0);
    c.bandwidth = j.value("bandwidth", c.bandwidth);
    c.sample_rate = j.value("sample_rate", c.sample_rate);
    c.pulse_width = j.value("pulse_width", c.pulse_width);
    c.pri = j.value("pri", c.pri);
    c.guard_samples = j.value("guard_samples", c.guard_samples);
    c.chirp_sign = j.value("chirp_sign", c.chirp_sign);
    c.look_angle = j.value("look_angle", c.look_angle);
    if (j.contains("tx_weights")) c.tx_weights = cplx_list(j["tx_weights"]);
    if (j.contains("rx_weights")) c.rx_weights = cplx_list(j["rx_weights"]);
    if (j.contains("range_window") && !j["range_window"].is_null()) c.range_window = j["range_window"].get<std::size_t>();
}

void to_json(nlohmann::json& j, const TargetSpec& t) {
    j = {{"range", t.range}, {"velocity", t.velocity}, {"angle", t.angle}, {"amplitude", cplx_json(t.amplitude)}};
}

void from_json(const nlohmann::json& j, TargetSpec& t) {
    t = TargetSpec{};
    t.range = j.value("range", 0.0);
    t.velocity = j.value("velocity", 0.0);
    t.angle = j.value("angle", 0.0);
    if (j.contains("amplitude")) t.amplitude = cplx_from(j["amplitude"]);
}

void to_json(nlohmann::json& j, const SceneSpec& s) {
    j = {{"config", s.config},
         {"targets", s.targets},
         {"jammers", s.jammers},
         {"snr_db", s.snr_db},
         {"inr_db", s.inr_db},
         {"clutter_correlation", s.clutter_correlation},
         {"seed", s.seed}};
    j["cnr_db"] = s.cnr_db ? nlohmann::json(*s.cnr_db) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, SceneSpec& s) {
    try {
        s = SceneSpec{};
        if (j.contains("config")) s.config = j["config"].get<RadarConfig>();
        if (j.contains("targets")) s.targets = j["targets"].get<std::vector<TargetSpec>>();
        if (j.contains("jammers")) s.jammers = j["jammers"].get<std::vector<JammingSpec>>();
        s.snr_db = j.value("snr_db", s.snr_db);
        s.inr_db = j.value("inr_db", s.inr_db);
        s.clutter_correlation = j.value("clutter_correlation", s.clutter_correlation);
        s.seed = j.value("seed", s.seed);
        if (j.contains("cnr_db") && !j["cnr_db"].is_null()) s.cnr_db = j["cnr_db"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scene spec: ") + e.what());
    }
}

// ---------------------------------------------------------------------------------------------
// Protocols

std::string protocol_name(Protocol p) { return p == Protocol::Train ? "train" : "test"; }

Protocol protocol_from_name(const std::string& name) {
    if (name == "train") return Protocol::Train;
    if (name == "test") return Protocol::Test;
    throw ConfigError("unknown protocol '" + name + "'");
}

void DatasetOptions::validate() const {
    if (per_class < 1) throw ConfigError("dataset: per_class must be >= 1");
    if (fixed_snr_db && !std::isfinite(*fixed_snr_db)) throw ConfigError("dataset: non-finite fixed SNR");
}

namespace {

struct ProtocolRanges {
    double snr_lo, snr_hi;
    std::size_t targets_lo, targets_hi;
    std::size_t n1_lo, n1_hi;
    std::size_t teeth_lo, teeth_hi;
    std::size_t sub_lo, sub_hi;
};

constexpr ProtocolRanges kTrainRanges{-6.0, 10.0, 1, 1, 3, 9, 10, 10, 5, 5};
constexpr ProtocolRanges kTestRanges{-10.0, 15.0, 1, 3, 4, 10, 5, 15, 4, 8};
constexpr std::size_t kWindow = 241;

std::size_t draw_count(Rng& rng, std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

std::size_t draw_bin(Rng& rng, std::size_t extent, std::size_t len) {
    if (extent > len) throw ConfigError("protocol: source extent exceeds the fast-time window");
    return draw_count(rng, 0, len - extent);
}

cplx draw_gain(Rng& rng) {
    const double mag = rng.uniform(0.5, 1.0);
    return std::polar(mag, rng.uniform(0.0, 2.0 * kPi));
}

RadarConfig draw_config(Protocol p, Rng& rng) {
    RadarConfig c;
    if (p == Protocol::Test) {
        c.carrier_f0 = rng.uniform(8e9, 12e9);
        c.bandwidth = rng.uniform(20e6, 60e6);
        c.sample_rate = 68e6;
        // The pulse must leave room for jamming extents inside the 241-sample window.
        c.pulse_width = rng.uniform(1e-6, 2e-6);
        c.pri = rng.uniform(5e-6, 50e-6);
        c.range_window = kWindow;
    }
    return c;
}

// Fast-time samples occupied after the base delay.
std::size_t family_extent(const JammingSpec& j, const RadarConfig& c) {
    const std::size_t np = c.pulse_len();
    switch (j.family) {
    case JammingFamily::ISRJ: {
        const auto spacing = static_cast<std::size_t>(to_samples(j.sampling.repeat_spacing, c.sample_rate));
        return np + (j.sampling.repeats(c) - 1) * spacing;
    }
    case JammingFamily::SSJ: {
        const std::size_t ns = j.smear.subpulses;
        return static_cast<std::size_t>(to_samples(c.pulse_width, c.sample_rate)) + (np + ns - 1) / ns + 1;
    }
    default: return np;
    }
}

} // namespace

SampleSpec draw_sample(const DatasetOptions& opts, int label, std::size_t index) {
    if (label < 0 || label >= kNumClasses) throw ParameterError("draw_sample: label out of range");
    const auto& rg = opts.protocol == Protocol::Train ? kTrainRanges : kTestRanges;
    Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(label), index}));
    SampleSpec out;
    out.label = label;
    out.index = index;
    auto& s = out.scene;
    s.seed = derive_seed(opts.seed, {static_cast<std::uint64_t>(label), index, kSceneStream});
    s.config = draw_config(opts.protocol, rng);
    const auto& c = s.config;
    const std::size_t len = c.fast_time_len();
    const double fs = c.sample_rate;
    s.snr_db = opts.fixed_snr_db ? *opts.fixed_snr_db : rng.uniform(rg.snr_lo, rg.snr_hi);
    s.inr_db = opts.fixed_snr_db ? *opts.fixed_snr_db : rng.uniform(rg.snr_lo, rg.snr_hi);
    if (opts.protocol == Protocol::Test) s.cnr_db = rng.uniform(-10.0, 10.0);

    if (label == 0) {
        const std::size_t n = draw_count(rng, rg.targets_lo, rg.targets_hi);
        for (std::size_t i = 0; i < n; ++i) {
            TargetSpec t;
            const std::size_t bin = draw_bin(rng, c.pulse_len(), len);
            t.range = static_cast<double>(bin) * kSpeedOfLight / (2.0 * fs);
            t.velocity = rng.uniform(-500.0, 500.0);
            t.angle = rng.uniform(-3.0, 3.0) * kDeg;
            t.amplitude = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
            s.targets.push_back(t);
        }
        return out;
    }

    JammingSpec j;
    j.family = kClassFamilies[label - 1];
    j.theta = rng.uniform(-3.0, 3.0) * kDeg;
    j.velocity = rng.uniform(-500.0, 500.0);
    j.seed = rng.next();
    const double prf = c.prf();
    // Range drag pushes false targets later; keep room for the largest offset of the CPI.
    auto drag_extent = [&]() -> std::size_t {
        if (j.pulloff.mode == PullOffMode::Velocity) return 0;
        const double t = j.pulloff.pull_frac * static_cast<double>(c.num_pulses) * c.pri;
        const double range = j.pulloff.drag_speed * t + 0.5 * j.pulloff.drag_accel * t * t;
        return static_cast<std::size_t>(std::ceil(2.0 * range / kSpeedOfLight * fs)) + 1;
    };
    auto fill_false_targets = [&](bool delays, bool dopplers, std::size_t reserve) {
        const std::size_t n1 = draw_count(rng, rg.n1_lo, rg.n1_hi);
        for (std::size_t i = 0; i < n1; ++i) {
            j.false_targets.gains.push_back(draw_gain(rng));
            if (delays)
                j.false_targets.delays.push_back(static_cast<double>(draw_bin(rng, c.pulse_len() + reserve, len)) / fs);
            if (dopplers) j.false_targets.dopplers.push_back(rng.uniform(-0.45, 0.45) * prf);
        }
        if (!delays) j.tau = static_cast<double>(draw_bin(rng, c.pulse_len(), len)) / fs;
    };
    auto fill_pulloff = [&](PullOffMode mode) {
        j.pulloff.mode = mode;
        j.pulloff.drag_speed = rng.uniform(300.0, 600.0);
        j.pulloff.drag_accel = rng.uniform(50.0, 200.0);
    };
    switch (j.family) {
    case JammingFamily::RDFJ: fill_false_targets(true, false, 0); break;
    case JammingFamily::VDFJ: fill_false_targets(false, true, 0); break;
    case JammingFamily::RVDJ: fill_false_targets(true, true, 0); break;
    case JammingFamily::RGJ:
        fill_pulloff(PullOffMode::Range);
        fill_false_targets(true, false, drag_extent());
        break;
    case JammingFamily::VGJ:
        fill_pulloff(PullOffMode::Velocity);
        fill_false_targets(false, true, 0);
        break;
    case JammingFamily::RVGJ:
        fill_pulloff(PullOffMode::Both);
        fill_false_targets(true, true, drag_extent());
        break;
    case JammingFamily::ISFJ:
    case JammingFamily::ISRJ: j.tau = static_cast<double>(draw_bin(rng, family_extent(j, c), len)) / fs; break;
    case JammingFamily::SSJ:
        j.smear.subpulses = draw_count(rng, rg.sub_lo, rg.sub_hi);
        j.tau = static_cast<double>(draw_bin(rng, family_extent(j, c), len)) / fs;
        break;
    case JammingFamily::CSJ: {
        const std::size_t k = draw_count(rng, rg.teeth_lo, rg.teeth_hi);
        const double spacing = c.bandwidth / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            j.comb.amplitudes.push_back(draw_gain(rng));
            j.comb.frequencies.push_back(-0.5 * c.bandwidth + (static_cast<double>(i) + 0.5) * spacing +
                                         rng.uniform(-0.2, 0.2) * spacing);
        }
        break;
    }
    }
    s.jammers.push_back(j);
    return out;
}

std::vector<SampleSpec> draw_dataset(const DatasetOptions& opts) {
    opts.validate();
    std::vector<SampleSpec> specs;
    specs.reserve(static_cast<std::size_t>(kNumClasses) * opts.per_class);
    for (int label = 0; label < kNumClasses; ++label)
        for (std::size_t i = 0; i < opts.per_class; ++i) specs.push_back(draw_sample(opts, label, i));
    return specs;
}

LabeledSample realize(const SampleSpec& spec) { return {compose_scene(spec.scene), spec.label}; }

nlohmann::json dataset_manifest(const DatasetOptions& opts, const std::vector<SampleSpec>& specs) {
    nlohmann::json m;
    m["format"] = "AWSPDS01";
    m["protocol"] = protocol_name(opts.protocol);
    m["seed"] = opts.seed;
    m["per_class"] = opts.per_class;
    m["fixed_snr_db"] = opts.fixed_snr_db ? nlohmann::json(*opts.fixed_snr_db) : nlohmann::json(nullptr);
    m["num_classes"] = kNumClasses;
    auto names = nlohmann::json::array();
    for (int c = 0; c < kNumClasses; ++c) names.push_back(class_name(c));
    m["class_names"] = names;
    if (!specs.empty()) {
        m["rows"] = specs.front().scene.config.num_pulses;
        m["cols"] = specs.front().scene.config.fast_time_len();
    }
    auto list = nlohmann::json::array();
    for (const auto& s : specs)
        list.push_back({{"label", s.label}, {"class", class_name(s.label)}, {"index", s.index}, {"scene", s.scene}});
    m["samples"] = std::move(list);
    return m;
}

Dataset generate_dataset(const DatasetOptions& opts) {
    const auto specs = draw_dataset(opts);
    Dataset d;
    d.samples.resize(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) { d.samples[i] = realize(specs[i]); });
    d.manifest = dataset_manifest(opts, specs);
    return d;
}

} // namespace awsp
