// SPDX-License-Identifier: Apache-2.0

#include "awsp/suppression.hpp"

#include "awsp/binary_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace awsp {

namespace {

constexpr std::uint64_t kWindowStream = 0x77696e64;
constexpr std::uint64_t kScenarioStream = 0x7363656e;
constexpr double kDeg = kPi / 180.0;

std::size_t clamp_start(std::int64_t s, std::size_t len, std::size_t window) {
    const auto hi = static_cast<std::int64_t>(len - window);
    return static_cast<std::size_t>(std::clamp<std::int64_t>(s, 0, hi));
}

// Columns carrying at least 1e-3 of the strongest column's energy.
std::vector<std::size_t> support_columns(const PulseMatrix& m) {
    const Eigen::VectorXd energy = m.cwiseAbs2().colwise().sum().transpose();
    const double floor = 1e-3 * energy.maxCoeff();
    std::vector<std::size_t> cols;
    for (Eigen::Index c = 0; c < energy.size(); ++c)
        if (energy(c) > floor && energy(c) > 0.0) cols.push_back(static_cast<std::size_t>(c));
    return cols;
}

} // namespace

void DetectionConfig::validate(std::size_t fast_time_len) const {
    if (window_len < 1 || window_len > fast_time_len)
        throw ConfigError("detect: window_len must lie in [1, " + std::to_string(fast_time_len) + "]");
    if (!(threshold_frac > 0.0 && threshold_frac <= 1.0)) throw ConfigError("detect: threshold_frac must lie in (0, 1]");
}

std::size_t default_window_len(const RadarConfig& c) { return c.pulse_len(); }

std::vector<double> probability_profile(const PulseMatrix& z, const Model& m, const DetectionConfig& cfg) {
    const auto len = static_cast<std::size_t>(z.cols());
    cfg.validate(len);
    const std::size_t count = len - cfg.window_len + 1;
    std::vector<double> probs(count, 0.0);
    parallel_for(count, [&](std::size_t t) {
        const PulseMatrix window = z.middleCols(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(cfg.window_len));
        const auto pred = classify(embed(window, m), m.prototypes);
        probs[t] = pred.class_id == cfg.target_class ? pred.confidence : 0.0;
    });
    return probs;
}

std::vector<double> accumulate_profile(std::span<const double> probs, std::size_t W) {
    if (W < 1) throw ParameterError("accumulate_profile: W must be >= 1");
    if (probs.empty()) return {};
    std::vector<double> out(probs.size() + W - 1, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t lo = i + 1 >= W ? i + 1 - W : 0;
        const std::size_t hi = std::min(i, probs.size() - 1);
        double acc = 0.0;
        for (std::size_t t = lo; t <= hi; ++t) acc += probs[t];
        out[i] = acc;
    }
    return out;
}

std::vector<Detection> detect_targets(std::span<const double> accumulated, std::size_t W, double threshold_frac) {
    if (W < 1) throw ParameterError("detect_targets: W must be >= 1");
    const double threshold = static_cast<double>(W) * threshold_frac;
    std::vector<Detection> out;
    std::size_t i = 0;
    while (i < accumulated.size()) {
        if (!(accumulated[i] > threshold)) {
            ++i;
            continue;
        }
        Detection d;
        d.first = i;
        d.peak = accumulated[i];
        while (i < accumulated.size() && accumulated[i] > threshold) d.peak = std::max(d.peak, accumulated[i++]);
        d.last = i - 1;
        // Twice the center, minus the W - 1 samples the full convolution adds.
        const auto twice = static_cast<std::int64_t>(d.first + d.last) - static_cast<std::int64_t>(W - 1);
        d.bin = twice <= 0 ? 0 : static_cast<std::size_t>((twice + 1) / 2);
        out.push_back(d);
    }
    return out;
}

DetectionProfile run_detection(const PulseMatrix& z, const Model& m, const DetectionConfig& cfg, std::size_t W) {
    DetectionProfile p;
    p.probs = probability_profile(z, m, cfg);
    p.accumulated = accumulate_profile(p.probs, W);
    p.detections = detect_targets(p.accumulated, W, cfg.threshold_frac);
    return p;
}

void write_profile_csv(const std::filesystem::path& path, const DetectionProfile& p) {
    std::ostringstream out;
    out.precision(17);
    out << "t,prob,accumulated\n";
    for (std::size_t t = 0; t < p.accumulated.size(); ++t) {
        out << t << ',';
        if (t < p.probs.size()) out << p.probs[t];
        out << ',' << p.accumulated[t] << '\n';
    }
    write_text_file(path, out.str());
}

nlohmann::json detections_json(const std::vector<Detection>& d) {
    auto list = nlohmann::json::array();
    for (const auto& x : d)
        list.push_back({{"bin", x.bin}, {"peak", x.peak}, {"segment", {x.first, x.last}}});
    return list;
}

void WindowDatasetOptions::validate() const {
    if (per_class < 1) throw ConfigError("window dataset: per_class must be >= 1");
    if (window_len < 1) throw ConfigError("window dataset: window_len must be >= 1");
    if (!(clutter_fraction >= 0.0 && clutter_fraction <= 1.0))
        throw ConfigError("window dataset: clutter_fraction must lie in [0, 1]");
}

std::vector<LabeledSample> window_dataset(const WindowDatasetOptions& opts) {
    opts.validate();
    DatasetOptions scenes;
    scenes.protocol = Protocol::Train;
    scenes.per_class = opts.per_class;
    scenes.seed = derive_seed(opts.seed, {kWindowStream});
    scenes.fixed_snr_db = opts.snr_db;

    const std::size_t classes = kNumClasses + 1;
    std::vector<LabeledSample> out(classes * opts.per_class);
    parallel_for(out.size(), [&](std::size_t k) {
        const int label = static_cast<int>(k / opts.per_class);
        const std::size_t i = k % opts.per_class;
        Rng rng(derive_seed(opts.seed, {kWindowStream, static_cast<std::uint64_t>(label), i}));
        const bool background = label == kBackgroundClass;
        auto spec = draw_sample(scenes, background ? 0 : label, background ? opts.per_class + i : i).scene;
        if (rng.uniform() < opts.clutter_fraction) spec.cnr_db = rng.uniform(-10.0, 15.0);
        const auto parts = compose_scene_parts(spec);
        PulseMatrix z = parts.targets + parts.jammers + parts.clutter + parts.noise;
        const std::size_t len = static_cast<std::size_t>(z.cols());
        if (opts.window_len > len) throw ConfigError("window dataset: window_len exceeds the fast-time window");
        const auto window = static_cast<std::int64_t>(opts.window_len);

        std::vector<std::size_t> edges;
        for (const auto& t : spec.targets) edges.push_back(target_delay_bin(t, spec.config));
        std::size_t start = 0;
        if (label == 0) {
            const auto edge = static_cast<std::int64_t>(edges[static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(edges.size()) - 1))]);
            const auto tol = static_cast<std::int64_t>(opts.aligned_tolerance);
            start = clamp_start(edge + rng.uniform_int(-tol, tol), len, opts.window_len);
        } else if (!background) {
            const auto cols = support_columns(parts.jammers);
            if (cols.empty()) throw NumericError("window dataset: jammer left no footprint");
            // A lone range-delayed replica aligned with the window is indistinguishable from an
            // echo, so pure-delay families keep only windows not aligned with any replica.
            std::vector<std::int64_t> replicas;
            const auto& jam = spec.jammers.front();
            if (jam.family == JammingFamily::RDFJ || jam.family == JammingFamily::RVDJ)
                for (double d : jam.false_targets.delays)
                    replicas.push_back(static_cast<std::int64_t>(std::llround(d * spec.config.sample_rate)));
            const auto tol = static_cast<std::int64_t>(opts.aligned_tolerance);
            for (int attempt = 0;; ++attempt) {
                const auto col = static_cast<std::int64_t>(cols[static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(cols.size()) - 1))]);
                start = clamp_start(col - rng.uniform_int(0, window - 1), len, opts.window_len);
                const bool aligned = std::any_of(replicas.begin(), replicas.end(), [&](std::int64_t r) {
                    return std::abs(std::int64_t(start) - r) <= tol;
                });
                if (!aligned || attempt == 100) break;
            }
        } else {
            const std::size_t tol = opts.aligned_tolerance;
            auto clear = [&](std::size_t s) {
                for (auto e : edges)
                    if ((s > e ? s - e : e - s) <= tol) return false;
                return true;
            };
            std::vector<std::size_t> free;
            for (std::size_t s = 0; s + opts.window_len <= len; ++s)
                if (clear(s)) free.push_back(s);
            bool placed = false;
            if (rng.uniform() < 0.7 && tol + 1 < opts.window_len) {
                const auto edge = static_cast<std::int64_t>(edges[static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(edges.size()) - 1))]);
                const auto offset = rng.uniform_int(std::int64_t(tol) + 1, std::min<std::int64_t>(window - 1, std::int64_t(tol + 12)));
                const auto s = edge + (rng.uniform() < 0.5 ? -offset : offset);
                if (s >= 0 && s + window <= std::int64_t(len) && clear(std::size_t(s))) {
                    start = std::size_t(s);
                    placed = true;
                }
            }
            if (!placed && !free.empty()) {
                start = free[static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(free.size()) - 1))];
                placed = true;
            }
            if (!placed) {
                z = parts.clutter + parts.noise;
                start = static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(len - opts.window_len)));
            }
        }
        out[k].matrix = z.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(opts.window_len));
        out[k].label = opts.two_class ? (label == 0 ? 0 : 1) : label;
    });
    return out;
}

SuppressionScenario suppression_scenario(std::uint64_t seed, double snr_db, std::optional<double> cnr_db, std::size_t gap,
                                         std::size_t edge_margin) {
    Rng rng(derive_seed(seed, {kScenarioStream}));
    SuppressionScenario out;
    auto& s = out.scene;
    const RadarConfig& c = s.config;
    const double fs = c.sample_rate;
    const std::size_t len = c.fast_time_len();
    const std::size_t np = c.pulse_len();
    s.snr_db = snr_db;
    s.inr_db = snr_db;
    s.cnr_db = cnr_db;
    s.seed = derive_seed(seed, {kScenarioStream, 1});

    TargetSpec target;
    target.velocity = rng.uniform(-500.0, 500.0);
    target.angle = rng.uniform(-3.0, 3.0) * kDeg;
    target.amplitude = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));

    JammingSpec rgj;
    rgj.family = JammingFamily::RGJ;
    rgj.theta = rng.uniform(-3.0, 3.0) * kDeg;
    rgj.velocity = rng.uniform(-500.0, 500.0);
    rgj.seed = rng.next();
    rgj.pulloff.mode = PullOffMode::Range;
    rgj.pulloff.drag_speed = rng.uniform(300.0, 600.0);
    rgj.pulloff.drag_accel = rng.uniform(50.0, 200.0);
    rgj.false_targets.gains.push_back(std::polar(rng.uniform(0.5, 1.0), rng.uniform(0.0, 2.0 * kPi)));
    const double pull_time = rgj.pulloff.pull_frac * static_cast<double>(c.num_pulses) * c.pri;
    const double drag = rgj.pulloff.drag_speed * pull_time + 0.5 * rgj.pulloff.drag_accel * pull_time * pull_time;
    const std::size_t rgj_extent = np + static_cast<std::size_t>(std::ceil(2.0 * drag / kSpeedOfLight * fs)) + 1;

    JammingSpec isrj;
    isrj.family = JammingFamily::ISRJ;
    isrj.theta = rng.uniform(-3.0, 3.0) * kDeg;
    isrj.velocity = rng.uniform(-500.0, 500.0);
    isrj.seed = rng.next();
    const auto spacing = static_cast<std::size_t>(to_samples(isrj.sampling.repeat_spacing, fs));
    const std::size_t isrj_extent = np + (isrj.sampling.repeats(c) - 1) * spacing;

    std::array<std::size_t, 3> extents{np, rgj_extent, isrj_extent};
    const std::size_t used = extents[0] + extents[1] + extents[2] + 2 * gap;
    if (used > len) throw ConfigError("suppression scenario: footprints do not fit in the fast-time window");
    const auto slack = static_cast<std::int64_t>(len - used);
    if (np + 2 * edge_margin > len) throw ConfigError("suppression scenario: edge_margin leaves no room for the target");
    std::array<std::size_t, 3> bins{};
    for (int attempt = 0;; ++attempt) {
        if (attempt == 1000) throw ConfigError("suppression scenario: cannot place the target away from the edges");
        std::array<int, 3> order{0, 1, 2};
        for (std::size_t i = 2; i > 0; --i) std::swap(order[i], order[static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(i)))]);
        std::array<std::int64_t, 3> cuts{rng.uniform_int(0, slack), rng.uniform_int(0, slack), rng.uniform_int(0, slack)};
        std::sort(cuts.begin(), cuts.end());
        std::size_t pos = static_cast<std::size_t>(cuts[0]);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto item = static_cast<std::size_t>(order[k]);
            bins[item] = pos;
            pos += extents[item] + gap;
            if (k < 2) pos += static_cast<std::size_t>(cuts[k + 1] - cuts[k]);
        }
        if (bins[0] >= edge_margin && bins[0] + np + edge_margin <= len) break;
    }

    target.range = static_cast<double>(bins[0]) * kSpeedOfLight / (2.0 * fs);
    rgj.false_targets.delays.push_back(static_cast<double>(bins[1]) / fs);
    isrj.tau = static_cast<double>(bins[2]) / fs;
    s.targets.push_back(target);
    s.jammers = {rgj, isrj};
    out.target_bin = target_delay_bin(target, c);
    out.jammer_bins = {bins[1], bins[2]};
    return out;
}

} // namespace awsp
