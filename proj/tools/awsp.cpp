// SPDX-License-Identifier: Apache-2.0
//
// awsp: dataset generation, training, evaluation sweeps, detection runs and a self test.

#include "awsp/binary_io.hpp"
#include "awsp/suppression.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

using namespace awsp;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kIo = 3, kNumeric = 4, kAcceptance = 5 };

json defaults() {
    const TrainConfig t;
    const EncoderShape e;
    const ScatterConfig s = default_model_scatter();
    const DetectionConfig d;
    const WindowDatasetOptions w;
    return {
        {"seed", 0},
        {"dataset",
         {{"kind", "scenes"},
          {"protocol", "train"},
          {"per_class", 10},
          {"snr_db", nullptr},
          {"window_len", w.window_len},
          {"clutter_fraction", w.clutter_fraction},
          {"two_class", w.two_class}}},
        {"train",
         {{"batch_size", t.batch_size},
          {"epochs", t.epochs},
          {"learning_rate", t.learning_rate},
          {"temperature", t.temperature},
          {"augment_noise_sigma", t.augment_noise_sigma},
          {"max_shift", t.max_shift},
          {"views", t.views}}},
        {"scatter", {{"scales", s.scales}, {"max_order", s.max_order}}},
        {"encoder", {{"reduction", e.reduction}, {"conv1", e.conv1}, {"conv2", e.conv2}, {"embedding", e.embedding}}},
        {"eval", {{"protocol", "train"}, {"per_class", 100}, {"sweep_snrs", {-10, -6, -3, 0, 10}}}},
        {"detect",
         {{"window_len", d.window_len},
          {"threshold_frac", d.threshold_frac},
          {"target_class", d.target_class},
          {"width", 48},
          {"snr_db", 10.0},
          {"cnr_db", nullptr}}},
    };
}

// Keys absent from the defaults are rejected.
void merge(json& dst, const json& src, const std::string& where) {
    if (!src.is_object()) throw ConfigError("config: " + (where.empty() ? std::string("root") : where) + " must be an object");
    for (const auto& [key, value] : src.items()) {
        const std::string path = where.empty() ? key : where + "." + key;
        if (!dst.contains(key)) throw ConfigError("config: unknown key " + path);
        if (dst[key].is_object()) merge(dst[key], value, path);
        else dst[key] = value;
    }
}

void apply_set(json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got " + assignment);
    const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json* node = &cfg;
    std::istringstream parts(key);
    std::string part;
    while (std::getline(parts, part, '.')) {
        if (!node->is_object() || !node->contains(part)) throw ConfigError("--set: unknown key " + key);
        node = &(*node)[part];
    }
    if (node->is_object()) throw ConfigError("--set: " + key + " is a section, not a value");
    const json parsed = json::parse(text, nullptr, false);
    *node = parsed.is_discarded() ? json(text) : parsed;
}

template <class T>
T get(const json& cfg, const std::string& section, const std::string& key) {
    try {
        return cfg.at(section).at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config: " + section + "." + key + ": " + e.what());
    }
}

std::optional<double> get_optional(const json& cfg, const std::string& section, const std::string& key) {
    const auto& v = cfg.at(section).at(key);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) throw ConfigError("config: " + section + "." + key + " must be a number or null");
    return v.get<double>();
}

std::uint64_t seed_of(const json& cfg) {
    try {
        return cfg.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: seed: ") + e.what());
    }
}

TrainConfig train_config(const json& cfg) {
    TrainConfig t;
    t.batch_size = get<std::size_t>(cfg, "train", "batch_size");
    t.epochs = get<std::size_t>(cfg, "train", "epochs");
    t.learning_rate = get<double>(cfg, "train", "learning_rate");
    t.temperature = get<double>(cfg, "train", "temperature");
    t.augment_noise_sigma = get<double>(cfg, "train", "augment_noise_sigma");
    t.max_shift = get<std::size_t>(cfg, "train", "max_shift");
    t.views = get<std::size_t>(cfg, "train", "views");
    t.seed = seed_of(cfg);
    t.validate();
    return t;
}

std::string snr_tag(double snr) {
    std::ostringstream s;
    s << snr;
    return s.str();
}

void write_samples(const std::filesystem::path& path, const std::vector<LabeledSample>& samples) {
    if (samples.empty()) throw ConfigError("gen: nothing to write");
    DatasetWriter w(path, static_cast<std::uint32_t>(samples.size()), static_cast<std::uint32_t>(samples.front().matrix.rows()),
                    static_cast<std::uint32_t>(samples.front().matrix.cols()));
    for (const auto& s : samples) w.write(s);
    w.close();
}

int cmd_gen(const json& cfg, const std::filesystem::path& out) {
    const auto kind = get<std::string>(cfg, "dataset", "kind");
    if (kind == "scenes") {
        DatasetOptions o;
        o.protocol = protocol_from_name(get<std::string>(cfg, "dataset", "protocol"));
        o.per_class = get<std::size_t>(cfg, "dataset", "per_class");
        o.seed = seed_of(cfg);
        o.fixed_snr_db = get_optional(cfg, "dataset", "snr_db");
        write_dataset(out, o);
    } else if (kind == "windows") {
        WindowDatasetOptions o;
        o.per_class = get<std::size_t>(cfg, "dataset", "per_class");
        o.seed = seed_of(cfg);
        o.snr_db = get_optional(cfg, "dataset", "snr_db").value_or(10.0);
        o.window_len = get<std::size_t>(cfg, "dataset", "window_len");
        o.clutter_fraction = get<double>(cfg, "dataset", "clutter_fraction");
        o.two_class = get<bool>(cfg, "dataset", "two_class");
        write_samples(out, window_dataset(o));
        write_json_file(out.string() + ".json", {{"format", "AWSPDS01"},
                                                 {"kind", "windows"},
                                                 {"seed", o.seed},
                                                 {"per_class", o.per_class},
                                                 {"snr_db", o.snr_db},
                                                 {"window_len", o.window_len},
                                                 {"clutter_fraction", o.clutter_fraction},
                                                 {"num_classes", o.two_class ? 2 : kNumClasses + 1}});
    } else {
        throw ConfigError("config: dataset.kind must be scenes or windows");
    }
    std::cout << "wrote " << out.string() << "\n";
    return kOk;
}

int cmd_train(const json& cfg, const std::filesystem::path& data, const std::string& support_path,
              const std::filesystem::path& out) {
    const auto train = read_dataset(data);
    const auto support = support_path.empty() ? train : read_dataset(support_path);
    ScatterConfig sc = default_model_scatter();
    sc.scales = get<std::size_t>(cfg, "scatter", "scales");
    sc.max_order = get<std::size_t>(cfg, "scatter", "max_order");
    sc.validate();
    EncoderShape shape;
    shape.reduction = get<std::size_t>(cfg, "encoder", "reduction");
    shape.conv1 = get<std::size_t>(cfg, "encoder", "conv1");
    shape.conv2 = get<std::size_t>(cfg, "encoder", "conv2");
    shape.embedding = get<std::size_t>(cfg, "encoder", "embedding");
    const auto model = train_model(train, support, train_config(cfg), sc, shape);
    save_model(out, model);
    write_loss_csv(out / "loss.csv", model.epoch_loss);
    std::cout << "trained " << model.epoch_loss.size() << " epochs, final mean loss " << model.epoch_loss.back() << "\n";
    return kOk;
}

std::size_t class_count(const Model& m, const std::vector<LabeledSample>& samples) {
    int top = 0;
    for (int id : m.prototypes.class_ids) top = std::max(top, id);
    for (const auto& s : samples) top = std::max(top, s.label);
    return static_cast<std::size_t>(top) + 1;
}

void emit_metrics(const std::filesystem::path& dir, const std::string& stem, const Metrics& m) {
    write_json_file(dir / (stem + ".json"), metrics_json(m));
    write_confusion_csv(dir / ("confusion" + stem.substr(std::string("metrics").size()) + ".csv"), m);
}

int cmd_eval(const json& cfg, const std::filesystem::path& model_dir, const std::string& data, bool sweep,
             const std::filesystem::path& out) {
    const auto model = load_model(model_dir);
    std::filesystem::create_directories(out);
    if (!sweep) {
        if (data.empty()) throw ConfigError("eval: --data is required unless --sweep is given");
        const auto samples = read_dataset(data);
        const auto m = evaluate_model(samples, model, class_count(model, samples));
        emit_metrics(out, "metrics", m);
        std::cout << "accuracy " << m.accuracy << " macro_f1 " << m.macro_f1 << "\n";
        return kOk;
    }
    json summary = json::array();
    for (double snr : get<std::vector<double>>(cfg, "eval", "sweep_snrs")) {
        DatasetOptions o;
        o.protocol = protocol_from_name(get<std::string>(cfg, "eval", "protocol"));
        o.per_class = get<std::size_t>(cfg, "eval", "per_class");
        o.seed = seed_of(cfg);
        o.fixed_snr_db = snr;
        const auto samples = generate_dataset(o).samples;
        const auto m = evaluate_model(samples, model, class_count(model, samples));
        emit_metrics(out, "metrics_snr_" + snr_tag(snr), m);
        summary.push_back({{"snr_db", snr}, {"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}});
        std::cout << "snr " << snr << " dB: accuracy " << m.accuracy << " macro_f1 " << m.macro_f1 << "\n";
    }
    write_json_file(out / "sweep.json", summary);
    return kOk;
}

int cmd_detect(const json& cfg, const std::filesystem::path& model_dir, const std::string& scene_path,
               const std::filesystem::path& out) {
    const auto model = load_model(model_dir);
    std::filesystem::create_directories(out);
    DetectionConfig dc;
    dc.window_len = get<std::size_t>(cfg, "detect", "window_len");
    dc.threshold_frac = get<double>(cfg, "detect", "threshold_frac");
    dc.target_class = get<int>(cfg, "detect", "target_class");
    const auto width = get<std::size_t>(cfg, "detect", "width");

    json truth;
    SceneSpec scene;
    if (scene_path.empty()) {
        const auto sc = suppression_scenario(seed_of(cfg), get<double>(cfg, "detect", "snr_db"),
                                             get_optional(cfg, "detect", "cnr_db"));
        scene = sc.scene;
        truth = {{"target_bin", sc.target_bin}, {"jammer_bins", sc.jammer_bins}};
    } else {
        try {
            scene = read_json_file(scene_path).get<SceneSpec>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("scene file: ") + e.what());
        }
    }
    write_json_file(out / "scene.json", scene);
    const auto profile = run_detection(compose_scene(scene), model, dc, width);
    write_profile_csv(out / "profile.csv", profile);
    json result = {{"detections", detections_json(profile.detections)},
                   {"window_len", dc.window_len},
                   {"width", width},
                   {"threshold", static_cast<double>(width) * dc.threshold_frac}};
    if (!truth.is_null()) result["truth"] = truth;
    write_json_file(out / "detections.json", result);
    std::cout << profile.detections.size() << " detection(s)";
    for (const auto& d : profile.detections) std::cout << " bin " << d.bin;
    std::cout << "\n";
    return kOk;
}

// Quick invariant checks; the full suites live in ctest.
int cmd_selftest() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        failures += ok ? 0 : 1;
    };
    const auto& bank = default_filterbank();
    Rng rng(1);

    RealMatrix x(64, 96);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    const RealMatrix back = dtcwt_inverse(dtcwt_forward(x, bank, 3), bank);
    report("dual-tree round trip", (back - x).norm() / x.norm() <= 1e-10);

    RealMatrix raw(12, 6);
    for (Eigen::Index i = 0; i < raw.size(); ++i) raw.data()[i] = rng.normal();
    const std::vector<int> labels{0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2};
    const auto scl = scl_loss(raw, labels, 0.5);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        RealMatrix up = raw, dn = raw;
        up.data()[i] += 1e-6;
        dn.data()[i] -= 1e-6;
        const double fd = (scl_loss(up, labels, 0.5).loss - scl_loss(dn, labels, 0.5).loss) / 2e-6;
        worst = std::max(worst, std::abs(fd - scl.grad.data()[i]));
    }
    report("contrastive gradient", worst <= 1e-6);
    report("identical batch loss", std::abs(scl_loss(RealMatrix::Ones(6, 4), std::vector<int>(6, 0), 0.07).loss -
                                            6.0 * std::log(5.0)) <= 1e-12);

    const RadarConfig radar;
    TargetSpec t;
    t.range = 300.0;
    const PulseMatrix echo = target_echo(t, radar);
    const auto pulse = lfm_baseband(radar.pulse_width, radar.bandwidth, radar.sample_rate).samples;
    std::size_t best = 0;
    double peak = -1.0;
    for (std::size_t lag = 0; lag + pulse.size() <= static_cast<std::size_t>(echo.cols()); ++lag) {
        cplx acc{};
        for (std::size_t k = 0; k < pulse.size(); ++k) acc += echo(0, Eigen::Index(lag + k)) * std::conj(pulse[k]);
        if (std::abs(acc) > peak) {
            peak = std::abs(acc);
            best = lag;
        }
    }
    report("matched-filter peak", best == target_delay_bin(t, radar));

    const PulseMatrix a = complex_noise(32, 64, 2), b = complex_noise(32, 64, 3);
    ScatterConfig sc;
    const auto fa = scatter(a, bank, sc), fb = scatter(b, bank, sc);
    double d = 0.0;
    for (std::size_t i = 0; i < fa.data.size(); ++i) d += (fa.data[i] - fb.data[i]) * (fa.data[i] - fb.data[i]);
    report("scattering non-expansive", std::sqrt(d) <= (1 + 1e-6) * (a - b).norm());

    std::vector<double> spikes(200, 0.0);
    for (std::size_t i = 3; i < spikes.size(); i += 48) spikes[i] = 1.0;
    report("isolated spikes suppressed", detect_targets(accumulate_profile(spikes, 48), 48, 0.5).empty());

    std::cout << (failures ? "selftest failed\n" : "selftest passed\n");
    return failures ? kAcceptance : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"awsp: radar jamming recognition and suppression toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "random seed");
    app.add_option("--set", sets, "override a configuration value, key=value (repeatable)");

    std::string out, data, support, model_dir, scene;
    bool sweep = false;
    auto* gen = app.add_subcommand("gen", "generate a dataset file and manifest");
    gen->add_option("--out", out, "output dataset file")->required();
    auto* train = app.add_subcommand("train", "train the encoder and build prototypes");
    train->add_option("--data", data, "training dataset file")->required()->check(CLI::ExistingFile);
    train->add_option("--support", support, "support dataset for prototypes (default: training set)")->check(CLI::ExistingFile);
    train->add_option("--out", out, "model directory")->required();
    auto* eval = app.add_subcommand("eval", "metrics on a dataset or an SNR sweep");
    eval->add_option("--model", model_dir, "model directory")->required()->check(CLI::ExistingDirectory);
    eval->add_option("--data", data, "evaluation dataset file")->check(CLI::ExistingFile);
    eval->add_flag("--sweep", sweep, "regenerate test sets at each eval.sweep_snrs value");
    eval->add_option("--out", out, "output directory")->required();
    auto* detect = app.add_subcommand("detect", "sliding-window detection on one scene");
    detect->add_option("--model", model_dir, "detection model directory")->required()->check(CLI::ExistingDirectory);
    detect->add_option("--scene", scene, "scene JSON (default: target plus RGJ and ISRJ scenario)")->check(CLI::ExistingFile);
    detect->add_option("--out", out, "output directory")->required();
    auto* selftest = app.add_subcommand("selftest", "run quick invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        json cfg = defaults();
        if (!config_path.empty()) merge(cfg, read_json_file(config_path), "");
        for (const auto& s : sets) apply_set(cfg, s);
        if (seed) cfg["seed"] = *seed;

        if (gen->parsed()) return cmd_gen(cfg, out);
        if (train->parsed()) return cmd_train(cfg, data, support, out);
        if (eval->parsed()) return cmd_eval(cfg, model_dir, data, sweep, out);
        if (detect->parsed()) return cmd_detect(cfg, model_dir, scene, out);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kOther;
}
