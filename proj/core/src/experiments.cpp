#include "evifuse/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "evifuse/errors.hpp"
#include "evifuse/system_fusion.hpp"
#include "json.hpp"
#include "rng_util.hpp"
#include "spec_json.hpp"

namespace evifuse {
namespace {

using nlohmann::json;

// --- small utilities ---------------------------------------------------------

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw FileNotFoundError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw FileNotFoundError("failed while writing '" + path + "'");
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw FileNotFoundError("cannot create output directory '" + dir + "'");
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const char* where) {
    for (const auto& [key, value] : object.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            throw ParseError("unknown key '" + key + "' in " + where);
        }
    }
}

std::vector<int> known_labels_of(const SyntheticSpec& spec) {
    std::vector<int> labels(static_cast<std::size_t>(spec.n_known));
    for (int c = 0; c < spec.n_known; ++c) labels[static_cast<std::size_t>(c)] = c;
    return labels;
}

FramePtr frame_of(const ExperimentConfig& cfg) {
    if (cfg.synthetic) return make_frame(known_labels_of(*cfg.synthetic));
    return make_frame(cfg.data->frame_labels);
}

double axis_scale(const SyntheticSpec& spec) {
    return spec.separation * std::sqrt(static_cast<double>(spec.n_features)) / std::sqrt(2.0);
}

// --- config JSON -------------------------------------------------------------

json update_to_json(const UpdateConfig& u) {
    return {{"tr_d_max", u.tr_d_max},       {"tr_y_max", u.tr_y_max},
            {"threshold_size", u.threshold_size}, {"window_size", u.window_size},
            {"patience", u.patience},       {"anomaly_label", u.anomaly_label}};
}

UpdateConfig update_from_json(const json& j, UpdateConfig base) {
    reject_unknown_keys(j, {"tr_d_max", "tr_y_max", "threshold_size", "window_size",
                            "patience", "anomaly_label"},
                        "update");
    base.tr_d_max = j.value("tr_d_max", base.tr_d_max);
    base.tr_y_max = j.value("tr_y_max", base.tr_y_max);
    base.threshold_size = j.value("threshold_size", base.threshold_size);
    base.window_size = j.value("window_size", base.window_size);
    base.patience = j.value("patience", base.patience);
    base.anomaly_label = j.value("anomaly_label", base.anomaly_label);
    return base;
}

json split_to_json(const SplitSpec& s) {
    return {{"train_fraction", s.train_fraction},
            {"val_fraction", s.val_fraction},
            {"seed", s.seed},
            {"stratified", s.stratified}};
}

SplitSpec split_from_json(const json& j, SplitSpec base) {
    reject_unknown_keys(j, {"train_fraction", "val_fraction", "seed", "stratified"}, "split");
    base.train_fraction = j.value("train_fraction", base.train_fraction);
    base.val_fraction = j.value("val_fraction", base.val_fraction);
    base.seed = j.value("seed", base.seed);
    base.stratified = j.value("stratified", base.stratified);
    return base;
}

json synthetic_to_json(const SyntheticSpec& s) {
    return {{"n_known", s.n_known},
            {"n_features", s.n_features},
            {"separation", s.separation},
            {"train_rows_per_class", s.train_rows_per_class},
            {"stream_rows_per_block", s.stream_rows_per_block},
            {"transition_rows", s.transition_rows},
            {"unknown_parents", {s.unknown_parents.first, s.unknown_parents.second}},
            {"label_flip_fraction", s.label_flip_fraction},
            {"author_rules", s.author_rules}};
}

SyntheticSpec synthetic_from_json(const json& j, SyntheticSpec base) {
    reject_unknown_keys(j,
                        {"n_known", "n_features", "separation", "train_rows_per_class",
                         "stream_rows_per_block", "transition_rows", "unknown_parents",
                         "label_flip_fraction", "author_rules"},
                        "synthetic");
    base.n_known = j.value("n_known", base.n_known);
    base.n_features = j.value("n_features", base.n_features);
    base.separation = j.value("separation", base.separation);
    base.train_rows_per_class = j.value("train_rows_per_class", base.train_rows_per_class);
    base.stream_rows_per_block = j.value("stream_rows_per_block", base.stream_rows_per_block);
    base.transition_rows = j.value("transition_rows", base.transition_rows);
    if (j.contains("unknown_parents")) {
        const auto& p = j.at("unknown_parents");
        if (!p.is_array() || p.size() != 2)
            throw ParseError("synthetic.unknown_parents must be a two-label array");
        base.unknown_parents = {p[0].get<int>(), p[1].get<int>()};
    }
    base.label_flip_fraction = j.value("label_flip_fraction", base.label_flip_fraction);
    base.author_rules = j.value("author_rules", base.author_rules);
    return base;
}

json data_to_json(const DataFiles& d) {
    return {{"train_csv", d.train_csv},
            {"stream_csv", d.stream_csv},
            {"label_column", d.label_column},
            {"frame", d.frame_labels}};
}

DataFiles data_from_json(const json& j) {
    reject_unknown_keys(j, {"train_csv", "stream_csv", "label_column", "frame"}, "data");
    DataFiles d;
    d.train_csv = j.value("train_csv", d.train_csv);
    d.stream_csv = j.value("stream_csv", d.stream_csv);
    d.label_column = j.value("label_column", d.label_column);
    d.frame_labels = j.value("frame", d.frame_labels);
    return d;
}

}  // namespace

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    cfg.seed = 7;
    cfg.out_dir = "reports";
    cfg.member_weight = 0.9;

    ClassifierSpec knn;
    knn.kind = ClassifierKind::knn;
    knn.n_neighbors = 5;
    knn.metric = KnnMetric::euclidean;
    knn.weighting = KnnWeighting::distance;
    ClassifierSpec tree;
    tree.kind = ClassifierKind::decision_tree;
    tree.max_depth = 12;
    tree.criterion = TreeCriterion::gini;
    ClassifierSpec nb;
    nb.kind = ClassifierKind::gaussian_nb;
    cfg.members = {knn, tree, nb};

    cfg.synthetic = SyntheticSpec{};

    // Thresholds pinned from the measured fused-uncertainty gap between
    // agreeing rows and conflicted rows in this study world: full agreement
    // across tiers leaves normalized uncertainty at about 1e-4, while a
    // confident contradiction (ensemble versus rule fallback) lands at
    // 9.9e-4 or higher, and pushes conflict-preserving uncertainty past 0.8.
    cfg.update.tr_d_max = 0.0005;
    cfg.update.tr_y_max = 0.5;
    cfg.update.threshold_size = 100;
    cfg.update.window_size = 20;
    cfg.update.patience = 15;
    cfg.update.anomaly_label = 30;
    return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["seed"] = cfg.seed;
    doc["out_dir"] = cfg.out_dir;
    doc["sensitivity_exponent"] = cfg.sensitivity_exponent;
    doc["member_weight"] = cfg.member_weight;
    json members = json::array();
    for (const ClassifierSpec& spec : cfg.members) members.push_back(detail::spec_to_json(spec));
    doc["members"] = std::move(members);
    if (cfg.synthetic) doc["synthetic"] = synthetic_to_json(*cfg.synthetic);
    if (cfg.data) doc["data"] = data_to_json(*cfg.data);
    doc["rules"] = cfg.rules_path;
    doc["kb"] = cfg.kb_path;
    doc["split"] = split_to_json(cfg.split);
    doc["update"] = update_to_json(cfg.update);
    doc["semi_auto"] = cfg.semi_auto;
    return doc.dump(2) + "\n";
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();

    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::exception& e) {
        throw ParseError(path + ": not valid JSON: " + e.what());
    }
    try {
        reject_unknown_keys(doc,
                            {"seed", "out_dir", "sensitivity_exponent", "member_weight",
                             "members", "synthetic", "data", "rules", "kb", "split", "update",
                             "semi_auto"},
                            "the config root");
        ExperimentConfig cfg = default_experiment_config();
        cfg.members.clear();     // the default member pool is not inherited:
        cfg.synthetic.reset();   // a config describes its own study
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.out_dir = doc.value("out_dir", cfg.out_dir);
        cfg.sensitivity_exponent = doc.value("sensitivity_exponent", cfg.sensitivity_exponent);
        cfg.member_weight = doc.value("member_weight", cfg.member_weight);
        if (doc.contains("members"))
            for (const auto& jm : doc.at("members"))
                cfg.members.push_back(detail::spec_from_json(jm, /*strict=*/false));
        if (doc.contains("synthetic"))
            cfg.synthetic = synthetic_from_json(doc.at("synthetic"), SyntheticSpec{});
        if (doc.contains("data")) cfg.data = data_from_json(doc.at("data"));
        cfg.rules_path = doc.value("rules", cfg.rules_path);
        cfg.kb_path = doc.value("kb", cfg.kb_path);
        if (doc.contains("split")) cfg.split = split_from_json(doc.at("split"), cfg.split);
        if (doc.contains("update")) cfg.update = update_from_json(doc.at("update"), cfg.update);
        cfg.semi_auto = doc.value("semi_auto", cfg.semi_auto);
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void validate_experiment_config(const ExperimentConfig& cfg) {
    if (cfg.synthetic.has_value() == cfg.data.has_value())
        throw ConfigError("configure exactly one of 'synthetic' or 'data'");
    if (cfg.members.size() == 1)
        throw ConfigError(
            "an ensemble needs at least two members; configure none (rules only) or two or "
            "more");
    if (!(cfg.member_weight > 0.0) || cfg.member_weight > 1.0)
        throw ConfigError("member_weight must be in (0, 1]");
    if (cfg.sensitivity_exponent < 2) throw ConfigError("sensitivity_exponent must be >= 2");
    if (!(cfg.split.train_fraction > 0.0) || !(cfg.split.val_fraction > 0.0) ||
        cfg.split.train_fraction + cfg.split.val_fraction >= 1.0)
        throw ConfigError("split fractions must be positive and leave room for a test part");

    bool has_rules = !cfg.rules_path.empty();
    if (cfg.synthetic) {
        const SyntheticSpec& s = *cfg.synthetic;
        if (s.n_known < 2) throw ConfigError("synthetic.n_known must be >= 2");
        if (s.n_known > s.n_features)
            throw ConfigError("synthetic.n_known must not exceed synthetic.n_features");
        if (s.train_rows_per_class < 6 || s.stream_rows_per_block < 1)
            throw ConfigError("synthetic row counts are too small");
        if (s.transition_rows < 0) throw ConfigError("synthetic.transition_rows must be >= 0");
        if (s.unknown_parents.first == s.unknown_parents.second ||
            s.unknown_parents.first < 0 || s.unknown_parents.first >= s.n_known ||
            s.unknown_parents.second < 0 || s.unknown_parents.second >= s.n_known)
            throw ConfigError("synthetic.unknown_parents must be two distinct known labels");
        if (s.label_flip_fraction < 0.0 || s.label_flip_fraction >= 0.5)
            throw ConfigError("synthetic.label_flip_fraction must be in [0, 0.5)");
        has_rules = has_rules || s.author_rules;
    } else {
        if (cfg.data->train_csv.empty()) throw ConfigError("data.train_csv is required");
        if (cfg.data->frame_labels.empty()) throw ConfigError("data.frame must list the labels");
    }
    if (cfg.members.empty() && !has_rules)
        throw ConfigError("configure at least one evidence source: ensemble members or rules");

    validate_config(cfg.update, frame_of(cfg));
}

// --- synthetic world ---------------------------------------------------------

std::vector<std::vector<double>> synthetic_centers(const SyntheticSpec& spec) {
    const double scale = axis_scale(spec);
    std::vector<std::vector<double>> centers(
        static_cast<std::size_t>(spec.n_known),
        std::vector<double>(static_cast<std::size_t>(spec.n_features), 0.0));
    for (int c = 0; c < spec.n_known; ++c)
        centers[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)] = scale;
    return centers;
}

namespace {

std::vector<double> noisy_row(std::mt19937_64& rng, const std::vector<double>& center) {
    std::vector<double> row(center.size());
    std::size_t f = 0;
    for (; f + 1 < row.size(); f += 2) {
        double z0 = 0.0, z1 = 0.0;
        detail::normal_pair(rng, z0, z1);
        row[f] = center[f] + z0;
        row[f + 1] = center[f + 1] + z1;
    }
    if (f < row.size()) {
        double z0 = 0.0, z1 = 0.0;
        detail::normal_pair(rng, z0, z1);
        row[f] = center[f] + z0;
    }
    return row;
}

void corrupt_labels(Dataset& ds, double fraction, int n_known, std::uint64_t seed) {
    const auto target = static_cast<std::size_t>(fraction * static_cast<double>(ds.rows()));
    if (target == 0) return;
    std::mt19937_64 rng(seed);
    std::unordered_set<std::size_t> chosen;
    while (chosen.size() < target) {
        const auto idx = static_cast<std::size_t>(rng() % ds.rows());
        if (!chosen.insert(idx).second) continue;
        const int old_label = ds.labels[idx];
        const int shift = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n_known - 1));
        ds.labels[idx] = (old_label + shift) % n_known;
    }
}

}  // namespace

Dataset make_synthetic_training(const SyntheticSpec& spec, std::uint64_t seed) {
    Dataset ds = synth_clusters(spec.n_known, spec.n_features, spec.train_rows_per_class,
                                spec.separation, seed);
    corrupt_labels(ds, spec.label_flip_fraction, spec.n_known, seed + 0x51ab5);
    return ds;
}

Dataset make_synthetic_stream(const SyntheticSpec& spec, int anomaly_label, std::uint64_t seed) {
    const auto centers = synthetic_centers(spec);
    std::vector<double> unknown_center(static_cast<std::size_t>(spec.n_features), 0.0);
    for (std::size_t f = 0; f < unknown_center.size(); ++f)
        unknown_center[f] =
            0.5 * (centers[static_cast<std::size_t>(spec.unknown_parents.first)][f] +
                   centers[static_cast<std::size_t>(spec.unknown_parents.second)][f]);

    std::vector<const std::vector<double>*> block_centers;
    std::vector<int> block_labels;
    for (int c = 0; c < spec.n_known; ++c) {
        block_centers.push_back(&centers[static_cast<std::size_t>(c)]);
        block_labels.push_back(c);
    }
    block_centers.push_back(&unknown_center);
    block_labels.push_back(anomaly_label);

    Dataset ds;
    ds.feature_names.reserve(static_cast<std::size_t>(spec.n_features));
    for (int f = 0; f < spec.n_features; ++f) ds.feature_names.push_back("f" + std::to_string(f));

    std::mt19937_64 rng(seed);
    std::vector<double> blend(static_cast<std::size_t>(spec.n_features));
    for (std::size_t b = 0; b < block_centers.size(); ++b) {
        if (b > 0) {
            const std::vector<double>& prev = *block_centers[b - 1];
            const std::vector<double>& next = *block_centers[b];
            for (int t = 0; t < spec.transition_rows; ++t) {
                const double alpha = static_cast<double>(t + 1) /
                                     static_cast<double>(spec.transition_rows + 1);
                for (std::size_t f = 0; f < blend.size(); ++f)
                    blend[f] = (1.0 - alpha) * prev[f] + alpha * next[f];
                ds.features.push_back(noisy_row(rng, blend));
                ds.labels.push_back(block_labels[b]);
            }
        }
        for (int r = 0; r < spec.stream_rows_per_block; ++r) {
            ds.features.push_back(noisy_row(rng, *block_centers[b]));
            ds.labels.push_back(block_labels[b]);
        }
    }
    return ds;
}

namespace {

RuleModel band_rule_skeleton(const FramePtr& frame, const SensitivityFactor& k) {
    RuleModel model;
    model.frame = frame;
    model.default_label = 0;
    model.k = k;
    return model;
}

void add_band_rule(RuleModel& model, int label, double low, double high) {
    RuleCondition cond;
    cond.variable = "f" + std::to_string(label);
    cond.comparator = Comparator::within_range;
    cond.threshold = low;
    cond.threshold_high = high;
    cond.weight = 0.9;
    model.rules.push_back(KnowledgeRule{label, {cond}});
}

void add_catch_all(RuleModel& model) {
    // The explicit otherwise arm: a confident-but-not-certain fallback, so
    // its evidence still carries frame mass for the fusion to work with.
    RuleCondition fallback;
    fallback.variable = "f0";
    fallback.comparator = Comparator::greater_equal;
    fallback.threshold = -1e300;
    fallback.weight = 0.85;
    model.rules.push_back(KnowledgeRule{0, {fallback}});
}

// Half-width, in noise standard deviations, of the bands in the monitoring
// rule model. Deliberately tight: a miss sends the row to the fallback rule,
// whose confident contradiction of the ensemble is the per-row conflict
// signal the detector thresholds are calibrated against. Tight bands keep
// that signal exercised on known classes too, as scattered single-row
// flags that the prediction window and the patience debounce absorb.
constexpr double kMonitorBandHalfWidth = 0.85;

}  // namespace

RuleModel synthetic_rule_model(const SyntheticSpec& spec, const FramePtr& frame,
                               const SensitivityFactor& k) {
    const double scale = axis_scale(spec);
    RuleModel model = band_rule_skeleton(frame, k);
    for (int c = 0; c < spec.n_known; ++c)
        add_band_rule(model, c, scale - kMonitorBandHalfWidth, scale + kMonitorBandHalfWidth);
    add_catch_all(model);
    return model;
}

RuleModel synthetic_weak_rule_model(const SyntheticSpec& spec, const FramePtr& frame,
                                    const SensitivityFactor& k) {
    // One well-placed band (class 0), sloppy thresholds everywhere else:
    // the shifted bands clip a substantial fraction of each class, and the
    // misses fall through to the fallback rule, denting class 0's precision.
    const double scale = axis_scale(spec);
    RuleModel model = band_rule_skeleton(frame, k);
    add_band_rule(model, 0, 0.75 * scale, 1.25 * scale);
    for (int c = 1; c < spec.n_known; ++c)
        add_band_rule(model, c, 0.55 * scale, 1.05 * scale);
    add_catch_all(model);
    return model;
}

// --- trained study system ----------------------------------------------------

StudySystem build_study_system(const ExperimentConfig& cfg) {
    validate_experiment_config(cfg);

    StudySystem system;
    system.frame = frame_of(cfg);

    Dataset table;
    if (cfg.synthetic) {
        table = make_synthetic_training(*cfg.synthetic, cfg.seed);
    } else {
        table = load_csv(cfg.data->train_csv, cfg.data->label_column);
    }
    SplitResult parts = split(table, cfg.split);
    system.train = std::move(parts.train);
    system.val = std::move(parts.val);
    system.test = std::move(parts.test);

    const SensitivityFactor k = k_factor(cfg.sensitivity_exponent);
    if (!cfg.members.empty())
        system.ensemble =
            train_ensemble(cfg.members, system.train, system.frame, cfg.member_weight, k);

    if (!cfg.rules_path.empty()) {
        RuleModel rules = load_rule_model(cfg.rules_path, cfg.sensitivity_exponent);
        if (!same_frame(rules.frame, system.frame))
            throw ConfigError("the rule file's frame differs from the configured frame");
        rules.frame = system.frame;
        system.rules = std::move(rules);
    } else if (cfg.synthetic && cfg.synthetic->author_rules) {
        system.rules = synthetic_rule_model(*cfg.synthetic, system.frame, k);
    }
    return system;
}

// --- recorded stream pass ----------------------------------------------------

StreamTrace run_detection_pass(const StudySystem& system, const Dataset& stream,
                               const UpdateConfig& cfg) {
    if (!system.ensemble)
        throw ConfigError("this experiment needs an ensemble; configure members");

    StreamTrace trace;
    trace.has_system_tier = system.rules.has_value();
    const std::size_t n = stream.rows();
    trace.truth = stream.labels;
    trace.y_a.reserve(n);
    trace.flagged.reserve(n);
    trace.u_d_ec.reserve(n);
    trace.u_y_ec.reserve(n);
    trace.u_d_sys.assign(n, 0.0);
    trace.u_y_sys.assign(n, 0.0);

    AnomalyDetectorState state;
    for (std::size_t i = 0; i < n; ++i) {
        const EnsembleVerdict ev = ec_infer(*system.ensemble, stream.features[i]);
        std::optional<SystemVerdict> sv;
        if (system.rules) {
            const RuleVerdict rv =
                klafate_infer_row(*system.rules, stream.feature_names, stream.features[i]);
            sv = system_fuse(ev, rv.mass);
            trace.u_d_sys[i] = sv->u_d_sys;
            trace.u_y_sys[i] = sv->u_y_sys;
        }
        const DetectorStepResult step = detector_step(state, stream.features[i], ev, sv, cfg);
        trace.y_a.push_back(step.y_a);
        trace.flagged.push_back(step.flagged ? 1 : 0);
        trace.u_d_ec.push_back(ev.u_d);
        trace.u_y_ec.push_back(ev.u_y);
        if (trace.retrain_row < 0 && state.phase == DetectorPhase::retrain_ready)
            trace.retrain_row = static_cast<int>(i);
    }
    trace.final_state = std::move(state);
    return trace;
}

std::vector<int> window_labels(const std::vector<int>& labels, std::size_t n_w,
                               const FramePtr& frame) {
    PredictionWindow window(n_w, WindowMode::majority, frame);
    std::vector<int> smoothed;
    smoothed.reserve(labels.size());
    for (int label : labels) smoothed.push_back(window.push(label));
    return smoothed;
}

// --- report writing ----------------------------------------------------------

namespace {

std::string metrics_csv_header(const MetricsReport& report) {
    std::string header = "macro_f1";
    for (int label : report.labels) header += ",f1_" + std::to_string(label);
    for (int label : report.labels) header += ",recall_" + std::to_string(label);
    return header;
}

std::string metrics_csv_cells(const MetricsReport& report) {
    std::string cells = format_fixed(report.macro_f1);
    for (double v : report.f1) cells += "," + format_fixed(v);
    for (double v : report.recall) cells += "," + format_fixed(v);
    return cells;
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double max_of(const std::vector<double>& values) {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

double ensemble_val_f1(const EnsembleClassifier& ec, const Dataset& val_set) {
    double sum = 0.0;
    for (const ClassifierModel& member : ec.members)
        sum += compute_metrics(val_set.labels, member.predict_all(val_set), *ec.frame).macro_f1;
    return sum / static_cast<double>(ec.members.size());
}

}  // namespace

// --- window ablation ---------------------------------------------------------

WindowAblationResult run_window_ablation(const ExperimentConfig& cfg,
                                         const std::vector<std::size_t>& window_sizes) {
    if (window_sizes.empty()) throw ConfigError("window_sizes must not be empty");
    const StudySystem system = build_study_system(cfg);
    if (!system.ensemble)
        throw ConfigError("the window ablation needs an ensemble; configure members");
    ensure_out_dir(cfg.out_dir);

    Dataset stream;
    if (cfg.synthetic) {
        stream = make_synthetic_stream(*cfg.synthetic, cfg.update.anomaly_label, cfg.seed + 1);
    } else {
        if (cfg.data->stream_csv.empty())
            throw ConfigError("data.stream_csv is required for stream experiments");
        stream = load_csv(cfg.data->stream_csv, cfg.data->label_column);
    }

    const StreamTrace trace = run_detection_pass(system, stream, cfg.update);
    const std::vector<double>& u_d = trace.has_system_tier ? trace.u_d_sys : trace.u_d_ec;
    const std::vector<double>& u_y = trace.has_system_tier ? trace.u_y_sys : trace.u_y_ec;

    WindowAblationResult result;
    result.window_sizes = window_sizes;
    for (std::size_t n_w : window_sizes) {
        const std::vector<int> smoothed = window_labels(trace.y_a, n_w, system.frame);
        result.reports.push_back(
            compute_metrics(trace.truth, smoothed, *system.frame, u_d, u_y));
    }

    std::string table = "window_size," + metrics_csv_header(result.reports.front()) + "\n";
    for (std::size_t i = 0; i < window_sizes.size(); ++i)
        table += std::to_string(window_sizes[i]) + "," + metrics_csv_cells(result.reports[i]) +
                 "\n";
    result.table_csv_path = join_path(cfg.out_dir, "window_ablation.csv");
    write_file(result.table_csv_path, table);

    std::string trace_csv = "row,truth,y_a,flagged,u_d_ec,u_y_ec,u_d_sys,u_y_sys\n";
    for (std::size_t i = 0; i < trace.truth.size(); ++i) {
        trace_csv += std::to_string(i) + "," + std::to_string(trace.truth[i]) + "," +
                     std::to_string(trace.y_a[i]) + "," +
                     std::to_string(static_cast<int>(trace.flagged[i])) + "," +
                     format_fixed(trace.u_d_ec[i]) + "," + format_fixed(trace.u_y_ec[i]) + "," +
                     format_fixed(trace.u_d_sys[i]) + "," + format_fixed(trace.u_y_sys[i]) +
                     "\n";
    }
    result.trace_csv_path = join_path(cfg.out_dir, "uncertainty_trace.csv");
    write_file(result.trace_csv_path, trace_csv);

    std::ostringstream summary;
    summary << "prediction-window ablation\n";
    summary << "seed " << cfg.seed << ", stream rows " << trace.truth.size()
            << ", rule tier " << (trace.has_system_tier ? "on" : "off") << "\n\n";
    summary << "window_size  macro_f1\n";
    std::size_t best = 0;
    for (std::size_t i = 0; i < window_sizes.size(); ++i) {
        summary << window_sizes[i] << "  " << format_fixed(result.reports[i].macro_f1) << "\n";
        if (result.reports[i].macro_f1 > result.reports[best].macro_f1) best = i;
    }
    summary << "\nbest window size: " << window_sizes[best] << " (macro-F1 "
            << format_fixed(result.reports[best].macro_f1) << ")\n";
    for (std::size_t i = 0; i < window_sizes.size(); ++i) {
        summary << "\n--- window size " << window_sizes[i] << " ---\n"
                << metrics_to_text(result.reports[i]);
    }
    result.summary_path = join_path(cfg.out_dir, "window_ablation_summary.txt");
    write_file(result.summary_path, summary.str());
    return result;
}

// --- retraining parameter sweep ----------------------------------------------

RetrainSweepResult run_retrain_sweep(const ExperimentConfig& cfg,
                                     const std::vector<int>& threshold_sizes,
                                     const std::vector<std::size_t>& window_sizes,
                                     const std::vector<int>& patiences,
                                     const std::function<bool()>& confirm_retrain) {
    if (threshold_sizes.empty() || window_sizes.empty() || patiences.empty())
        throw ConfigError("the sweep needs at least one value per parameter");
    const StudySystem system = build_study_system(cfg);
    if (!system.ensemble)
        throw ConfigError("the retraining sweep needs an ensemble; configure members");
    ensure_out_dir(cfg.out_dir);

    Dataset batch1, batch2;
    if (cfg.synthetic) {
        batch1 = make_synthetic_stream(*cfg.synthetic, cfg.update.anomaly_label, cfg.seed + 1);
        batch2 = make_synthetic_stream(*cfg.synthetic, cfg.update.anomaly_label, cfg.seed + 3);
    } else {
        if (cfg.data->stream_csv.empty())
            throw ConfigError("data.stream_csv is required for stream experiments");
        batch1 = load_csv(cfg.data->stream_csv, cfg.data->label_column);
        batch2 = batch1;
    }

    // Semi-automatic mode asks once; the answer covers the whole sweep.
    std::optional<bool> confirmed;
    const auto retrain_allowed = [&]() {
        if (!cfg.semi_auto) return true;
        if (!confirm_retrain) return false;
        if (!confirmed) confirmed = confirm_retrain();
        return *confirmed;
    };

    const double val_f1_initial = ensemble_val_f1(*system.ensemble, system.val);

    RetrainSweepResult result;
    std::string notifications;
    for (int th : threshold_sizes) {
        for (std::size_t ws : window_sizes) {
            for (int pt : patiences) {
                RetrainSweepCell cell;
                cell.threshold_size = th;
                cell.window_size = ws;
                cell.patience = pt;
                cell.val_f1_before = val_f1_initial;

                UpdateConfig cell_cfg = cfg.update;
                cell_cfg.threshold_size = th;
                cell_cfg.window_size = ws;
                cell_cfg.patience = pt;
                validate_config(cell_cfg, system.frame);

                EnsembleClassifier live_ec = *system.ensemble;
                FramePtr live_frame = system.frame;
                UpdateConfig live_cfg = cell_cfg;
                bool rules_active = system.rules.has_value();
                std::optional<RetrainResult> update;

                // Batch 1: collect, and swap the retrained ensemble in
                // mid-stream the moment the detector is ready.
                std::vector<double> u_d_sys_series;
                u_d_sys_series.reserve(batch1.rows());
                AnomalyDetectorState state;
                for (std::size_t i = 0; i < batch1.rows(); ++i) {
                    const EnsembleVerdict ev = ec_infer(live_ec, batch1.features[i]);
                    std::optional<SystemVerdict> sv;
                    double u_d_sys = 0.0;
                    if (rules_active) {
                        const RuleVerdict rv = klafate_infer_row(
                            *system.rules, batch1.feature_names, batch1.features[i]);
                        sv = system_fuse(ev, rv.mass);
                        u_d_sys = sv->u_d_sys;
                    }
                    u_d_sys_series.push_back(u_d_sys);
                    detector_step(state, batch1.features[i], ev, sv, live_cfg);
                    if (state.phase == DetectorPhase::retrain_ready && !update &&
                        retrain_allowed()) {
                        update = retrain(live_ec, system.train, system.val, state, live_cfg,
                                         cfg.split);
                        cell.retrained = true;
                        cell.retrain_row = static_cast<int>(i);
                        cell.committed_rows = update->report.committed_rows;
                        cell.val_f1_before = mean_of(update->report.val_f1_before);
                        cell.val_f1_after = mean_of(update->report.val_f1_after);
                        live_ec = update->ensemble;
                        live_frame = update->frame;
                        live_cfg = update->config;
                        state = update->state;
                        // The rule model still speaks the old frame; drop the
                        // tier and let the notification log alert its owners.
                        rules_active = false;
                    }
                }
                if (!cell.retrained) cell.val_f1_after = cell.val_f1_before;

                // Batch 2: score the system now in service.
                AnomalyDetectorState state2;
                std::vector<int> y_a2;
                std::vector<double> u_d2, u_y2;
                y_a2.reserve(batch2.rows());
                for (std::size_t i = 0; i < batch2.rows(); ++i) {
                    const EnsembleVerdict ev = ec_infer(live_ec, batch2.features[i]);
                    std::optional<SystemVerdict> sv;
                    if (rules_active) {
                        const RuleVerdict rv = klafate_infer_row(
                            *system.rules, batch2.feature_names, batch2.features[i]);
                        sv = system_fuse(ev, rv.mass);
                    }
                    const DetectorStepResult step =
                        detector_step(state2, batch2.features[i], ev, sv, live_cfg);
                    y_a2.push_back(step.y_a);
                    u_d2.push_back(ev.u_d);
                    u_y2.push_back(ev.u_y);
                }
                const std::vector<int> smoothed = window_labels(y_a2, ws, live_frame);
                cell.batch2 =
                    compute_metrics(batch2.labels, smoothed, *live_frame, u_d2, u_y2);

                // Debounced notifications for the knowledge team, from the
                // system-tier uncertainty trace of the collection batch.
                const auto cell_tag = "th=" + std::to_string(th) +
                                      " ws=" + std::to_string(ws) +
                                      " pt=" + std::to_string(pt);
                for (const UpdateNotification& note :
                     klafate_update_signal(u_d_sys_series, cell_cfg))
                    notifications += cell_tag + " | " + note.to_line() + "\n";

                // Per-cell retraining report file.
                std::ostringstream report_text;
                report_text << "retraining report for " << cell_tag << "\n";
                if (update) {
                    report_text << update->report.to_text();
                } else if (cfg.semi_auto && state.phase == DetectorPhase::retrain_ready) {
                    report_text << "retraining is pending confirmation (semi-automatic mode)\n";
                } else {
                    report_text << "retraining did not run: the detector never reached "
                                   "readiness\n";
                }
                cell.report_path = join_path(
                    cfg.out_dir, "retrain_report_th" + std::to_string(th) + "_ws" +
                                     std::to_string(ws) + "_pt" + std::to_string(pt) + ".txt");
                write_file(cell.report_path, report_text.str());

                result.cells.push_back(std::move(cell));
            }
        }
    }

    std::string table =
        "threshold_size,window_size,patience,retrained,retrain_row,committed_rows,"
        "val_f1_before,val_f1_after," +
        metrics_csv_header(result.cells.front().batch2) + "\n";
    for (const RetrainSweepCell& cell : result.cells) {
        table += std::to_string(cell.threshold_size) + "," + std::to_string(cell.window_size) +
                 "," + std::to_string(cell.patience) + "," +
                 std::to_string(cell.retrained ? 1 : 0) + "," +
                 std::to_string(cell.retrain_row) + "," + std::to_string(cell.committed_rows) +
                 "," + format_fixed(cell.val_f1_before) + "," +
                 format_fixed(cell.val_f1_after) + "," + metrics_csv_cells(cell.batch2) + "\n";
    }
    result.table_csv_path = join_path(cfg.out_dir, "retrain_sweep.csv");
    write_file(result.table_csv_path, table);

    result.notifications_path = join_path(cfg.out_dir, "notifications.log");
    write_file(result.notifications_path, notifications);

    std::ostringstream summary;
    summary << "retraining parameter sweep\n";
    summary << "seed " << cfg.seed << ", cells " << result.cells.size() << ", semi-automatic "
            << (cfg.semi_auto ? "on" : "off") << "\n\n";
    summary << "th  ws  pt  retrained  batch2_macro_f1\n";
    for (const RetrainSweepCell& cell : result.cells)
        summary << cell.threshold_size << "  " << cell.window_size << "  " << cell.patience
                << "  " << (cell.retrained ? "yes" : "no") << "  "
                << format_fixed(cell.batch2.macro_f1) << "\n";
    result.summary_path = join_path(cfg.out_dir, "retrain_sweep_summary.txt");
    write_file(result.summary_path, summary.str());
    return result;
}

// --- fusion ablation ---------------------------------------------------------

FusionAblationResult run_fusion_ablation(const ExperimentConfig& cfg) {
    StudySystem system = build_study_system(cfg);
    ensure_out_dir(cfg.out_dir);

    // The ablation's rule model is deliberately weak when authored: the
    // point is whether fusing a strong and a weak source hurts the strong
    // one. A rule file supplied by the user is taken as is.
    if (cfg.rules_path.empty() && cfg.synthetic && cfg.synthetic->author_rules)
        system.rules = synthetic_weak_rule_model(*cfg.synthetic, system.frame,
                                                 k_factor(cfg.sensitivity_exponent));

    Dataset eval;
    if (cfg.synthetic) {
        SyntheticSpec clean = *cfg.synthetic;
        clean.label_flip_fraction = 0.0;
        eval = make_synthetic_training(clean, cfg.seed + 4);
    } else {
        eval = system.test;
    }
    const std::size_t n = eval.rows();

    FusionAblationResult result;
    std::vector<std::string> notices;

    const auto push_row = [&](const std::string& source, const std::vector<int>& predicted,
                              const std::vector<double>& u_d, const std::vector<double>& u_y,
                              const std::string& note) {
        FusionAblationRow row;
        row.source = source;
        row.report = compute_metrics(eval.labels, predicted, *system.frame, u_d, u_y);
        row.mean_u_d = mean_of(u_d);
        row.max_u_d = max_of(u_d);
        row.mean_u_y = mean_of(u_y);
        row.max_u_y = max_of(u_y);
        row.note = note;
        result.rows.push_back(std::move(row));
    };

    // (a) the rule model alone
    std::vector<RuleVerdict> rule_verdicts;
    if (system.rules) {
        std::vector<int> predicted;
        std::vector<double> u_d, u_y;
        rule_verdicts.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            rule_verdicts.push_back(
                klafate_infer_row(*system.rules, eval.feature_names, eval.features[i]));
            predicted.push_back(rule_verdicts.back().y_ke);
            u_d.push_back(rule_verdicts.back().u);
            u_y.push_back(rule_verdicts.back().u);
        }
        push_row("rules", predicted, u_d, u_y, "");
    } else {
        notices.push_back("rule rows skipped: no rule model configured");
    }

    if (system.ensemble) {
        const EnsembleClassifier& ec = *system.ensemble;

        // (b) each member alone
        std::vector<std::vector<int>> member_predictions;
        for (std::size_t m = 0; m < ec.members.size(); ++m) {
            std::vector<int> predicted = ec.members[m].predict_all(eval);
            std::vector<double> u_d, u_y;
            for (int label : predicted) {
                const double theta = prediction_to_mass(label, ec.weights[m], ec.k).theta();
                u_d.push_back(theta);
                u_y.push_back(theta);
            }
            push_row(ec.members[m].spec().describe(), predicted, u_d, u_y, "");
            member_predictions.push_back(std::move(predicted));
        }

        // (c) the two strongest members fused pairwise
        if (ec.members.size() >= 2) {
            std::vector<std::pair<double, std::size_t>> ranking;
            for (std::size_t m = 0; m < ec.members.size(); ++m)
                ranking.emplace_back(
                    compute_metrics(system.val.labels, ec.members[m].predict_all(system.val),
                                    *system.frame)
                        .macro_f1,
                    m);
            std::stable_sort(ranking.begin(), ranking.end(),
                             [](const auto& a, const auto& b) { return a.first > b.first; });
            const std::size_t a = std::min(ranking[0].second, ranking[1].second);
            const std::size_t b = std::max(ranking[0].second, ranking[1].second);

            std::vector<int> predicted;
            std::vector<double> u_d, u_y;
            const ConfidenceWeights pair_weights[2] = {ec.weights[a], ec.weights[b]};
            for (std::size_t i = 0; i < n; ++i) {
                const int votes[2] = {member_predictions[a][i], member_predictions[b][i]};
                const EnsembleVerdict verdict = fuse_predictions(votes, pair_weights, ec.k,
                                                                 system.frame);
                predicted.push_back(verdict.y_ec);
                u_d.push_back(verdict.u_d);
                u_y.push_back(verdict.u_y);
            }
            push_row("pair(" + ec.members[a].spec().describe() + "+" +
                         ec.members[b].spec().describe() + ")",
                     predicted, u_d, u_y,
                     "two strongest members by validation macro-F1");
        }

        // (d) the full ensemble, and (e) ensemble fused with the rules
        std::vector<int> ec_predicted;
        std::vector<double> ec_u_d, ec_u_y;
        std::vector<int> sys_predicted;
        std::vector<double> sys_u_d, sys_u_y;
        for (std::size_t i = 0; i < n; ++i) {
            const EnsembleVerdict verdict = ec_infer(ec, eval.features[i]);
            ec_predicted.push_back(verdict.y_ec);
            ec_u_d.push_back(verdict.u_d);
            ec_u_y.push_back(verdict.u_y);
            if (system.rules) {
                const SystemVerdict sys = system_fuse(verdict, rule_verdicts[i].mass);
                sys_predicted.push_back(sys.y_sys);
                sys_u_d.push_back(sys.u_d_sys);
                sys_u_y.push_back(sys.u_y_sys);
            }
        }
        push_row("ensemble", ec_predicted, ec_u_d, ec_u_y, "");
        if (system.rules) {
            push_row("ensemble+rules", sys_predicted, sys_u_d, sys_u_y, "");
        } else {
            notices.push_back("fusion row skipped: no rule model configured");
        }
    } else {
        notices.push_back("ensemble rows skipped: no members configured");
    }

    std::string table = "source," + metrics_csv_header(result.rows.front().report) +
                        ",mean_u_d,max_u_d,mean_u_y,max_u_y,note\n";
    for (const FusionAblationRow& row : result.rows)
        table += row.source + "," + metrics_csv_cells(row.report) + "," +
                 format_fixed(row.mean_u_d) + "," + format_fixed(row.max_u_d) + "," +
                 format_fixed(row.mean_u_y) + "," + format_fixed(row.max_u_y) + "," + row.note +
                 "\n";
    result.table_csv_path = join_path(cfg.out_dir, "fusion_ablation.csv");
    write_file(result.table_csv_path, table);

    std::ostringstream summary;
    summary << "fusion ablation\n";
    summary << "seed " << cfg.seed << ", evaluation rows " << n << "\n\n";
    summary << "source  macro_f1  mean_u_d  mean_u_y\n";
    for (const FusionAblationRow& row : result.rows)
        summary << row.source << "  " << format_fixed(row.report.macro_f1) << "  "
                << format_fixed(row.mean_u_d) << "  " << format_fixed(row.mean_u_y) << "\n";
    for (const std::string& notice : notices) summary << "\nnote: " << notice << "\n";
    result.summary_path = join_path(cfg.out_dir, "fusion_ablation_summary.txt");
    write_file(result.summary_path, summary.str());
    return result;
}

}  // namespace evifuse
