#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evifuse/classifiers.hpp"
#include "evifuse/dataset.hpp"
#include "evifuse/ensemble.hpp"
#include "evifuse/metrics.hpp"
#include "evifuse/rules.hpp"
#include "evifuse/update.hpp"

namespace evifuse {

/// The self-contained synthetic study world: known fault classes live on
/// orthogonal feature axes (same geometry as synth_clusters); the unknown
/// condition is a cluster at the midpoint of two known centers, so trained
/// models confidently disagree about it. Streams are contiguous class blocks
/// joined by short interpolated transition segments (process drift between
/// regimes), which is what prediction windows exist to clean up.
struct SyntheticSpec {
    int n_known = 5;                  // known classes, labels 0..n_known-1
    int n_features = 8;
    double separation = 4.0;
    int train_rows_per_class = 240;   // drawn separately from stream rows
    int stream_rows_per_block = 800;  // per class block in a stream
    int transition_rows = 10;         // interpolated rows between blocks
    std::pair<int, int> unknown_parents{1, 2};  // midpoint cluster parents
    double label_flip_fraction = 0.05;          // training-label corruption
    bool author_rules = true;  // build the band rule model when no file given
};

/// Alternative to the synthetic world: CSV files. The stream file's label
/// column is the scoring truth and may already contain the anomaly label.
struct DataFiles {
    std::string train_csv;
    std::string stream_csv;
    std::string label_column = "label";
    std::vector<int> frame_labels;
};

/// One document driving every experiment command.
struct ExperimentConfig {
    std::uint64_t seed = 7;
    std::string out_dir = "reports";
    int sensitivity_exponent = kDefaultSensitivityExponent;
    double member_weight = 0.9;       // < 1, otherwise fused uncertainty is 0
    std::vector<ClassifierSpec> members;
    std::optional<SyntheticSpec> synthetic;
    std::optional<DataFiles> data;
    std::string rules_path;           // empty + synthetic -> authored bands
    std::string kb_path;
    SplitSpec split;
    UpdateConfig update;
    bool semi_auto = false;           // retraining waits for confirmation
};

/// The calibrated default study: three diverse members at weight 0.9 over the
/// synthetic world above, uncertainty thresholds pinned from the measured
/// gap between agreeing and conflicted fusions.
ExperimentConfig default_experiment_config();

/// @throws FileNotFoundError, ParseError; unknown keys are rejected so typos
///         cannot silently fall back to defaults
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

/// @throws ConfigError: no evidence source, a lone ensemble member, both or
///         neither of synthetic/data, bad fractions/weights, update knobs
void validate_experiment_config(const ExperimentConfig& cfg);

// --- synthetic world construction -------------------------------------------

/// Known-class centers in feature space, one per label 0..n_known-1.
std::vector<std::vector<double>> synthetic_centers(const SyntheticSpec& spec);

/// Training table: train_rows_per_class rows per known class (no unknowns),
/// with label_flip_fraction of the labels reassigned to a different class.
Dataset make_synthetic_training(const SyntheticSpec& spec, std::uint64_t seed);

/// One stream: a block per known class in label order, then the unknown
/// block (truth = anomaly_label). Between consecutive blocks sit
/// transition_rows interpolated rows carrying the incoming block's truth
/// label (the process is already switching; sensors lag behind).
Dataset make_synthetic_stream(const SyntheticSpec& spec, int anomaly_label, std::uint64_t seed);

/// Band rules: one per known class, matching the +-2 sigma slab around its
/// center on its own axis, plus a final catch-all concluding default label 0
/// at slightly lower confidence (the explicit "otherwise" arm). Rows of the
/// unknown midpoint cluster match only the catch-all, so the rule tier
/// confidently contradicts the ensemble there: that conflict is the
/// detector's per-row signal.
RuleModel synthetic_rule_model(const SyntheticSpec& spec, const FramePtr& frame,
                               const SensitivityFactor& k);

/// Deliberately weak variant: class 0 keeps its correct band; every other
/// band is shifted half out of place, so misses fall through to the
/// catch-all. Macro-F1 lands near 0.75 on stream data by construction.
RuleModel synthetic_weak_rule_model(const SyntheticSpec& spec, const FramePtr& frame,
                                    const SensitivityFactor& k);

// --- trained study system ----------------------------------------------------

struct StudySystem {
    std::optional<EnsembleClassifier> ensemble;  // absent in rules-only configs
    std::optional<RuleModel> rules;
    FramePtr frame;
    Dataset train, val, test;
};

/// Trains the configured members (after label corruption, for synthetic
/// worlds) and loads or authors the rule model.
StudySystem build_study_system(const ExperimentConfig& cfg);

// --- recorded stream pass ----------------------------------------------------

/// Everything one detector pass over a stream produced, row by row.
struct StreamTrace {
    std::vector<int> truth;
    std::vector<int> y_a;              // post-detector label (A_K when flagged)
    std::vector<char> flagged;
    std::vector<double> u_d_ec, u_y_ec;
    std::vector<double> u_d_sys, u_y_sys;  // zeros when no rule tier ran
    bool has_system_tier = false;
    AnomalyDetectorState final_state;
    int retrain_row = -1;              // first retrain-ready row, -1 if never
};

/// Runs the detector over the stream without retraining (the collection pass
/// shared by the window ablation and the sweep's first batch).
StreamTrace run_detection_pass(const StudySystem& system, const Dataset& stream,
                               const UpdateConfig& cfg);

/// Applies a majority prediction window of the given size to a label stream.
std::vector<int> window_labels(const std::vector<int>& labels, std::size_t n_w,
                               const FramePtr& frame);

// --- experiment runners ------------------------------------------------------

struct WindowAblationResult {
    std::vector<std::size_t> window_sizes;
    std::vector<MetricsReport> reports;      // one per size, same order
    std::string table_csv_path;
    std::string trace_csv_path;
    std::string summary_path;
};

/// Streams once, then scores the smoothed decision stream at every window
/// size. Emits the comparison table, the per-row uncertainty trace, and a
/// text summary under cfg.out_dir.
/// @throws ConfigError (empty window_sizes, config without an ensemble)
WindowAblationResult run_window_ablation(const ExperimentConfig& cfg,
                                         const std::vector<std::size_t>& window_sizes);

struct RetrainSweepCell {
    int threshold_size = 0;
    std::size_t window_size = 0;
    int patience = 0;
    bool retrained = false;
    int retrain_row = -1;               // batch-1 row of the model swap
    std::size_t committed_rows = 0;     // buffer size at the swap
    double val_f1_before = 0.0;         // ensemble mean over members
    double val_f1_after = 0.0;
    MetricsReport batch2;               // scored after the swap
    std::string report_path;            // per-cell retraining report file
};

struct RetrainSweepResult {
    std::vector<RetrainSweepCell> cells;  // full factorial, lexicographic
    std::string table_csv_path;
    std::string notifications_path;
    std::string summary_path;
};

/// Full factorial over {Th} x {Ws} x {Pt}. Each cell: stream batch 1 until
/// the detector is retrain-ready, swap in the retrained ensemble mid-stream,
/// finish batch 1, then score batch 2 with the updated system. The rule tier
/// is dropped after the frame extension (its frame is out of date) and the
/// knowledge team is notified through the update log instead.
/// @throws ConfigError (empty value lists, config without an ensemble)
RetrainSweepResult run_retrain_sweep(const ExperimentConfig& cfg,
                                     const std::vector<int>& threshold_sizes,
                                     const std::vector<std::size_t>& window_sizes,
                                     const std::vector<int>& patiences,
                                     const std::function<bool()>& confirm_retrain = {});

struct FusionAblationRow {
    std::string source;                // "rules", member tags, "pair(...)", ...
    MetricsReport report;
    double mean_u_d = 0.0, max_u_d = 0.0;
    double mean_u_y = 0.0, max_u_y = 0.0;
    std::string note;
};

struct FusionAblationResult {
    std::vector<FusionAblationRow> rows;
    std::string table_csv_path;
    std::string summary_path;
};

/// Scores, on a fresh known-class evaluation stream: the rule model alone,
/// each ensemble member alone, the fusion of the two strongest members (the
/// substitution for a pairing the classifier pool cannot form; the row's
/// note says so), the full ensemble, and the ensemble fused with the rules.
/// Sources missing from the config are skipped with a notice in the summary.
FusionAblationResult run_fusion_ablation(const ExperimentConfig& cfg);

}  // namespace evifuse
