#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evifuse/dataset.hpp"
#include "evifuse/ensemble.hpp"
#include "evifuse/system_fusion.hpp"

namespace evifuse {

/// Knobs of the uncertainty monitor and retraining loop.
struct UpdateConfig {
    double tr_d_max = 0.5;    // Dempster uncertainty threshold, in (0,1)
    double tr_y_max = 0.5;    // Yager uncertainty threshold, in (0,1)
    int threshold_size = 100; // minimum committed anomaly rows before retraining
    int window_size = 0;      // smoothing window for stream decisions
    int patience = 15;        // consecutive flags before a run is committed
    int anomaly_label = 30;   // fresh label for the unknown condition
};

/// @throws ConfigError on out-of-range fields, threshold_size < patience, or
///         an anomaly label already in the frame
void validate_config(const UpdateConfig& cfg, const FramePtr& frame);

/// Eq.-of-motion of the monitor: a tier fires when BOTH of its uncertainties
/// exceed their thresholds strictly; tiers combine with OR.
bool anomaly_flag(double u_d_ec, double u_y_ec, double u_d_sys, double u_y_sys,
                  const UpdateConfig& cfg);
/// Without a rule model there is no system tier; the ensemble tier decides.
bool anomaly_flag(double u_d_ec, double u_y_ec, const UpdateConfig& cfg);

enum class DetectorPhase { normal, suspect, collecting, retrain_ready };
const char* phase_name(DetectorPhase phase);

/// Sequential state of the anomaly collector. One owner per stream.
struct AnomalyDetectorState {
    int i_a = 0;               // consecutive anomaly flags
    Dataset temp_buffer;       // current run, not yet past patience
    Dataset committed_buffer;  // confirmed anomalous rows, labeled A_K
    DetectorPhase phase = DetectorPhase::normal;
};

struct DetectorStepResult {
    int y_a = 0;           // anomaly label when flagged, model decision otherwise
    bool flagged = false;  // this row raised the anomaly condition
};

/// Advances the detector by one observation. While a run is shorter than the
/// patience its rows wait in the temp buffer; the first step past patience
/// commits the whole run (earlier rows included), after which flagged rows
/// commit directly. Any unflagged row discards the pending run and resets the
/// counter; committed rows persist. The phase reaches retrain_ready once the
/// committed buffer holds at least threshold_size rows.
DetectorStepResult detector_step(AnomalyDetectorState& state,
                                 std::span<const double> observation,
                                 const EnsembleVerdict& ec_verdict,
                                 const std::optional<SystemVerdict>& sys_verdict,
                                 const UpdateConfig& cfg);

/// Per-member before/after quality and the bookkeeping of one retraining.
struct RetrainReport {
    std::vector<std::string> member_names;
    std::vector<double> val_f1_before;  // on the pre-update validation set
    std::vector<double> val_f1_after;   // on the extended validation set
    std::size_t committed_rows = 0;
    std::size_t anomaly_train_rows = 0;
    std::size_t anomaly_val_rows = 0;
    int new_label = 0;
    UpdateConfig params;
    std::string to_text() const;
};

struct RetrainResult {
    EnsembleClassifier ensemble;   // every member refit from scratch
    FramePtr frame;                // old frame plus the anomaly label
    AnomalyDetectorState state;    // reset to normal, empty buffers
    UpdateConfig config;           // anomaly_label advanced to the next free one
    RetrainReport report;
};

/// Splits the committed anomaly rows, unions them with the old training and
/// validation data, extends the frame with the anomaly label, and refits all
/// members with their existing specs and per-member weights (the new class
/// reuses each member's mean class weight).
/// @throws NotReadyError (phase is not retrain_ready), ClassTooSmallError
RetrainResult retrain(const EnsembleClassifier& ec, const Dataset& old_train,
                      const Dataset& old_val, const AnomalyDetectorState& state,
                      const UpdateConfig& cfg, const SplitSpec& split_spec);

/// One debounced alert for the expert team; rules are never edited here.
struct UpdateNotification {
    std::size_t start_index = 0;  // first sample of the sustained episode
    std::size_t length = 0;       // episode length (>= patience)
    double max_u = 0.0;           // peak uncertainty inside the episode
    std::string tier;             // which monitor fired, e.g. "system"
    std::string to_line() const;  // one-record log line
};

/// Scans an uncertainty series for maximal runs of samples strictly above
/// tr_d_max; each run at least `patience` long yields one notification.
std::vector<UpdateNotification> klafate_update_signal(std::span<const double> u_series,
                                                      const UpdateConfig& cfg,
                                                      const std::string& tier = "system");

}  // namespace evifuse
