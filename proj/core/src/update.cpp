#include <cstdio>
#include <sstream>
#include <utility>

#include "evifuse/errors.hpp"
#include "evifuse/metrics.hpp"
#include "evifuse/update.hpp"

namespace evifuse {

namespace {

void append_row(Dataset& ds, std::span<const double> row, int label) {
    ds.features.emplace_back(row.begin(), row.end());
    ds.labels.push_back(label);
}

DetectorPhase derive_phase(const AnomalyDetectorState& st, const UpdateConfig& cfg) {
    if (st.committed_buffer.rows() >= static_cast<std::size_t>(cfg.threshold_size))
        return DetectorPhase::retrain_ready;
    if (st.committed_buffer.rows() > 0) return DetectorPhase::collecting;
    if (st.i_a > 0) return DetectorPhase::suspect;
    return DetectorPhase::normal;
}

double mean_weight(const ConfidenceWeights& w) {
    double sum = 0.0;
    for (double v : w.values()) sum += v;
    return sum / static_cast<double>(w.values().size());
}

}  // namespace

void validate_config(const UpdateConfig& cfg, const FramePtr& frame) {
    if (!(cfg.tr_d_max > 0.0 && cfg.tr_d_max < 1.0))
        throw ConfigError("tr_d_max must lie strictly inside (0,1)");
    if (!(cfg.tr_y_max > 0.0 && cfg.tr_y_max < 1.0))
        throw ConfigError("tr_y_max must lie strictly inside (0,1)");
    if (cfg.threshold_size < 1) throw ConfigError("threshold_size must be positive");
    if (cfg.patience < 1) throw ConfigError("patience must be positive");
    if (cfg.window_size < 0) throw ConfigError("window_size must be non-negative");
    if (cfg.threshold_size < cfg.patience)
        throw ConfigError("threshold_size must be at least the patience (a retraining set "
                          "must span one committed run)");
    if (frame && frame->contains(cfg.anomaly_label))
        throw ConfigError("anomaly label " + std::to_string(cfg.anomaly_label) +
                          " is already a known class");
}

bool anomaly_flag(double u_d_ec, double u_y_ec, double u_d_sys, double u_y_sys,
                  const UpdateConfig& cfg) {
    const bool ec_tier = u_d_ec > cfg.tr_d_max && u_y_ec > cfg.tr_y_max;
    const bool sys_tier = u_d_sys > cfg.tr_d_max && u_y_sys > cfg.tr_y_max;
    return ec_tier || sys_tier;
}

bool anomaly_flag(double u_d_ec, double u_y_ec, const UpdateConfig& cfg) {
    return u_d_ec > cfg.tr_d_max && u_y_ec > cfg.tr_y_max;
}

const char* phase_name(DetectorPhase phase) {
    switch (phase) {
        case DetectorPhase::normal: return "normal";
        case DetectorPhase::suspect: return "suspect";
        case DetectorPhase::collecting: return "collecting";
        case DetectorPhase::retrain_ready: return "retrain_ready";
    }
    return "?";
}

DetectorStepResult detector_step(AnomalyDetectorState& state,
                                 std::span<const double> observation,
                                 const EnsembleVerdict& ec_verdict,
                                 const std::optional<SystemVerdict>& sys_verdict,
                                 const UpdateConfig& cfg) {
    const bool flagged =
        sys_verdict.has_value()
            ? anomaly_flag(ec_verdict.u_d, ec_verdict.u_y, sys_verdict->u_d_sys,
                           sys_verdict->u_y_sys, cfg)
            : anomaly_flag(ec_verdict.u_d, ec_verdict.u_y, cfg);

    DetectorStepResult result;
    result.flagged = flagged;
    if (flagged) {
        result.y_a = cfg.anomaly_label;
        state.i_a += 1;
        append_row(state.temp_buffer, observation, cfg.anomaly_label);
        if (state.i_a > cfg.patience) {
            // Commit the whole pending run. After the first commitment of a
            // run the temp buffer only ever holds the current row, so this
            // single move covers both the commit moment and later appends.
            state.committed_buffer = concat(state.committed_buffer, state.temp_buffer);
            state.temp_buffer = Dataset{};
        }
    } else {
        result.y_a = sys_verdict.has_value() ? sys_verdict->y_sys : ec_verdict.y_ec;
        state.i_a = 0;
        state.temp_buffer = Dataset{};
    }
    state.phase = derive_phase(state, cfg);
    return result;
}

std::string RetrainReport::to_text() const {
    std::ostringstream out;
    out << "retraining report\n";
    out << "committed_rows," << committed_rows << "\n";
    out << "anomaly_train_rows," << anomaly_train_rows << "\n";
    out << "anomaly_val_rows," << anomaly_val_rows << "\n";
    out << "new_label," << new_label << "\n";
    out << "threshold_size," << params.threshold_size << "\n";
    out << "window_size," << params.window_size << "\n";
    out << "patience," << params.patience << "\n";
    out << "tr_d_max," << format_fixed(params.tr_d_max) << "\n";
    out << "tr_y_max," << format_fixed(params.tr_y_max) << "\n";
    out << "member,val_f1_before,val_f1_after\n";
    for (std::size_t i = 0; i < member_names.size(); ++i) {
        out << member_names[i] << "," << format_fixed(val_f1_before[i]) << ","
            << format_fixed(val_f1_after[i]) << "\n";
    }
    return out.str();
}

RetrainResult retrain(const EnsembleClassifier& ec, const Dataset& old_train,
                      const Dataset& old_val, const AnomalyDetectorState& state,
                      const UpdateConfig& cfg, const SplitSpec& split_spec) {
    if (state.phase != DetectorPhase::retrain_ready)
        throw NotReadyError(std::string("retraining requires the retrain_ready phase, "
                                        "detector is ") +
                            phase_name(state.phase));

    // Carve the anomaly buffer into its own train/val/test parts, then union
    // with the historical data so nothing already learned is dropped.
    const SplitResult anomaly_parts = split(state.committed_buffer, split_spec);
    const Dataset new_train = concat(old_train, anomaly_parts.train);
    const Dataset new_val = concat(old_val, anomaly_parts.val);
    const FramePtr new_frame =
        std::make_shared<const Frame>(ec.frame->extended(cfg.anomaly_label));

    RetrainReport report;
    report.committed_rows = state.committed_buffer.rows();
    report.anomaly_train_rows = anomaly_parts.train.rows();
    report.anomaly_val_rows = anomaly_parts.val.rows();
    report.new_label = cfg.anomaly_label;
    report.params = cfg;

    std::vector<ClassifierModel> members;
    std::vector<ConfidenceWeights> weights;
    members.reserve(ec.members.size());
    weights.reserve(ec.members.size());
    for (std::size_t i = 0; i < ec.members.size(); ++i) {
        const ClassifierModel& old_member = ec.members[i];
        report.member_names.push_back(old_member.spec().describe());
        report.val_f1_before.push_back(
            compute_metrics(old_val.labels, old_member.predict_all(old_val), *ec.frame)
                .macro_f1);

        ClassifierModel refit = train(old_member.spec(), new_train, new_frame);
        report.val_f1_after.push_back(
            compute_metrics(new_val.labels, refit.predict_all(new_val), *new_frame).macro_f1);
        members.push_back(std::move(refit));

        std::vector<double> w = ec.weights[i].values();
        w.push_back(mean_weight(ec.weights[i]));  // confidence in the new class
        weights.emplace_back(new_frame, std::move(w));
    }

    RetrainResult result{
        make_ensemble(std::move(members), std::move(weights), ec.k),
        new_frame,
        AnomalyDetectorState{},
        cfg,
        std::move(report),
    };
    result.config.anomaly_label = new_frame->next_free_label();
    return result;
}

std::string UpdateNotification::to_line() const {
    std::ostringstream out;
    out << "tier=" << tier << " start_index=" << start_index << " length=" << length
        << " max_u=" << format_fixed(max_u);
    return out.str();
}

std::vector<UpdateNotification> klafate_update_signal(std::span<const double> u_series,
                                                      const UpdateConfig& cfg,
                                                      const std::string& tier) {
    std::vector<UpdateNotification> notifications;
    std::size_t run_start = 0;
    std::size_t run_length = 0;
    double run_max = 0.0;
    auto close_run = [&] {
        if (run_length >= static_cast<std::size_t>(cfg.patience))
            notifications.push_back(UpdateNotification{run_start, run_length, run_max, tier});
        run_length = 0;
        run_max = 0.0;
    };
    for (std::size_t i = 0; i < u_series.size(); ++i) {
        if (u_series[i] > cfg.tr_d_max) {
            if (run_length == 0) run_start = i;
            ++run_length;
            if (u_series[i] > run_max) run_max = u_series[i];
        } else {
            close_run();
        }
    }
    close_run();
    return notifications;
}

}  // namespace evifuse
