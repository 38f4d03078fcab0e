#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evifuse/frame.hpp"

namespace evifuse {

/// Per-class and aggregate classification quality, plus (optionally) a
/// summary of the uncertainty traces that accompanied the predictions.
struct MetricsReport {
    /// Frame labels in frame order, followed by any labels seen only in the
    /// truth/prediction vectors (e.g. a fresh anomaly label), ascending.
    std::vector<int> labels;
    std::vector<std::size_t> support;   // truth count per label
    std::vector<double> precision;
    std::vector<double> recall;         // the detection rate per class
    std::vector<double> f1;
    double macro_f1 = 0.0;              // unweighted mean over labels with support
    /// confusion[i][j] = rows with truth labels[i] predicted as labels[j].
    std::vector<std::vector<std::size_t>> confusion;

    struct UncertaintySummary {
        std::vector<double> mean_u_d, max_u_d, mean_u_y, max_u_y;  // per label
    };
    std::optional<UncertaintySummary> uncertainty;
};

/// @throws LengthMismatchError when the vectors disagree in length
MetricsReport compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                              const Frame& frame);

/// Same, also summarizing per-row uncertainty readings grouped by true label.
MetricsReport compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                              const Frame& frame, std::span<const double> u_d,
                              std::span<const double> u_y);

/// Stable, locale-independent renderings used by reports; six decimals.
std::string metrics_to_csv(const MetricsReport& report);
std::string metrics_to_text(const MetricsReport& report);

/// Formats a double exactly like report files do ("%.6f").
std::string format_fixed(double value);

}  // namespace evifuse
