#include "evifuse/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "evifuse/errors.hpp"

namespace evifuse {

namespace {

std::vector<int> report_labels(std::span<const int> truth, std::span<const int> predicted,
                               const Frame& frame) {
    std::vector<int> labels = frame.labels();
    std::set<int> extras;
    for (int t : truth) {
        if (!frame.contains(t)) extras.insert(t);
    }
    for (int p : predicted) {
        if (!frame.contains(p)) extras.insert(p);
    }
    labels.insert(labels.end(), extras.begin(), extras.end());
    return labels;
}

std::size_t label_index(const std::vector<int>& labels, int label) {
    return static_cast<std::size_t>(
        std::find(labels.begin(), labels.end(), label) - labels.begin());
}

}  // namespace

MetricsReport compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                              const Frame& frame) {
    if (truth.size() != predicted.size()) {
        throw LengthMismatchError("truth has " + std::to_string(truth.size()) +
                                  " labels, predictions " + std::to_string(predicted.size()));
    }

    MetricsReport r;
    r.labels = report_labels(truth, predicted, frame);
    const std::size_t n = r.labels.size();
    r.support.assign(n, 0);
    r.precision.assign(n, 0.0);
    r.recall.assign(n, 0.0);
    r.f1.assign(n, 0.0);
    r.confusion.assign(n, std::vector<std::size_t>(n, 0));

    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::size_t t = label_index(r.labels, truth[i]);
        const std::size_t p = label_index(r.labels, predicted[i]);
        ++r.confusion[t][p];
        ++r.support[t];
    }

    double f1_sum = 0.0;
    std::size_t f1_count = 0;
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t tp = r.confusion[c][c];
        std::size_t predicted_c = 0;
        for (std::size_t t = 0; t < n; ++t) predicted_c += r.confusion[t][c];
        const std::size_t truth_c = r.support[c];

        r.precision[c] = predicted_c == 0
                             ? 0.0
                             : static_cast<double>(tp) / static_cast<double>(predicted_c);
        r.recall[c] =
            truth_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(truth_c);
        const double pr = r.precision[c] + r.recall[c];
        r.f1[c] = pr == 0.0 ? 0.0 : 2.0 * r.precision[c] * r.recall[c] / pr;
        if (truth_c > 0) {
            f1_sum += r.f1[c];
            ++f1_count;
        }
    }
    r.macro_f1 = f1_count == 0 ? 0.0 : f1_sum / static_cast<double>(f1_count);
    return r;
}

MetricsReport compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                              const Frame& frame, std::span<const double> u_d,
                              std::span<const double> u_y) {
    if (u_d.size() != truth.size() || u_y.size() != truth.size()) {
        throw LengthMismatchError("uncertainty traces must match the label vectors");
    }
    MetricsReport r = compute_metrics(truth, predicted, frame);

    MetricsReport::UncertaintySummary s;
    const std::size_t n = r.labels.size();
    s.mean_u_d.assign(n, 0.0);
    s.max_u_d.assign(n, 0.0);
    s.mean_u_y.assign(n, 0.0);
    s.max_u_y.assign(n, 0.0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::size_t t = label_index(r.labels, truth[i]);
        s.mean_u_d[t] += u_d[i];
        s.mean_u_y[t] += u_y[i];
        s.max_u_d[t] = std::max(s.max_u_d[t], u_d[i]);
        s.max_u_y[t] = std::max(s.max_u_y[t], u_y[i]);
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (r.support[c] > 0) {
            s.mean_u_d[c] /= static_cast<double>(r.support[c]);
            s.mean_u_y[c] /= static_cast<double>(r.support[c]);
        }
    }
    r.uncertainty = std::move(s);
    return r;
}

std::string format_fixed(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string metrics_to_csv(const MetricsReport& r) {
    std::ostringstream out;
    out << "label,support,precision,recall,f1";
    if (r.uncertainty) out << ",mean_u_d,max_u_d,mean_u_y,max_u_y";
    out << "\n";
    for (std::size_t c = 0; c < r.labels.size(); ++c) {
        out << r.labels[c] << "," << r.support[c] << "," << format_fixed(r.precision[c]) << ","
            << format_fixed(r.recall[c]) << "," << format_fixed(r.f1[c]);
        if (r.uncertainty) {
            out << "," << format_fixed(r.uncertainty->mean_u_d[c]) << ","
                << format_fixed(r.uncertainty->max_u_d[c]) << ","
                << format_fixed(r.uncertainty->mean_u_y[c]) << ","
                << format_fixed(r.uncertainty->max_u_y[c]);
        }
        out << "\n";
    }
    out << "macro_f1," << format_fixed(r.macro_f1) << "\n";
    return out.str();
}

std::string metrics_to_text(const MetricsReport& r) {
    std::ostringstream out;
    out << "class  support  precision  recall  f1\n";
    for (std::size_t c = 0; c < r.labels.size(); ++c) {
        char line[128];
        std::snprintf(line, sizeof(line), "%5d  %7zu  %9.4f  %6.4f  %6.4f\n", r.labels[c],
                      r.support[c], r.precision[c], r.recall[c], r.f1[c]);
        out << line;
    }
    out << "macro F1: " << format_fixed(r.macro_f1) << "\n";
    out << "confusion matrix (rows = truth, columns = predicted):\n";
    out << "      ";
    for (int label : r.labels) {
        char cell[16];
        std::snprintf(cell, sizeof(cell), "%6d", label);
        out << cell;
    }
    out << "\n";
    for (std::size_t t = 0; t < r.labels.size(); ++t) {
        char head[16];
        std::snprintf(head, sizeof(head), "%5d ", r.labels[t]);
        out << head;
        for (std::size_t p = 0; p < r.labels.size(); ++p) {
            char cell[16];
            std::snprintf(cell, sizeof(cell), "%6zu", r.confusion[t][p]);
            out << cell;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace evifuse
