#include <cmath>
#include <stdexcept>

#include "evifuse/classifiers.hpp"
#include "evifuse/errors.hpp"

namespace evifuse {

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw EmptyTrainingSetError("cannot fit standardizer on zero rows");
    const std::size_t d = rows.front().size();
    std::vector<double> mean(d, 0.0);
    for (const auto& row : rows) {
        if (row.size() != d)
            throw DimensionMismatchError("ragged feature rows while fitting standardizer");
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    const double n = static_cast<double>(rows.size());
    for (double& m : mean) m /= n;

    std::vector<double> stddev(d, 0.0);
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < d; ++j) {
            const double delta = row[j] - mean[j];
            stddev[j] += delta * delta;
        }
    }
    for (double& s : stddev) {
        s = std::sqrt(s / n);
        if (s == 0.0) s = 1.0;  // constant feature: pass through centered
    }
    return Standardizer(std::move(mean), std::move(stddev));
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
    if (mean_.size() != stddev_.size())
        throw DimensionMismatchError("standardizer mean/stddev length mismatch");
    for (double s : stddev_)
        if (!(s > 0.0)) throw std::invalid_argument("standardizer stddev entries must be positive");
}

std::vector<double> Standardizer::transform(std::span<const double> row) const {
    if (row.size() != mean_.size())
        throw DimensionMismatchError("expected " + std::to_string(mean_.size()) +
                                     " features, got " + std::to_string(row.size()));
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean_[j]) / stddev_[j];
    return out;
}

}  // namespace evifuse
