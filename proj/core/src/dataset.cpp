#include "evifuse/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "evifuse/errors.hpp"
#include "rng_util.hpp"

namespace evifuse {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // Trim surrounding whitespace; CSV exports differ on padding.
        const auto begin = cell.find_first_not_of(" \t\r");
        const auto end = cell.find_last_not_of(" \t\r");
        cells.push_back(begin == std::string::npos ? "" : cell.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t row, const std::string& column,
                             const std::string& cell) {
    throw ParseError(path + ": row " + std::to_string(row) + ", column '" + column +
                     "': cannot parse '" + cell + "'");
}

using detail::normal_pair;
using detail::uniform01;

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.feature_names = ds.feature_names;
    out.features.reserve(idx.size());
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) {
        out.features.push_back(ds.features[i]);
        out.labels.push_back(ds.labels[i]);
    }
    return out;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file, expected a header row");
    const auto header = split_line(line);

    std::size_t label_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == label_column) {
            label_idx = i;
            break;
        }
    }
    if (label_idx == header.size()) {
        throw MissingLabelColumnError(path + ": no column named '" + label_column + "'");
    }

    Dataset ds;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != label_idx) ds.feature_names.push_back(header[i]);
    }

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw ParseError(path + ": row " + std::to_string(row) + " has " +
                             std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(header.size()));
        }
        std::vector<double> feats;
        feats.reserve(header.size() - 1);
        int label = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string& cell = cells[i];
            if (i == label_idx) {
                auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
                if (ec != std::errc{} || p != cell.data() + cell.size()) {
                    parse_fail(path, row, header[i], cell);
                }
            } else {
                double v = 0.0;
                auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc{} || p != cell.data() + cell.size() || !std::isfinite(v)) {
                    parse_fail(path, row, header[i], cell);
                }
                feats.push_back(v);
            }
        }
        ds.features.push_back(std::move(feats));
        ds.labels.push_back(label);
    }
    return ds;
}

SplitResult split(const Dataset& ds, const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.val_fraction <= 0.0 ||
        spec.train_fraction + spec.val_fraction >= 1.0) {
        throw std::invalid_argument("split fractions must be positive with train+val < 1");
    }

    // Group rows by label (first-appearance order keeps this deterministic),
    // or treat everything as one group when not stratifying.
    std::vector<int> group_labels;
    std::vector<std::vector<std::size_t>> groups;
    if (spec.stratified) {
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            auto it = std::find(group_labels.begin(), group_labels.end(), ds.labels[i]);
            if (it == group_labels.end()) {
                group_labels.push_back(ds.labels[i]);
                groups.emplace_back();
                it = group_labels.end() - 1;
            }
            groups[static_cast<std::size_t>(it - group_labels.begin())].push_back(i);
        }
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].size() < 3) {
                throw ClassTooSmallError("class " + std::to_string(group_labels[g]) +
                                         " has only " + std::to_string(groups[g].size()) +
                                         " rows; stratified split needs at least 3");
            }
        }
    } else {
        groups.emplace_back(ds.rows());
        for (std::size_t i = 0; i < ds.rows(); ++i) groups[0][i] = i;
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<std::size_t> train_idx, val_idx, test_idx;
    for (auto& group : groups) {
        // Fisher-Yates with explicit draws; std::shuffle's sequence is not
        // pinned by the standard and reproducibility is part of the contract.
        for (std::size_t i = group.size(); i > 1; --i) {
            const std::size_t j = rng() % i;
            std::swap(group[i - 1], group[j]);
        }
        const auto n = group.size();
        auto n_train = static_cast<std::size_t>(
            std::llround(spec.train_fraction * static_cast<double>(n)));
        auto n_val =
            static_cast<std::size_t>(std::llround(spec.val_fraction * static_cast<double>(n)));
        n_train = std::max<std::size_t>(1, std::min(n_train, n - 2));
        n_val = std::max<std::size_t>(1, std::min(n_val, n - n_train - 1));
        for (std::size_t i = 0; i < n; ++i) {
            if (i < n_train) {
                train_idx.push_back(group[i]);
            } else if (i < n_train + n_val) {
                val_idx.push_back(group[i]);
            } else {
                test_idx.push_back(group[i]);
            }
        }
    }
    return SplitResult{take_rows(ds, train_idx), take_rows(ds, val_idx), take_rows(ds, test_idx)};
}

Dataset concat(const Dataset& a, const Dataset& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) {
        throw FeatureMismatchError("cannot concatenate " + std::to_string(a.cols()) +
                                   "-feature rows with " + std::to_string(b.cols()) +
                                   "-feature rows");
    }
    Dataset out = a;
    out.features.insert(out.features.end(), b.features.begin(), b.features.end());
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    if (out.feature_names.empty()) out.feature_names = b.feature_names;
    return out;
}

Dataset relabel(const Dataset& ds, const std::map<int, int>& mapping) {
    Dataset out = ds;
    for (int& label : out.labels) {
        auto it = mapping.find(label);
        if (it != mapping.end()) label = it->second;
    }
    return out;
}

Dataset filter_labels(const Dataset& ds, const std::vector<int>& keep) {
    const std::unordered_set<int> wanted(keep.begin(), keep.end());
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (wanted.count(ds.labels[i])) idx.push_back(i);
    }
    return Dataset{[&] {
                       std::vector<std::vector<double>> f;
                       f.reserve(idx.size());
                       for (std::size_t i : idx) f.push_back(ds.features[i]);
                       return f;
                   }(),
                   [&] {
                       std::vector<int> l;
                       l.reserve(idx.size());
                       for (std::size_t i : idx) l.push_back(ds.labels[i]);
                       return l;
                   }(),
                   ds.feature_names};
}

Dataset synth_clusters(int n_classes, int n_features, int n_per_class, double separation,
                       std::uint64_t seed) {
    if (n_classes < 1 || n_features < 1 || n_per_class < 1 || separation <= 0.0) {
        throw std::invalid_argument("synth_clusters arguments must be positive");
    }
    if (n_classes > n_features) {
        throw std::invalid_argument(
            "synth_clusters places centers on orthogonal axes and needs "
            "n_classes <= n_features");
    }

    // Centers c*e_i on orthogonal axes are mutually sqrt(2)*c apart; scale so
    // that distance equals separation * sqrt(n_features).
    const double scale =
        separation * std::sqrt(static_cast<double>(n_features)) / std::sqrt(2.0);

    Dataset ds;
    ds.feature_names.reserve(static_cast<std::size_t>(n_features));
    for (int f = 0; f < n_features; ++f) ds.feature_names.push_back("f" + std::to_string(f));

    std::mt19937_64 rng(seed);
    const auto total = static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(n_per_class);
    ds.features.reserve(total);
    ds.labels.reserve(total);
    for (int c = 0; c < n_classes; ++c) {
        for (int r = 0; r < n_per_class; ++r) {
            std::vector<double> row(static_cast<std::size_t>(n_features));
            for (int f = 0; f + 1 < n_features; f += 2) {
                normal_pair(rng, row[static_cast<std::size_t>(f)],
                            row[static_cast<std::size_t>(f) + 1]);
            }
            if (n_features % 2 == 1) {
                double z0 = 0.0, z1 = 0.0;
                normal_pair(rng, z0, z1);
                row[static_cast<std::size_t>(n_features) - 1] = z0;
            }
            row[static_cast<std::size_t>(c)] += scale;
            ds.features.push_back(std::move(row));
            ds.labels.push_back(c);
        }
    }
    return ds;
}

}  // namespace evifuse
