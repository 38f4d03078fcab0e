#include "evifuse/frame.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "evifuse/errors.hpp"

namespace evifuse {

Frame::Frame(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) {
        throw TooFewLabelsError("frame needs at least 2 labels, got " +
                                std::to_string(labels_.size()));
    }
    std::unordered_set<int> seen;
    for (int label : labels_) {
        if (!seen.insert(label).second) {
            throw DuplicateLabelError("duplicate label " + std::to_string(label) + " in frame");
        }
    }
}

std::size_t Frame::index_of(int label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw LabelNotInFrameError("label " + std::to_string(label) + " not in frame");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

bool Frame::contains(int label) const noexcept {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

Frame Frame::extended(int new_label) const {
    if (contains(new_label)) {
        throw DuplicateLabelError("label " + std::to_string(new_label) + " already in frame");
    }
    std::vector<int> labels = labels_;
    labels.push_back(new_label);
    return Frame(std::move(labels));
}

int Frame::next_free_label() const noexcept {
    int max = labels_.front();
    for (int label : labels_) max = std::max(max, label);
    return max + 1;
}

}  // namespace evifuse
