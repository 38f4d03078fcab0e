#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace evifuse {

/// The ordered set of class labels over which every piece of evidence is
/// expressed. Labels are integer class/fault codes; their position in the
/// list is the index used by mass vectors, so order is part of the identity.
///
/// Immutable after construction and safe to share across threads.
class Frame {
public:
    /// @throws DuplicateLabelError  if two labels coincide
    /// @throws TooFewLabelsError    if fewer than two labels are given
    explicit Frame(std::vector<int> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int label_at(std::size_t index) const { return labels_.at(index); }

    /// @throws LabelNotInFrameError
    std::size_t index_of(int label) const;
    bool contains(int label) const noexcept;

    /// New frame with `new_label` appended last; existing indices are
    /// preserved so serialized mass vectors stay prefix-compatible.
    /// @throws DuplicateLabelError
    Frame extended(int new_label) const;

    /// Smallest integer strictly greater than every current label; used to
    /// pick the next fresh anomaly label after the frame absorbs one.
    int next_free_label() const noexcept;

    bool operator==(const Frame& other) const noexcept { return labels_ == other.labels_; }
    bool operator!=(const Frame& other) const noexcept { return !(*this == other); }

private:
    std::vector<int> labels_;
};

using FramePtr = std::shared_ptr<const Frame>;

inline FramePtr make_frame(std::vector<int> labels) {
    return std::make_shared<const Frame>(std::move(labels));
}

/// True when two frame handles denote the same label sequence (pointer
/// equality short-circuits the comparison).
inline bool same_frame(const FramePtr& a, const FramePtr& b) {
    return a == b || (a && b && *a == *b);
}

}  // namespace evifuse
