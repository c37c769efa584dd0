#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wqc {

/// Ordered set of distinct leaf labels. The position of a label is its
/// canonical rank; every canonical ordering in the library uses it.
class TaxonSet {
public:
    TaxonSet() = default;
    explicit TaxonSet(std::vector<std::string> labels);

    int size() const noexcept { return static_cast<int>(labels_.size()); }
    const std::string& label(int index) const { return labels_.at(static_cast<std::size_t>(index)); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    std::optional<int> find(std::string_view label) const;
    /// Throws LabelError for unknown labels.
    int index(std::string_view label) const;

    bool operator==(const TaxonSet& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

using TaxaPtr = std::shared_ptr<const TaxonSet>;

inline TaxaPtr make_taxa(std::vector<std::string> labels) {
    return std::make_shared<const TaxonSet>(std::move(labels));
}

/// a, b, c, ... for n <= 26, t1, t2, ... otherwise.
std::vector<std::string> default_labels(int n);

/// True when both pointers denote the same label sequence.
bool same_taxa(const TaxaPtr& a, const TaxaPtr& b);

} // namespace wqc
