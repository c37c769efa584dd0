#include "wqc/taxa.hpp"

#include "wqc/error.hpp"

namespace wqc {

TaxonSet::TaxonSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].empty()) throw LabelError("empty taxon label");
        if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
            throw LabelError("duplicate taxon label '" + labels_[i] + "'");
    }
}

std::optional<int> TaxonSet::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int TaxonSet::index(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw LabelError("unknown taxon label '" + std::string(label) + "'");
}

std::vector<std::string> default_labels(int n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (n <= 26)
            out.emplace_back(1, static_cast<char>('a' + i));
        else
            out.push_back("t" + std::to_string(i + 1));
    }
    return out;
}

bool same_taxa(const TaxaPtr& a, const TaxaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

} // namespace wqc
