#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wqc/tree.hpp"

namespace wqc {

struct WeightedTree {
    Tree tree;
    std::int64_t multiplicity = 1;
};

/// Multiset of binary unrooted trees on one taxon set.
class WqcInstance {
public:
    /// Every tree must be binary, unrooted and on exactly `taxa`; every
    /// multiplicity must be at least one.
    WqcInstance(TaxaPtr taxa, std::vector<WeightedTree> trees);

    const TaxonSet& taxa() const noexcept { return *taxa_; }
    const TaxaPtr& taxa_ptr() const noexcept { return taxa_; }
    const std::vector<WeightedTree>& trees() const noexcept { return trees_; }
    std::size_t size() const noexcept { return trees_.size(); }

    /// k: the sum of the multiplicities.
    std::int64_t total_multiplicity() const;

private:
    TaxaPtr taxa_;
    std::vector<WeightedTree> trees_;
};

/// Instance file: one `multiplicity<TAB>newick` record per line, the
/// multiplicity being optional (default 1). Blank lines and lines starting
/// with `#` are ignored. Taxa follow the first tree's label order unless given.
WqcInstance read_instance(std::istream& is, TaxaPtr taxa = nullptr);
WqcInstance parse_instance(const std::string& text, TaxaPtr taxa = nullptr);
void write_instance(std::ostream& os, const WqcInstance& inst);

} // namespace wqc
