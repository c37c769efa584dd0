#include "wqc/random.hpp"

#include <map>

#include "wqc/error.hpp"
#include "wqc/stepwise.hpp"

namespace wqc {

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw Error("empty sampling range");
    const std::uint64_t limit = Rng::max() - (Rng::max() % bound + 1) % bound;
    while (true) {
        const std::uint64_t x = rng();
        if (x <= limit) return x % bound;
    }
}

Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

Tree random_tree(const TaxaPtr& taxa, Rng& rng) {
    StepwiseTree t(taxa->size());
    while (!t.complete()) t.insert(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(t.edge_count()))));
    return t.to_tree(taxa);
}

WqcInstance random_instance(const TaxaPtr& taxa, int k, Rng& rng) {
    if (k < 1) throw Error("an instance needs at least one tree");
    std::map<std::string, WeightedTree> merged;
    std::vector<std::string> order;
    for (int i = 0; i < k; ++i) {
        Tree t = random_tree(taxa, rng);
        auto key = to_newick(t);
        auto it = merged.find(key);
        if (it == merged.end()) {
            order.push_back(key);
            merged.emplace(std::move(key), WeightedTree{std::move(t), 1});
        } else {
            it->second.multiplicity += 1;
        }
    }
    std::vector<WeightedTree> trees;
    for (const auto& key : order) trees.push_back(std::move(merged.at(key)));
    return WqcInstance(taxa, std::move(trees));
}

} // namespace wqc
