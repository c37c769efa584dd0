#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wqc/analysis.hpp"
#include "wqc/error.hpp"
#include "wqc/instance.hpp"
#include "wqc/quartets.hpp"
#include "wqc/random.hpp"
#include "wqc/stepwise.hpp"

namespace wqc::testing {

inline TaxaPtr taxa_of(int n) { return make_taxa(default_labels(n)); }

inline Tree tree(const std::string& newick, const TaxaPtr& taxa = nullptr) {
    NewickOptions options;
    options.taxa = taxa;
    return parse_newick(newick, options);
}

inline WqcInstance instance(const std::vector<std::pair<std::int64_t, std::string>>& records) {
    TaxaPtr taxa;
    std::vector<WeightedTree> trees;
    for (const auto& [m, nw] : records) {
        trees.push_back({tree(nw, taxa), m});
        taxa = trees.back().tree.taxa_ptr();
    }
    return WqcInstance(taxa, trees);
}

/// Oracle: quartet of t on {a,b,c,d} read from the restricted four-leaf tree.
inline int restricted_topology(const Tree& t, const Quadset& q) {
    const std::vector<int> keep(q.begin(), q.end());
    const Tree r = restrict(t, keep);
    // The restricted tree numbers its leaves in t's taxon order, which keeps q sorted.
    return four_leaf_topology(r);
}

/// Oracle: score as the sum over input trees of multiplicity times shared quartets.
inline std::int64_t tree_by_tree_score(const WqcInstance& inst, const Tree& m) {
    std::int64_t s = 0;
    const auto mq = quartets_of_tree(m);
    for (const auto& wt : inst.trees()) {
        const auto tq = quartets_of_tree(wt.tree);
        std::int64_t shared = 0;
        for (std::size_t i = 0; i < mq.size(); ++i) shared += mq[i] == tq[i];
        s += wt.multiplicity * shared;
    }
    return s;
}

struct BruteOptimum {
    std::int64_t best = -1;
    std::vector<std::string> optima;  // canonical Newick, sorted
};

/// Oracle: materialize every topology and score it.
inline BruteOptimum brute_optimum(const QuartetTable& table) {
    BruteOptimum out;
    for (const auto& t : enumerate_topologies(table.taxa_ptr())) {
        const auto s = score(table, t);
        if (s > out.best) {
            out.best = s;
            out.optima.clear();
        }
        if (s == out.best) out.optima.push_back(to_newick(t));
    }
    std::sort(out.optima.begin(), out.optima.end());
    return out;
}

inline std::int64_t multiplicity_of(const WqcInstance& inst, const Tree& t) {
    std::int64_t m = 0;
    for (const auto& wt : inst.trees())
        if (isomorphic(wt.tree, t)) m += wt.multiplicity;
    return m;
}

inline WqcInstance without(const WqcInstance& inst, const Tree& t) {
    std::vector<WeightedTree> kept;
    for (const auto& wt : inst.trees())
        if (!isomorphic(wt.tree, t)) kept.push_back(wt);
    return WqcInstance(inst.taxa_ptr(), kept);
}

inline std::string data_path(const std::string& name) { return std::string(WQC_DATA_DIR) + "/" + name; }

inline ProfileSpec no_dominant_spec() {
    std::ifstream is(data_path("no_dominant_profile.json"));
    return parse_profile_spec(nlohmann::json::parse(is));
}

inline const std::string& no_dominant_star() {
    static const std::string s = "((a,e),d,(b,c));";
    return s;
}

/// The realized instance whose unique optimum displays no strictly dominant quartet.
inline const WqcInstance& no_dominant_instance() {
    static const WqcInstance inst = [] {
        auto r = realize_profile(no_dominant_spec());
        if (!r.instance) throw Error("profile not realized");
        return *r.instance;
    }();
    return inst;
}

} // namespace wqc::testing
