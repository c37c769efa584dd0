#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wqc/exact.hpp"
#include "wqc/instance.hpp"
#include "wqc/quartets.hpp"

namespace wqc {

/// Facts about every topology of a small instance, gathered in one pass.
struct OptimaScan {
    std::int64_t optimum = -1;
    std::uint64_t optima_count = 0;
    /// How many optimal trees display each quartet, indexed rank * 3 + topology.
    std::vector<std::uint64_t> optimal_display;
    /// Largest number of strictly dominant quartets in one optimal tree.
    std::int64_t most_dominant_in_optimum = 0;
    /// Best score among trees displaying at least one strictly dominant quartet; -1 if none.
    std::int64_t best_with_dominant = -1;
    /// Best tree displaying no strictly least-frequent quartet.
    std::optional<Tree> best_without_least_frequent;
    std::int64_t best_without_least_frequent_score = -1;
};

OptimaScan scan_optima(const QuartetTable& table, int cap = kDefaultEnumerationCap);

struct ConjectureReport {
    int conjecture = 0;  // 1..5
    bool falsifies = false;
    std::int64_t optimum = 0;
    std::uint64_t optima_count = 0;
    std::vector<std::string> optima;  // canonical Newick, possibly truncated
    nlohmann::json evidence;
    /// [{multiplicity, newick}] when the report came from trees.
    nlohmann::json instance;
};

nlohmann::json to_json(const ConjectureReport& r);

/// Evaluates the five dominance conjectures against the exact optima.
std::vector<ConjectureReport> verify_conjectures(const QuartetTable& table, int cap = kDefaultEnumerationCap);
std::vector<ConjectureReport> verify_conjectures(const WqcInstance& inst, int cap = kDefaultEnumerationCap);

/// Frequency profile to realize by a tree multiset.
///
/// JSON form:
///   {"taxa": [...], "k": 44,
///    "quadsets": [{"quadset": ["a","b","c","d"], "counts": [11, 17, 16]},
///                 {"quadset": "*", "permutation_of": [17, 16, 11]}],
///    "displayed_counts": [{"newick": "...", "count": 16}],
///    "fixed_multiplicities": [{"newick": "...", "multiplicity": 3}],
///    "optimum": {"score": 80, "unique": true, "newick": "..."},
///    "variants": [{"drop": "...", "optimum": {"score": 75}}]}
/// A null entry in "counts" is a wildcard. "*" covers the quadsets not listed.
struct ProfileSpec {
    struct QuadsetRule {
        std::optional<Quadset> quadset;  // none for "*"
        std::array<std::optional<std::int64_t>, 3> counts;
        std::optional<std::array<std::int64_t, 3>> permutation_of;
    };
    struct Displayed {
        Tree tree;
        std::int64_t count;
    };
    struct Fixed {
        Tree tree;
        std::int64_t multiplicity;
    };
    struct Optimum {
        std::optional<std::int64_t> score;
        std::optional<bool> unique;
        std::optional<Tree> tree;
    };
    struct Variant {
        Tree drop;
        Optimum optimum;
    };

    TaxaPtr taxa;
    std::int64_t k = 0;
    std::vector<QuadsetRule> quadsets;
    std::vector<Displayed> displayed_counts;
    std::vector<Fixed> fixed_multiplicities;
    Optimum optimum;
    std::vector<Variant> variants;
};

ProfileSpec parse_profile_spec(const nlohmann::json& j);

struct RealizeOptions {
    int jobs = 1;
    /// Stop after this many candidate multisets (0 = no limit).
    std::uint64_t max_candidates = 0;
};

struct RealizeResult {
    std::optional<WqcInstance> instance;
    std::uint64_t profiles = 0;    // concrete triple assignments consistent with the rules
    std::uint64_t candidates = 0;  // multisets matching a profile that were checked
};

/// First multiset (profiles in lexicographic order, then multiplicity vectors
/// over the enumeration order in lexicographic order) meeting every rule.
RealizeResult realize_profile(const ProfileSpec& spec, const RealizeOptions& options = {});

struct SearchOptions {
    int jobs = 1;
    /// Instances checked before the random trials.
    std::vector<WqcInstance> pool;
};

/// Falsifying reports for one conjecture over the pool and `trials` seeded
/// random instances of k trees on n taxa, in that order.
std::vector<ConjectureReport> search_counterexamples(int conjecture, int n, int k, int trials, std::uint64_t seed,
                                                     const SearchOptions& options = {});

nlohmann::json instance_json(const WqcInstance& inst);

} // namespace wqc
