#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wqc/quartets.hpp"

namespace wqc {

/// One topology per quadset, indexed by quadset rank.
struct CompleteQuartetSet {
    TaxaPtr taxa;
    std::vector<std::uint8_t> choice;

    static CompleteQuartetSet of_tree(const Tree& t);
};

/// Labels (a,b,c,d,e) with ab|cd chosen but neither ab|ce nor ae|cd.
struct Violation {
    int a, b, c, d, e;
};

/// Checks every 5-set in lexicographic order and reports the first one that
/// violates "ab|cd implies ab|ce or ae|cd".
std::optional<Violation> find_violation(const CompleteQuartetSet& q);
inline bool is_compatible(const CompleteQuartetSet& q) { return !find_violation(q); }

/// The binary tree displaying exactly q. Throws Error when q is incompatible.
Tree tree_from_complete_compatible_set(const CompleteQuartetSet& q);

struct Budget {
    std::int64_t d_strict = 0;  // replacements on quadsets with one dominant topology
    std::int64_t k2 = 0;        // ... with two
    std::int64_t k3 = 0;        // ... with three

    std::int64_t& for_class(int dominant_count);
};

struct DominantSeed {
    CompleteQuartetSet set;
    std::vector<std::uint8_t> dominant_count;  // 1, 2 or 3 per quadset
};

/// Dominant topology of every quadset, ties to the lowest index.
DominantSeed dominant_seed(const QuartetTable& table);

struct FptSolution {
    CompleteQuartetSet set;
    Tree tree;
    std::string newick;
    std::int64_t weight;
};

struct FptResult {
    /// Heaviest first, then by canonical Newick.
    std::vector<FptSolution> solutions;
    std::uint64_t branches_explored = 0;

    const FptSolution* best() const { return solutions.empty() ? nullptr : &solutions.front(); }
};

/// One replacement on the current search path.
struct FptStep {
    std::size_t rank;
    std::uint8_t from;
    std::uint8_t to;
    int depth;  // replacements on the path including this one
    const std::vector<char>* locked;  // before this replacement
};

/// Branches four ways on each violation starting from the dominant seed.
/// Replaced quadsets are locked; a replacement costs one unit of the budget
/// matching the quadset's dominance class.
FptResult solve_fpt(const QuartetTable& table, const Budget& budget, const std::function<void(const FptStep&)>& on_step = {});

} // namespace wqc
