#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wqc/quartets.hpp"
#include "wqc/stepwise.hpp"

namespace wqc {

struct ExactOptions {
    int jobs = 1;
    int cap = kDefaultEnumerationCap;
    /// Optimal trees materialized in `optima`; optima_count is always exact.
    std::size_t max_optima = 10000;
};

struct ExactResult {
    std::int64_t optimum_score = 0;  // p
    std::int64_t optimum_cost = 0;   // d = N - p
    std::int64_t quartet_total = 0;  // N
    /// Sorted by canonical Newick. Holds the optima first met in enumeration
    /// order when more than max_optima exist.
    std::vector<Tree> optima;
    std::uint64_t optima_count = 0;
    std::uint64_t evaluated_count = 0;

    bool optima_truncated() const { return optima.size() < optima_count; }
};

ExactResult solve_exact(const QuartetTable& table, const ExactOptions& options = {});

/// A tree scoring at least `threshold` (the first one in enumeration order),
/// or none when the optimum is below it.
std::optional<Tree> decide(const QuartetTable& table, std::int64_t threshold, int cap = kDefaultEnumerationCap);

/// Score of every quadset through the newest leaf, summed: the gain of the
/// latest insertion.
std::int64_t insertion_gain(const QuartetTable& table, const StepwiseTree& t);

} // namespace wqc
