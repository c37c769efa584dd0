#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "wqc/instance.hpp"
#include "wqc/partial_tree.hpp"
#include "wqc/quartets.hpp"

namespace wqc {

enum class ApproxMethod { best_tree, derandomized, combined };

std::string method_name(ApproxMethod m);

struct ApproxResult {
    Tree tree;
    std::int64_t wqc_score = 0;
    std::int64_t wmqi_cost = 0;  // k * C(n,4) - wqc_score
    ApproxMethod method = ApproxMethod::best_tree;
};

/// The input tree minimizing the weighted quartet distance to all inputs;
/// ties go to the smaller canonical Newick string.
ApproxResult best_input_tree(const WqcInstance& inst, int jobs = 1);

/// One reinsertion decision of the derandomizer. The expectations are
/// 48 times the weighted sum over the decision-relevant quadsets only.
struct DerandomizerStep {
    int split_node;
    int leaf;
    std::int64_t expectation_x;
    std::int64_t expectation_y;
    Side chosen;
    /// Last child with y still empty: y is taken regardless of the sums.
    bool forced;
};

/// Called after every decision with the updated state.
using DerandomizerObserver = std::function<void(const PartialTree&, const DerandomizerStep&)>;

/// Deterministic tree with score at least k * C(n,4) / 3.
ApproxResult derandomized_one_third(const QuartetTable& table, const DerandomizerObserver& observer = {});
ApproxResult derandomized_one_third(const WqcInstance& inst, const DerandomizerObserver& observer = {});

/// The better of best_input_tree and derandomized_one_third (ties keep the
/// input tree); at least half the optimum.
ApproxResult half_approximation(const WqcInstance& inst, int jobs = 1);

} // namespace wqc
