#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wqc/quartets.hpp"

namespace wqc {

enum class Side : std::uint8_t { x, y };

/// Exact probability with the fixed denominator 48 = 2^4 * 3: at most four
/// pending leaves choose a side and at most one multifurcation is resolved
/// on a quadset.
struct Prob48 {
    static constexpr std::int64_t kDenominator = 48;
    std::int64_t numerator = 0;

    friend bool operator==(const Prob48&, const Prob48&) = default;
    double value() const { return static_cast<double>(numerator) / kDenominator; }
};

/// Rooted, internally binary tree: a node with more than two children has
/// only leaf children. Leaves are nodes 0..n-1 and the root is node n.
///
/// While a multifurcation v is being split, v has the two fresh children x
/// and y, and the former children of v not yet reinserted are pending.
class PartialTree {
public:
    /// The star: one root whose children are all the leaves.
    explicit PartialTree(int leaf_count);

    int leaf_count() const noexcept { return leaf_count_; }
    int node_count() const noexcept { return static_cast<int>(parent_.size()); }
    int root() const noexcept { return leaf_count_; }
    /// -1 at the root and for pending leaves.
    int parent(int node) const { return parent_.at(static_cast<std::size_t>(node)); }
    const std::vector<int>& children(int node) const { return children_.at(static_cast<std::size_t>(node)); }

    bool splitting() const noexcept { return split_.has_value(); }
    int split_node() const { return split_->v; }
    int side_node(Side s) const { return s == Side::x ? split_->x : split_->y; }
    /// Former children of the split node, in processing order.
    const std::vector<int>& split_children() const { return split_->members; }
    /// Leaves still waiting for a side, in processing order.
    std::span<const int> pending() const;
    bool is_pending(int leaf) const;

    /// First node with more than two children in breadth-first order.
    std::optional<int> next_multifurcation() const;
    bool binary() const { return !splitting() && !next_multifurcation(); }

    /// Detaches the children of v (which must be a multifurcation) and gives
    /// v the two empty children x and y.
    void begin_split(int v);
    /// Reinserts the next pending leaf under the chosen side. The split ends
    /// once no leaf is pending.
    void place_next(Side side);

    /// Unrooted binary tree once binary() holds; unary nodes are contracted.
    Tree to_tree(TaxaPtr taxa) const;

private:
    struct Split {
        int v, x, y;
        std::vector<int> members;
        std::size_t next = 0;
    };

    int add_node(int parent);

    int leaf_count_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::optional<Split> split_;
};

/// A hypothetical side for a pending leaf.
struct Placement {
    int leaf;
    Side side;
};

/// Probability that the random completion displays quartet q: pending leaves
/// not fixed by `placements` pick x or y with probability 1/2 each, then every
/// multifurcation is replaced by a uniform random rooted binary tree.
Prob48 completion_probability(const PartialTree& pt, std::span<const Placement> placements, const Quartet& q);
Prob48 completion_probability(const PartialTree& pt, const Quartet& q);

/// The three topology probabilities of one quadset; they sum to 48/48.
std::array<Prob48, 3> completion_distribution(const PartialTree& pt, std::span<const Placement> placements, const Quadset& q);

/// E[I(T')] * 48 for the random completion of pt, weighted by the table.
std::int64_t expected_score_times_48(const QuartetTable& table, const PartialTree& pt);

} // namespace wqc
