#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wqc/tree.hpp"

namespace wqc {

/// Default cap on the number of taxa for exhaustive enumeration.
inline constexpr int kDefaultEnumerationCap = 10;

/// (2n-5)!!, the number of unrooted binary topologies on n >= 3 taxa.
std::uint64_t topology_count(int n);

/// Unrooted binary tree grown by inserting leaves 3, 4, ... into edges of the
/// three-leaf star. Leaf i is node i; internal nodes follow the leaves.
///
/// Edges carry weights chosen so that subdividing an edge leaves every
/// existing node-to-node distance unchanged; quartet topologies of placed
/// leaves can then be read off with the four-point condition at any time.
class StepwiseTree {
public:
    /// Supports up to kMaxLeaves taxa; more would exhaust the halving budget.
    static constexpr int kMaxLeaves = 48;

    explicit StepwiseTree(int leaf_count);

    int leaf_count() const noexcept { return leaf_count_; }
    int placed() const noexcept { return placed_; }
    bool complete() const noexcept { return placed_ == leaf_count_; }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

    /// Inserts leaf `placed()` on the given edge.
    void insert(int edge);
    /// Reverts the latest insertion.
    void undo();

    /// 0 for ab|cd, 1 for ac|bd, 2 for ad|bc. Labels are placed leaves, a<b<c<d.
    int quartet_topology(int a, int b, int c, int d) const;

    /// Edge choice made at every insertion so far.
    const std::vector<std::uint8_t>& history() const noexcept { return history_; }

    Tree to_tree(TaxaPtr taxa) const;

private:
    std::int64_t& dist(int u, int v) { return dist_[static_cast<std::size_t>(u * stride_ + v)]; }
    std::int64_t dist(int u, int v) const { return dist_[static_cast<std::size_t>(u * stride_ + v)]; }

    struct Edge {
        int u, v;
        std::int64_t weight;
    };

    int leaf_count_;
    int placed_ = 3;
    int next_internal_;
    int stride_;
    std::vector<Edge> edges_;
    std::vector<std::int64_t> dist_;
    std::vector<std::uint8_t> history_;
};

/// Rebuilds a topology from its insertion history.
StepwiseTree replay(int leaf_count, const std::vector<std::uint8_t>& history);

/// Visits every unrooted binary topology on `leaf_count` taxa once, in a fixed
/// order (leaf i tried on edges 0..2i-4 in turn).
void for_each_topology(int leaf_count, const std::function<void(const StepwiseTree&)>& visit);

/// Materializes every topology on `taxa`. Throws CapacityError above `cap`.
std::vector<Tree> enumerate_topologies(const TaxaPtr& taxa, int cap = kDefaultEnumerationCap);

} // namespace wqc
