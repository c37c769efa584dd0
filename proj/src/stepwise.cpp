#include "wqc/stepwise.hpp"

#include <algorithm>

#include "wqc/error.hpp"

namespace wqc {

namespace {
constexpr std::int64_t kBaseWeight = std::int64_t{1} << 50;
}

std::uint64_t topology_count(int n) {
    std::uint64_t out = 1;
    for (int j = 2 * n - 5; j > 1; j -= 2) out *= static_cast<std::uint64_t>(j);
    return out;
}

StepwiseTree::StepwiseTree(int leaf_count) : leaf_count_(leaf_count), next_internal_(leaf_count) {
    if (leaf_count < 3) throw Error("stepwise construction needs at least three taxa");
    if (leaf_count > kMaxLeaves) throw CapacityError("stepwise construction supports at most " + std::to_string(kMaxLeaves) + " taxa");
    stride_ = 2 * leaf_count - 2;
    dist_.assign(static_cast<std::size_t>(stride_ * stride_), 0);
    const int center = next_internal_++;
    for (int leaf = 0; leaf < 3; ++leaf) {
        edges_.push_back({center, leaf, kBaseWeight});
        dist(center, leaf) = dist(leaf, center) = kBaseWeight;
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) dist(a, b) = 2 * kBaseWeight;
}

void StepwiseTree::insert(int edge) {
    if (complete()) throw Error("all leaves already placed");
    if (edge < 0 || edge >= edge_count()) throw Error("edge index out of range");
    Edge& e = edges_[static_cast<std::size_t>(edge)];
    if (e.weight < 2) throw CapacityError("edge subdivided too often");
    const int x = next_internal_++;
    const int leaf = placed_++;
    const std::int64_t half = e.weight / 2;

    // x is the midpoint of (u, v): its distance to any node is the nearer
    // endpoint's distance plus half the edge.
    for (int y = 0; y < x; ++y) {
        if (y >= leaf && y < leaf_count_) continue;  // unplaced leaves
        const std::int64_t d = std::min(dist(e.u, y), dist(e.v, y)) + half;
        dist(x, y) = dist(y, x) = d;
        dist(leaf, y) = dist(y, leaf) = d + kBaseWeight;
    }
    dist(x, x) = 0;
    dist(leaf, leaf) = 0;
    dist(x, leaf) = dist(leaf, x) = kBaseWeight;

    const int v = e.v;
    e.v = x;
    e.weight = half;
    edges_.push_back({x, v, half});
    edges_.push_back({x, leaf, kBaseWeight});
    history_.push_back(static_cast<std::uint8_t>(edge));
}

void StepwiseTree::undo() {
    if (history_.empty()) throw Error("nothing to undo");
    const int edge = history_.back();
    history_.pop_back();
    edges_.pop_back();
    const Edge tail = edges_.back();
    edges_.pop_back();
    Edge& e = edges_[static_cast<std::size_t>(edge)];
    e.v = tail.v;
    e.weight = tail.weight * 2;
    --placed_;
    --next_internal_;
}

int StepwiseTree::quartet_topology(int a, int b, int c, int d) const {
    const std::int64_t s0 = dist(a, b) + dist(c, d);
    const std::int64_t s1 = dist(a, c) + dist(b, d);
    const std::int64_t s2 = dist(a, d) + dist(b, c);
    if (s0 < s1 && s0 < s2) return 0;
    if (s1 < s2) return 1;
    return 2;
}

Tree StepwiseTree::to_tree(TaxaPtr taxa) const {
    if (!complete()) throw Error("topology is incomplete");
    if (!taxa || taxa->size() != leaf_count_) throw LabelError("taxon set size does not match the topology");
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(next_internal_));
    for (const Edge& e : edges_) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    return Tree(std::move(taxa), std::move(adj));
}

StepwiseTree replay(int leaf_count, const std::vector<std::uint8_t>& history) {
    StepwiseTree t(leaf_count);
    for (auto e : history) t.insert(e);
    return t;
}

namespace {
void grow(StepwiseTree& t, const std::function<void(const StepwiseTree&)>& visit) {
    if (t.complete()) {
        visit(t);
        return;
    }
    const int edges = t.edge_count();
    for (int e = 0; e < edges; ++e) {
        t.insert(e);
        grow(t, visit);
        t.undo();
    }
}
} // namespace

void for_each_topology(int leaf_count, const std::function<void(const StepwiseTree&)>& visit) {
    StepwiseTree t(leaf_count);
    grow(t, visit);
}

std::vector<Tree> enumerate_topologies(const TaxaPtr& taxa, int cap) {
    const int n = taxa->size();
    if (n < 4) throw Error("enumeration needs at least four taxa");
    if (n > cap) throw CapacityError("enumeration of " + std::to_string(n) + " taxa exceeds the cap of " + std::to_string(cap));
    std::vector<Tree> out;
    out.reserve(static_cast<std::size_t>(topology_count(n)));
    for_each_topology(n, [&](const StepwiseTree& t) { out.push_back(t.to_tree(taxa)); });
    return out;
}

} // namespace wqc
