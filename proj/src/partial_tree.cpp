#include "wqc/partial_tree.hpp"

#include <algorithm>
#include <deque>

#include "wqc/error.hpp"

namespace wqc {

PartialTree::PartialTree(int leaf_count) : leaf_count_(leaf_count) {
    if (leaf_count < 3) throw Error("a partial tree needs at least three leaves");
    parent_.assign(static_cast<std::size_t>(leaf_count) + 1, leaf_count);
    parent_.back() = -1;
    children_.resize(parent_.size());
    for (int leaf = 0; leaf < leaf_count; ++leaf) children_.back().push_back(leaf);
}

int PartialTree::add_node(int parent) {
    const int id = node_count();
    parent_.push_back(parent);
    children_.emplace_back();
    children_[static_cast<std::size_t>(parent)].push_back(id);
    return id;
}

std::span<const int> PartialTree::pending() const {
    if (!split_) return {};
    return std::span<const int>(split_->members).subspan(split_->next);
}

bool PartialTree::is_pending(int leaf) const {
    const auto p = pending();
    return std::find(p.begin(), p.end(), leaf) != p.end();
}

std::optional<int> PartialTree::next_multifurcation() const {
    std::deque<int> queue{root()};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        const auto& kids = children(v);
        if (kids.size() > 2) return v;
        for (int c : kids) queue.push_back(c);
    }
    return std::nullopt;
}

void PartialTree::begin_split(int v) {
    if (split_) throw Error("a split is already in progress");
    auto& kids = children_.at(static_cast<std::size_t>(v));
    if (kids.size() <= 2) throw Error("only a multifurcation can be split");
    Split s;
    s.v = v;
    s.members = std::move(kids);
    kids.clear();
    for (int leaf : s.members) parent_[static_cast<std::size_t>(leaf)] = -1;
    s.x = add_node(v);
    s.y = add_node(v);
    split_ = std::move(s);
}

void PartialTree::place_next(Side side) {
    if (!split_) throw Error("no split in progress");
    const int leaf = split_->members[split_->next++];
    const int target = side_node(side);
    parent_[static_cast<std::size_t>(leaf)] = target;
    children_[static_cast<std::size_t>(target)].push_back(leaf);
    if (split_->next == split_->members.size()) split_.reset();
}

Tree PartialTree::to_tree(TaxaPtr taxa) const {
    if (!binary()) throw Error("the partial tree is not binary yet");
    if (!taxa || taxa->size() != leaf_count_) throw LabelError("taxon set size does not match the partial tree");
    // Drop childless internal nodes, then splice out nodes of degree two.
    const int nodes = node_count();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (int v = 0; v < nodes; ++v)
        if (parent(v) >= 0) {
            adj[static_cast<std::size_t>(v)].push_back(parent(v));
            adj[static_cast<std::size_t>(parent(v))].push_back(v);
        }
    std::vector<char> alive(static_cast<std::size_t>(nodes), 1);
    auto unlink = [&](int a, int b) {
        auto& la = adj[static_cast<std::size_t>(a)];
        la.erase(std::find(la.begin(), la.end(), b));
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = leaf_count_; v < nodes; ++v) {
            if (!alive[static_cast<std::size_t>(v)]) continue;
            auto& nb = adj[static_cast<std::size_t>(v)];
            if (nb.size() <= 1) {
                for (int u : nb) unlink(u, v);
                nb.clear();
                alive[static_cast<std::size_t>(v)] = 0;
                changed = true;
            } else if (nb.size() == 2) {
                const int a = nb[0];
                const int b = nb[1];
                unlink(a, v);
                unlink(b, v);
                adj[static_cast<std::size_t>(a)].push_back(b);
                adj[static_cast<std::size_t>(b)].push_back(a);
                nb.clear();
                alive[static_cast<std::size_t>(v)] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> id(static_cast<std::size_t>(nodes), -1);
    int next = 0;
    for (int v = 0; v < nodes; ++v)
        if (alive[static_cast<std::size_t>(v)]) id[static_cast<std::size_t>(v)] = next++;
    std::vector<std::vector<int>> out(static_cast<std::size_t>(next));
    for (int v = 0; v < nodes; ++v)
        for (int u : adj[static_cast<std::size_t>(v)]) out[static_cast<std::size_t>(id[static_cast<std::size_t>(v)])].push_back(id[static_cast<std::size_t>(u)]);
    return Tree(std::move(taxa), std::move(out));
}

namespace {

/// Node path from a leaf to the root under an effective parent for the leaf.
std::vector<int> ancestry(const PartialTree& pt, int leaf, int leaf_parent) {
    std::vector<int> out{leaf};
    for (int v = leaf_parent; v >= 0; v = pt.parent(v)) out.push_back(v);
    return out;
}

int lowest_common(const std::vector<int>& a, const std::vector<int>& b) {
    for (int v : a)
        if (std::find(b.begin(), b.end(), v) != b.end()) return v;
    return -1;
}

int lowest_common(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& c) {
    for (int v : a)
        if (std::find(b.begin(), b.end(), v) != b.end() && std::find(c.begin(), c.end(), v) != c.end()) return v;
    return -1;
}

} // namespace

std::array<Prob48, 3> completion_distribution(const PartialTree& pt, std::span<const Placement> placements, const Quadset& q) {
    std::array<int, 4> fixed_parent{};
    std::array<int, 4> free_slot{};
    int free_count = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const int leaf = q[i];
        free_slot[i] = -1;
        if (!pt.is_pending(leaf)) {
            fixed_parent[i] = pt.parent(leaf);
            continue;
        }
        auto it = std::find_if(placements.begin(), placements.end(), [&](const Placement& p) { return p.leaf == leaf; });
        if (it != placements.end())
            fixed_parent[i] = pt.side_node(it->side);
        else
            free_slot[i] = free_count++;
    }

    std::array<Prob48, 3> out{};
    const std::int64_t unit = Prob48::kDenominator >> free_count;  // one placement, certain outcome
    for (int mask = 0; mask < (1 << free_count); ++mask) {
        std::array<std::vector<int>, 4> chain;
        for (std::size_t i = 0; i < 4; ++i) {
            int p = fixed_parent[i];
            if (free_slot[i] >= 0) p = pt.side_node((mask >> free_slot[i]) & 1 ? Side::y : Side::x);
            chain[i] = ancestry(pt, q[i], p);
        }
        auto lca = [&](std::size_t i, std::size_t j) { return lowest_common(chain[i], chain[j]); };

        // Top node of the restriction: the LCA of all four leaves.
        int top = -1;
        for (int v : chain[0]) {
            bool shared = true;
            for (std::size_t i = 1; i < 4; ++i) shared = shared && std::find(chain[i].begin(), chain[i].end(), v) != chain[i].end();
            if (shared) {
                top = v;
                break;
            }
        }
        // Positions grouped by the child of `top` they descend from.
        std::array<int, 4> group{-1, -1, -1, -1};
        int groups = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            if (group[i] >= 0) continue;
            group[i] = groups;
            for (std::size_t j = i + 1; j < 4; ++j)
                if (group[j] < 0 && lca(i, j) != top) group[j] = groups;
            ++groups;
        }
        std::array<int, 4> size{};
        for (int g : group) ++size[static_cast<std::size_t>(g)];

        if (groups == 4) {
            for (auto& p : out) p.numerator += unit / 3;
        } else if (groups == 2 && size[0] == 2) {
            for (int j = 1; j < 4; ++j)
                if (group[static_cast<std::size_t>(j)] == group[0]) out[static_cast<std::size_t>(topology_pairing(0, j))].numerator += unit;
        } else if (groups == 2) {
            const int lone_group = size[0] == 1 ? 0 : 1;
            int lone = 0;
            std::vector<int> rest;
            for (int i = 0; i < 4; ++i) {
                if (group[static_cast<std::size_t>(i)] == lone_group)
                    lone = i;
                else
                    rest.push_back(i);
            }
            const int sub = lowest_common(chain[static_cast<std::size_t>(rest[0])], chain[static_cast<std::size_t>(rest[1])],
                                          chain[static_cast<std::size_t>(rest[2])]);
            int cherry_out = -1;  // member of rest outside the cherry
            for (int i = 0; i < 3; ++i) {
                const int a = rest[static_cast<std::size_t>(i)];
                const int b = rest[static_cast<std::size_t>((i + 1) % 3)];
                if (lowest_common(chain[static_cast<std::size_t>(a)], chain[static_cast<std::size_t>(b)]) != sub)
                    cherry_out = rest[static_cast<std::size_t>((i + 2) % 3)];
            }
            if (cherry_out >= 0) {
                out[static_cast<std::size_t>(topology_pairing(lone, cherry_out))].numerator += unit;
            } else {
                for (int r : rest) out[static_cast<std::size_t>(topology_pairing(lone, r))].numerator += unit / 3;
            }
        } else {
            throw Error("partial tree is not internally binary");
        }
    }
    return out;
}

Prob48 completion_probability(const PartialTree& pt, std::span<const Placement> placements, const Quartet& q) {
    return completion_distribution(pt, placements, q.taxa)[static_cast<std::size_t>(q.topology)];
}

Prob48 completion_probability(const PartialTree& pt, const Quartet& q) {
    return completion_probability(pt, {}, q);
}

std::int64_t expected_score_times_48(const QuartetTable& table, const PartialTree& pt) {
    if (table.taxon_count() != pt.leaf_count()) throw LabelError("table and partial tree disagree on the taxon count");
    std::int64_t total = 0;
    for (std::size_t r = 0; r < table.size(); ++r) {
        const auto dist = completion_distribution(pt, {}, quadset_unrank(r));
        const auto& f = table.counts(r);
        for (std::size_t t = 0; t < 3; ++t) total += f[t] * dist[t].numerator;
    }
    return total;
}

} // namespace wqc
