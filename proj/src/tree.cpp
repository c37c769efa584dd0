#include "wqc/tree.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_set>

#include "wqc/error.hpp"

namespace wqc {

Tree::Tree(TaxaPtr taxa, std::vector<std::vector<int>> adjacency, std::optional<int> root)
    : taxa_(std::move(taxa)), adjacency_(std::move(adjacency)), root_(root.value_or(-1)) {
    if (!taxa_ || taxa_->size() == 0) throw Error("tree needs at least one taxon");
    const int n = taxa_->size();
    const int nodes = node_count();
    if (nodes < n) throw Error("fewer nodes than taxa");
    if (root_ >= nodes) throw Error("root out of range");
    if (n == 1) {
        if (nodes != 1 || root_ != 0) throw Error("single-taxon tree must be a rooted leaf");
        return;
    }
    if (rooted() && root_ < n) throw Error("root must be an internal node");

    std::size_t degree_sum = 0;
    for (int v = 0; v < nodes; ++v) {
        const auto& nb = adjacency_[static_cast<std::size_t>(v)];
        degree_sum += nb.size();
        for (int u : nb) {
            if (u < 0 || u >= nodes || u == v) throw Error("invalid edge endpoint");
            const auto& back = adjacency_[static_cast<std::size_t>(u)];
            if (std::count(back.begin(), back.end(), v) != 1) throw Error("adjacency is not symmetric");
        }
        if (v < n) {
            if (nb.size() != 1) throw Error("leaf '" + taxa_->label(v) + "' must have degree 1");
        } else if (v == root_) {
            if (nb.size() < 2) throw Error("root needs at least two children");
        } else if (nb.size() < 3) {
            throw Error("internal node of degree " + std::to_string(nb.size()));
        }
    }
    if (degree_sum != 2 * static_cast<std::size_t>(nodes - 1)) throw Error("edge count does not match a tree");

    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adjacency_[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    if (reached != nodes) throw Error("graph is not connected");
}

bool Tree::is_binary() const {
    for (int v = leaf_count(); v < node_count(); ++v) {
        const int want = (v == root_) ? 2 : 3;
        if (degree(v) != want) return false;
    }
    return true;
}

std::vector<std::pair<int, int>> Tree::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < node_count(); ++v)
        for (int u : neighbors(v))
            if (v < u) out.emplace_back(v, u);
    return out;
}

Rooting hang(const Tree& t, int root) {
    Rooting r;
    r.parent.assign(static_cast<std::size_t>(t.node_count()), -1);
    r.preorder.reserve(static_cast<std::size_t>(t.node_count()));
    std::vector<int> stack{root};
    std::vector<char> seen(static_cast<std::size_t>(t.node_count()), 0);
    seen[static_cast<std::size_t>(root)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        r.preorder.push_back(v);
        const auto& nb = t.neighbors(v);
        for (auto it = nb.rbegin(); it != nb.rend(); ++it) {
            if (seen[static_cast<std::size_t>(*it)]) continue;
            seen[static_cast<std::size_t>(*it)] = 1;
            r.parent[static_cast<std::size_t>(*it)] = v;
            stack.push_back(*it);
        }
    }
    return r;
}

bool isomorphic(const Tree& a, const Tree& b) {
    return a.taxa() == b.taxa() && a.rooted() == b.rooted() && to_newick(a) == to_newick(b);
}

namespace {

// Leaf sets below every node when hanging t from `root`, as bit vectors.
std::vector<std::vector<bool>> clusters_below(const Tree& t, const Rooting& r) {
    const auto n = static_cast<std::size_t>(t.leaf_count());
    std::vector<std::vector<bool>> below(static_cast<std::size_t>(t.node_count()), std::vector<bool>(n, false));
    for (auto it = r.preorder.rbegin(); it != r.preorder.rend(); ++it) {
        const int v = *it;
        auto& mine = below[static_cast<std::size_t>(v)];
        if (t.is_leaf(v)) mine[static_cast<std::size_t>(v)] = true;
        const int p = r.parent[static_cast<std::size_t>(v)];
        if (p >= 0) {
            auto& up = below[static_cast<std::size_t>(p)];
            for (std::size_t i = 0; i < n; ++i)
                if (mine[i]) up[i] = true;
        }
    }
    return below;
}

std::vector<bool> complement(std::vector<bool> s) {
    s.flip();
    return s;
}

} // namespace

std::vector<std::vector<bool>> splits(const Tree& t) {
    const Rooting r = hang(t, 0);
    auto below = clusters_below(t, r);
    std::vector<std::vector<bool>> out;
    for (int v = 0; v < t.node_count(); ++v)
        if (r.parent[static_cast<std::size_t>(v)] >= 0) out.push_back(std::move(below[static_cast<std::size_t>(v)]));
    std::sort(out.begin(), out.end());
    return out;
}

Tree restrict(const Tree& t, std::span<const int> keep) {
    const int n = t.leaf_count();
    if (keep.size() < 2) throw Error("restriction needs at least two taxa");
    std::vector<int> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw LabelError("duplicate taxon in restriction");
    if (sorted.front() < 0 || sorted.back() >= n) throw LabelError("restriction taxa are not leaves of the tree");

    std::vector<char> wanted(static_cast<std::size_t>(n), 0);
    for (int x : sorted) wanted[static_cast<std::size_t>(x)] = 1;

    const Rooting r = hang(t, sorted.front());
    std::vector<int> count(static_cast<std::size_t>(t.node_count()), 0);
    for (auto it = r.preorder.rbegin(); it != r.preorder.rend(); ++it) {
        const int v = *it;
        if (t.is_leaf(v) && wanted[static_cast<std::size_t>(v)]) count[static_cast<std::size_t>(v)] += 1;
        const int p = r.parent[static_cast<std::size_t>(v)];
        if (p >= 0) count[static_cast<std::size_t>(p)] += count[static_cast<std::size_t>(v)];
    }

    // Induced subgraph on kept nodes, then contraction of degree-2 nodes.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(t.node_count()));
    std::vector<char> alive(static_cast<std::size_t>(t.node_count()), 0);
    alive[static_cast<std::size_t>(sorted.front())] = 1;
    for (int v : r.preorder) {
        const int p = r.parent[static_cast<std::size_t>(v)];
        if (p < 0 || count[static_cast<std::size_t>(v)] == 0) continue;
        alive[static_cast<std::size_t>(v)] = 1;
        adj[static_cast<std::size_t>(v)].push_back(p);
        adj[static_cast<std::size_t>(p)].push_back(v);
    }
    for (int v = n; v < t.node_count(); ++v) {
        if (!alive[static_cast<std::size_t>(v)] || adj[static_cast<std::size_t>(v)].size() != 2) continue;
        const int a = adj[static_cast<std::size_t>(v)][0];
        const int b = adj[static_cast<std::size_t>(v)][1];
        std::replace(adj[static_cast<std::size_t>(a)].begin(), adj[static_cast<std::size_t>(a)].end(), v, b);
        std::replace(adj[static_cast<std::size_t>(b)].begin(), adj[static_cast<std::size_t>(b)].end(), v, a);
        adj[static_cast<std::size_t>(v)].clear();
        alive[static_cast<std::size_t>(v)] = 0;
    }

    std::vector<int> remap(static_cast<std::size_t>(t.node_count()), -1);
    std::vector<std::string> labels;
    int next = 0;
    for (int x : sorted) {
        remap[static_cast<std::size_t>(x)] = next++;
        labels.push_back(t.taxa().label(x));
    }
    for (int v = n; v < t.node_count(); ++v)
        if (alive[static_cast<std::size_t>(v)]) remap[static_cast<std::size_t>(v)] = next++;

    std::vector<std::vector<int>> out(static_cast<std::size_t>(next));
    for (int v = 0; v < t.node_count(); ++v) {
        const int nv = remap[static_cast<std::size_t>(v)];
        if (nv < 0) continue;
        for (int u : adj[static_cast<std::size_t>(v)]) out[static_cast<std::size_t>(nv)].push_back(remap[static_cast<std::size_t>(u)]);
    }
    return Tree(make_taxa(std::move(labels)), std::move(out));
}

Tree restrict(const Tree& t, const std::vector<std::string>& labels) {
    std::vector<int> keep;
    keep.reserve(labels.size());
    for (const auto& l : labels) keep.push_back(t.taxa().index(l));
    return restrict(t, keep);
}

Tree leaf_tree(const std::string& label) {
    return Tree(make_taxa({label}), {{}}, 0);
}

Tree rooted_caterpillar(const std::vector<std::string>& labels) {
    const int n = static_cast<int>(labels.size());
    if (n == 0) throw Error("rooted caterpillar needs at least one label");
    if (n == 1) return leaf_tree(labels.front());
    // Internal node n+j joins the first j+2 leaves; the last one is the root.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(2 * n - 1));
    auto link = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    };
    link(n, 0);
    link(n, 1);
    for (int j = 1; j + 1 < n; ++j) {
        link(n + j, n + j - 1);
        link(n + j, j + 1);
    }
    return Tree(make_taxa(labels), std::move(adj), 2 * n - 2);
}

Tree build_caterpillar(std::span<const Tree> pieces, TaxaPtr taxa) {
    const int k = static_cast<int>(pieces.size());
    if (k < 3) throw Error("caterpillar needs at least three pieces");
    std::vector<std::string> concat;
    std::unordered_set<std::string> seen;
    for (const Tree& p : pieces) {
        if (!p.rooted()) throw Error("caterpillar pieces must be rooted trees");
        for (const auto& l : p.taxa().labels()) {
            if (!seen.insert(l).second) throw LabelError("overlapping leaf sets at '" + l + "'");
            concat.push_back(l);
        }
    }
    if (!taxa) {
        taxa = make_taxa(concat);
    } else if (taxa->size() != static_cast<int>(concat.size())) {
        throw LabelError("caterpillar taxa do not match the pieces");
    }
    const int n = taxa->size();
    int next = n;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    auto new_node = [&]() {
        adj.emplace_back();
        return next++;
    };
    auto link = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    };

    std::vector<int> spine;
    for (int j = 0; j < k - 2; ++j) spine.push_back(new_node());
    for (int j = 0; j + 1 < k - 2; ++j) link(spine[static_cast<std::size_t>(j)], spine[static_cast<std::size_t>(j + 1)]);

    for (int i = 0; i < k; ++i) {
        const Tree& p = pieces[static_cast<std::size_t>(i)];
        std::vector<int> id(static_cast<std::size_t>(p.node_count()));
        for (int v = 0; v < p.node_count(); ++v)
            id[static_cast<std::size_t>(v)] = p.is_leaf(v) ? taxa->index(p.taxa().label(v)) : new_node();
        for (auto [a, b] : p.edges()) link(id[static_cast<std::size_t>(a)], id[static_cast<std::size_t>(b)]);
        const int anchor = spine[static_cast<std::size_t>(std::clamp(i - 1, 0, k - 3))];
        link(anchor, id[static_cast<std::size_t>(p.root())]);
    }
    return Tree(std::move(taxa), std::move(adj));
}

Tree unroot(const Tree& t) {
    if (!t.rooted()) return t;
    if (t.leaf_count() < 2) throw Error("cannot unroot a single-leaf tree");
    const int r = t.root();
    std::vector<std::vector<int>> adj;
    for (int v = 0; v < t.node_count(); ++v) adj.push_back(t.neighbors(v));
    if (t.degree(r) != 2) return Tree(t.taxa_ptr(), std::move(adj));

    const int a = adj[static_cast<std::size_t>(r)][0];
    const int b = adj[static_cast<std::size_t>(r)][1];
    std::replace(adj[static_cast<std::size_t>(a)].begin(), adj[static_cast<std::size_t>(a)].end(), r, b);
    std::replace(adj[static_cast<std::size_t>(b)].begin(), adj[static_cast<std::size_t>(b)].end(), r, a);
    // Move the last node into the root's slot to keep ids dense.
    const int last = static_cast<int>(adj.size()) - 1;
    if (r != last) {
        adj[static_cast<std::size_t>(r)] = adj[static_cast<std::size_t>(last)];
        for (int u : adj[static_cast<std::size_t>(r)])
            std::replace(adj[static_cast<std::size_t>(u)].begin(), adj[static_cast<std::size_t>(u)].end(), last, r);
    }
    adj.pop_back();
    return Tree(t.taxa_ptr(), std::move(adj));
}

bool is_wz_augmented_caterpillar(const Tree& t, std::span<const int> w, std::span<const int> z) {
    const auto n = static_cast<std::size_t>(t.leaf_count());
    auto as_set = [&](std::span<const int> xs) {
        std::vector<bool> s(n, false);
        for (int x : xs) {
            if (x < 0 || static_cast<std::size_t>(x) >= n) throw LabelError("label set is not a subset of the tree's leaves");
            s[static_cast<std::size_t>(x)] = true;
        }
        return s;
    };
    const auto ws = as_set(w);
    const auto zs = as_set(z);
    bool found_w = false;
    bool found_z = false;
    for (const auto& s : splits(t)) {
        const auto other = complement(s);
        found_w = found_w || s == ws || other == ws;
        found_z = found_z || s == zs || other == zs;
    }
    return found_w && found_z;
}

} // namespace wqc
