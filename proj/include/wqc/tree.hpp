#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wqc/taxa.hpp"

namespace wqc {

/// Leaf-labeled tree with dense integer node ids.
///
/// Nodes 0..n-1 are the leaves and node i carries taxon i, so the leaf map is
/// the identity on ids. Internal nodes follow. An unrooted tree has no
/// degree-2 node; a rooted tree may have one, the root. A rooted tree on a
/// single taxon consists of that leaf alone.
class Tree {
public:
    /// Validates shape and throws Error when the adjacency is not a tree of
    /// the expected form.
    Tree(TaxaPtr taxa, std::vector<std::vector<int>> adjacency, std::optional<int> root = std::nullopt);

    const TaxonSet& taxa() const noexcept { return *taxa_; }
    const TaxaPtr& taxa_ptr() const noexcept { return taxa_; }

    int leaf_count() const noexcept { return taxa_->size(); }
    int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
    bool is_leaf(int node) const noexcept { return node < leaf_count(); }
    const std::vector<int>& neighbors(int node) const { return adjacency_.at(static_cast<std::size_t>(node)); }
    int degree(int node) const { return static_cast<int>(neighbors(node).size()); }

    bool rooted() const noexcept { return root_ >= 0; }
    /// -1 for unrooted trees.
    int root() const noexcept { return root_; }

    /// Unrooted: internal nodes all have degree 3. Rooted: the root has two
    /// children and every other internal node has degree 3.
    bool is_binary() const;

    std::vector<std::pair<int, int>> edges() const;

private:
    TaxaPtr taxa_;
    std::vector<std::vector<int>> adjacency_;
    int root_ = -1;
};

/// Parent pointers and a preorder of a tree hung from `root`.
struct Rooting {
    std::vector<int> parent;  // -1 at the root
    std::vector<int> preorder;
};
Rooting hang(const Tree& t, int root);

struct NewickOptions {
    /// When set, the leaf labels must equal this set exactly.
    TaxaPtr taxa;
    bool require_binary = true;
    /// Keep the top node as the root instead of suppressing it.
    bool rooted = false;
};

/// Parses one Newick expression terminated by ';'. Branch lengths, internal
/// labels and bracket comments are accepted and discarded.
Tree parse_newick(std::string_view text, const NewickOptions& options = {});

/// Canonical Newick: unrooted trees are written from the node adjacent to the
/// first taxon (trifurcating convention), children ordered by the smallest
/// taxon they contain. Isomorphic trees give identical strings.
std::string to_newick(const Tree& t);

/// Label-preserving isomorphism.
bool isomorphic(const Tree& a, const Tree& b);

/// Bipartitions of every edge, each given as the side without taxon 0, sorted.
std::vector<std::vector<bool>> splits(const Tree& t);

/// T|Y: minimal subtree connecting `keep` (taxon indices of t) with degree-2
/// nodes contracted. The result is unrooted and its taxa keep t's order.
Tree restrict(const Tree& t, std::span<const int> keep);
Tree restrict(const Tree& t, const std::vector<std::string>& labels);

/// Rooted single-leaf tree, used as a caterpillar piece.
Tree leaf_tree(const std::string& label);

/// Rooted caterpillar of the given labels: ((l1,l2),l3)...
Tree rooted_caterpillar(const std::vector<std::string>& labels);

/// (T_1 | T_2 | ... | T_k): the (T_1, T_k)-augmented caterpillar whose spine
/// carries the pieces in order. Pieces are rooted trees with disjoint leaf
/// sets. Taxa default to the concatenation of the pieces' taxa.
Tree build_caterpillar(std::span<const Tree> pieces, TaxaPtr taxa = nullptr);

/// Suppresses the root of a rooted tree.
Tree unroot(const Tree& t);

/// True iff t has rooted subtrees with leaf sets exactly `w` and exactly `z`
/// (taxon indices), which then sit at the two ends of the spine between them.
bool is_wz_augmented_caterpillar(const Tree& t, std::span<const int> w, std::span<const int> z);

} // namespace wqc
