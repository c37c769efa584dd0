#include <doctest.h>

#include "support.hpp"
#include "wqc/error.hpp"

using namespace wqc;
using namespace wqc::testing;

namespace {

std::vector<std::vector<bool>> sorted_splits(const Tree& t) {
    auto s = splits(t);
    std::sort(s.begin(), s.end());
    return s;
}

/// Oracle: a leaf set is a rooted subtree iff some edge cuts it off.
bool is_cluster(const Tree& t, const std::vector<int>& leaves) {
    std::vector<bool> side(static_cast<std::size_t>(t.leaf_count()), false);
    for (int x : leaves) side[static_cast<std::size_t>(x)] = true;
    std::vector<bool> other = side;
    other.flip();
    for (const auto& s : splits(t))
        if (s == side || s == other) return true;
    return false;
}

} // namespace

TEST_SUITE("tree") {

TEST_CASE("two quartet trees in both conventions are the same tree") {
    const Tree nested = tree("((a,b),(c,d));");
    const Tree flat = tree("(a,b,(c,d));");
    CHECK(nested.leaf_count() == 4);
    CHECK(nested.is_binary());
    CHECK_FALSE(nested.rooted());
    CHECK(four_leaf_topology(nested) == 0);
    CHECK(isomorphic(nested, flat));
    CHECK(to_newick(nested) == "(a,b,(c,d));");
}

TEST_CASE("malformed newick reports a position") {
    CHECK_THROWS_AS(tree("((a,b),(c,d)"), NewickError);
    CHECK_THROWS_AS(tree("((a,b),(c,d));x"), NewickError);
    CHECK_THROWS_AS(tree("((a,a),(c,d));"), Error);
    CHECK_THROWS_AS(tree("(a,b,c,d);"), Error);
    try {
        tree("((a,b),(c,d)");
        FAIL("expected a syntax error");
    } catch (const NewickError& e) {
        CHECK(e.position() > 0);
    }
}

TEST_CASE("labels must match a supplied taxon set") {
    const auto taxa = taxa_of(4);
    CHECK_NOTHROW(tree("((a,b),(c,d));", taxa));
    CHECK_THROWS_AS(tree("((a,b),(c,x));", taxa), LabelError);
    CHECK_THROWS_AS(tree("((a,b),c);", taxa), Error);
}

TEST_CASE("branch lengths, internal labels and comments are ignored") {
    const Tree t = tree("((a:1.5,b:2)x:0.1,[note](c,d)y);");
    CHECK(to_newick(t) == "(a,b,(c,d));");
}

TEST_CASE("canonical newick round-trips every six-leaf topology") {
    const auto taxa = taxa_of(6);
    std::set<std::string> seen;
    for (const auto& t : enumerate_topologies(taxa)) {
        const auto s = to_newick(t);
        const Tree back = tree(s, taxa);
        CHECK(isomorphic(back, t));
        CHECK(to_newick(back) == s);
        seen.insert(s);
    }
    CHECK(seen.size() == 105);
}

TEST_CASE("isomorphic five-leaf trees serialize identically") {
    // Oracle: equal split sets; shuffled child orders give the same canonical string.
    const auto taxa = taxa_of(5);
    const auto all = enumerate_topologies(taxa);
    REQUIRE(all.size() == 15);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) {
            const bool same = sorted_splits(all[i]) == sorted_splits(all[j]);
            CHECK(isomorphic(all[i], all[j]) == same);
            CHECK((to_newick(all[i]) == to_newick(all[j])) == same);
        }
    const auto five = taxa_of(5);
    CHECK(to_newick(tree("(e,(d,c),(b,a));", five)) == to_newick(tree("((a,b),(c,d),e);", five)));
}

TEST_CASE("topology counts follow the double factorial") {
    for (int n = 4; n <= 8; ++n) {
        std::set<std::string> seen;
        for (const auto& t : enumerate_topologies(taxa_of(n))) seen.insert(to_newick(t));
        CHECK(seen.size() == topology_count(n));
    }
    CHECK(topology_count(4) == 3);
    CHECK(topology_count(5) == 15);
    CHECK(topology_count(8) == 10395);
    CHECK_THROWS_AS(enumerate_topologies(taxa_of(11)), CapacityError);
}

TEST_CASE("restriction") {
    const Tree cat = tree("((((a,b),c),d),e);");
    const Tree r = restrict(cat, std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(to_newick(r) == "(a,b,(c,d));");
    CHECK(isomorphic(restrict(cat, std::vector<std::string>{"a", "b", "c", "d", "e"}), cat));

    const auto taxa = taxa_of(6);
    for (const auto& t : enumerate_topologies(taxa)) {
        const auto topo = quartet_topologies(t);
        for (const auto& q : lexicographic_quadsets(6)) CHECK(restricted_topology(t, q) == topo[quadset_rank(q)]);
    }
}

TEST_CASE("caterpillars") {
    const Tree four = build_caterpillar(std::vector<Tree>{leaf_tree("a"), leaf_tree("b"), leaf_tree("c"), leaf_tree("d")});
    CHECK(to_newick(four) == "(a,b,(c,d));");

    const Tree w = rooted_caterpillar({"w1", "w2"});
    const Tree z = rooted_caterpillar({"z1", "z2"});
    const Tree wz = build_caterpillar(std::vector<Tree>{w, leaf_tree("a"), leaf_tree("b"), z});
    CHECK(wz.leaf_count() == 6);
    CHECK(wz.is_binary());
    const auto& labels = wz.taxa();
    const std::vector<int> wl{labels.index("w1"), labels.index("w2")};
    const std::vector<int> zl{labels.index("z1"), labels.index("z2")};
    CHECK(is_cluster(wz, wl));
    CHECK(is_wz_augmented_caterpillar(wz, wl, zl));

    const Tree wbig = rooted_caterpillar({"w1", "w2"});
    const Tree eight = build_caterpillar(std::vector<Tree>{wbig, leaf_tree("a"), leaf_tree("b"), leaf_tree("c"), leaf_tree("d"), z});
    CHECK(eight.leaf_count() == 8);

    const Tree reversed = build_caterpillar(std::vector<Tree>{z, leaf_tree("b"), leaf_tree("a"), w}, wz.taxa_ptr());
    CHECK(isomorphic(reversed, wz));

    const Tree mixed = tree("((w1,z1),a,(b,(w2,z2)));", wz.taxa_ptr());
    CHECK_FALSE(is_wz_augmented_caterpillar(mixed, wl, zl));
}

TEST_CASE("augmented caterpillar test agrees with a rooted-subtree search") {
    const auto taxa = make_taxa({"a", "b", "w1", "w2", "z1", "z2"});
    const std::vector<int> wl{2, 3};
    const std::vector<int> zl{4, 5};
    int positive = 0;
    for (const auto& t : enumerate_topologies(taxa)) {
        const bool expected = is_cluster(t, wl) && is_cluster(t, zl);
        CHECK(is_wz_augmented_caterpillar(t, wl, zl) == expected);
        positive += expected;
    }
    // W and Z are cherries; the rest is one of the three trees on {W, Z, a, b}.
    CHECK(positive == 3);
}

TEST_CASE("unroot suppresses the root") {
    const Tree r = tree("((a,b),(c,d));", nullptr);
    NewickOptions keep;
    keep.rooted = true;
    const Tree rooted = parse_newick("((a,b),(c,d));", keep);
    CHECK(rooted.rooted());
    CHECK(isomorphic(unroot(rooted), r));
}

} // TEST_SUITE
