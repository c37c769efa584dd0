#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "wqc/error.hpp"

using namespace wqc;
using namespace wqc::testing;

TEST_SUITE("quartets") {

TEST_CASE("quadset ranks are dense and invertible") {
    for (int n = 4; n <= 12; ++n) {
        std::vector<char> hit(quadset_count(n), 0);
        for (const auto& q : lexicographic_quadsets(n)) {
            const auto r = quadset_rank(q);
            REQUIRE(r < hit.size());
            CHECK_FALSE(hit[r]);
            hit[r] = 1;
            CHECK(quadset_unrank(r) == q);
        }
    }
    CHECK(binomial(300, 4) == 330791175ULL);
}

TEST_CASE("topology pairing") {
    CHECK(topology_pairing(0, 1) == 0);
    CHECK(topology_pairing(2, 3) == 0);
    CHECK(topology_pairing(0, 2) == 1);
    CHECK(topology_pairing(1, 3) == 1);
    CHECK(topology_pairing(0, 3) == 2);
    CHECK(topology_pairing(1, 2) == 2);
    CHECK(topology_pairing(3, 0) == 2);
    CHECK_THROWS(topology_pairing(1, 1));
}

TEST_CASE("quartets of small trees") {
    const Tree t4 = tree("(a,b,(c,d));");
    const auto q4 = quartets_of_tree(t4);
    REQUIRE(q4.size() == 1);
    CHECK(format_quartet(t4.taxa(), q4[0]) == "ab|cd");

    const Tree cat = tree("((((a,b),c),d),e);");
    std::vector<std::string> got;
    for (const auto& q : quartets_of_tree(cat)) got.push_back(format_quartet(cat.taxa(), q));
    CHECK(got == std::vector<std::string>{"ab|cd", "ab|ce", "ab|de", "ac|de", "bc|de"});

    const auto long_labels = tree("((t1,t2),(t3,t4));");
    CHECK(format_quartet(long_labels.taxa(), quartets_of_tree(long_labels)[0]) == "t1,t2|t3,t4");
}

TEST_CASE("every seven-leaf topology has C(7,4) quartets") {
    for (const auto& t : enumerate_topologies(taxa_of(7))) CHECK(quartets_of_tree(t).size() == 35);
}

TEST_CASE("quartet extraction agrees with restriction on random trees") {
    auto rng = derived_rng(11, 0);
    for (int i = 0; i < 20; ++i) {
        const int n = 4 + static_cast<int>(uniform_below(rng, 9));
        const Tree t = random_tree(taxa_of(n), rng);
        const auto topo = quartet_topologies(t);
        for (const auto& q : lexicographic_quadsets(n)) CHECK(restricted_topology(t, q) == topo[quadset_rank(q)]);
    }
}

TEST_CASE("quartet distance") {
    const Tree a = tree("((((a,b),c),d),e);");
    const Tree b = tree("((((a,c),b),d),e);", a.taxa_ptr());
    CHECK(quartet_distance(a, a) == 0);
    const Tree ab = tree("(a,b,(c,d));");
    CHECK(quartet_distance(ab, tree("(a,c,(b,d));", ab.taxa_ptr())) == 1);

    std::int64_t oracle = 0;
    for (const auto& q : lexicographic_quadsets(5)) oracle += restricted_topology(a, q) != restricted_topology(b, q);
    CHECK(oracle == 2);
    CHECK(quartet_distance(a, b) == oracle);
}

TEST_CASE("tables from instances") {
    const Tree t = tree("((((a,b),c),d),e);");
    const auto single = build_table(WqcInstance(t.taxa_ptr(), {{t, 1}}));
    for (std::size_t r = 0; r < single.size(); ++r) {
        auto f = single.counts(r);
        std::sort(f.begin(), f.end());
        CHECK(f == Counts{0, 0, 1});
    }
    CHECK(score(single, t) == 5);

    // u and v differ on {a,c,d,e} and {b,c,d,e} only.
    const Tree u = tree("(a,b,(c,(d,e)));", t.taxa_ptr());
    const Tree v = tree("(a,b,(d,(c,e)));", t.taxa_ptr());
    REQUIRE(quartet_distance(u, v) == 2);
    const auto two = build_table(WqcInstance(t.taxa_ptr(), {{u, 2}, {v, 1}}));
    int mixed = 0;
    for (std::size_t r = 0; r < two.size(); ++r) {
        auto f = two.counts(r);
        std::sort(f.begin(), f.end());
        if (f == Counts{0, 1, 2}) ++mixed;
        else CHECK(f == Counts{0, 0, 3});
    }
    CHECK(mixed == 2);
}

TEST_CASE("scores agree with the tree-by-tree count on random instances") {
    for (std::uint64_t i = 0; i < 30; ++i) {
        auto rng = derived_rng(12, i);
        const int n = 4 + static_cast<int>(uniform_below(rng, 5));
        const auto inst = random_instance(taxa_of(n), 1 + static_cast<int>(uniform_below(rng, 9)), rng);
        const auto table = build_table(inst);
        for (std::size_t r = 0; r < table.size(); ++r) {
            const auto& f = table.counts(r);
            CHECK(f[0] + f[1] + f[2] == inst.total_multiplicity());
        }
        const Tree m = random_tree(inst.taxa_ptr(), rng);
        CHECK(score(table, m) == tree_by_tree_score(inst, m));
        CHECK(table.quartet_total() == inst.total_multiplicity() * static_cast<std::int64_t>(quadset_count(n)));
    }
}

TEST_CASE("dominance classes") {
    const auto strict = classify_counts({17, 16, 11});
    CHECK(strict.dominant_count == 1);
    CHECK(strict.strictly_dominant == std::array<bool, 3>{true, false, false});
    CHECK(strict.strictly_least_frequent == std::array<bool, 3>{false, false, true});

    const auto tie3 = classify_counts({5, 5, 5});
    CHECK(tie3.dominant_count == 3);
    CHECK(tie3.strictly_dominant == std::array<bool, 3>{});
    CHECK(tie3.strictly_least_frequent == std::array<bool, 3>{});

    const auto tie2 = classify_counts({4, 4, 1});
    CHECK(tie2.dominant_count == 2);
    CHECK(tie2.dominant == std::array<bool, 3>{true, true, false});
    CHECK(tie2.strictly_least_frequent == std::array<bool, 3>{false, false, true});

    const QuartetTable table(taxa_of(5), {{7, 3, 2}, {4, 4, 4}, {5, 5, 2}, {1, 10, 1}, {0, 0, 12}});
    CHECK_THROWS(QuartetTable(taxa_of(5), {{7, 3, 2}, {4, 4, 4}, {5, 5, 2}, {1, 10, 1}, {0, 0, 13}}));
    CHECK_THROWS(QuartetTable(taxa_of(5), {{17, 16, 11}}));
    const QuartetTable wide(taxa_of(5), {{17, 16, 11}, {15, 15, 14}, {14, 15, 15}, {44, 0, 0}, {10, 20, 14}});
    const auto cls = classify_dominance(wide);
    CHECK(cls.with_dominant_count == std::array<std::int64_t, 3>{3, 2, 0});
}

TEST_CASE("table text round trip") {
    auto rng = derived_rng(13, 0);
    const auto inst = random_instance(taxa_of(6), 7, rng);
    const auto table = build_table(inst);
    std::stringstream ss;
    write_table(ss, table);
    const auto back = read_table(ss);
    CHECK(back.taxa() == table.taxa());
    for (std::size_t r = 0; r < table.size(); ++r) CHECK(back.counts(r) == table.counts(r));

    std::istringstream missing("a\tb\tc\td\t1\t0\t0\na\tb\tc\te\t1\t0\t0\n");
    CHECK_THROWS(read_table(missing));
    std::istringstream bad("a\tb\tc\td\t1\tx\t0\n");
    CHECK_THROWS(read_table(bad));
    std::istringstream unsorted("b\ta\tc\td\t1\t0\t0\n");
    CHECK_NOTHROW(read_table(unsorted));  // first appearance fixes the order: b < a
}

} // TEST_SUITE
