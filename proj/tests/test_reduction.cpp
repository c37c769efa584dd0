#include <doctest.h>

#include <numeric>
#include <sstream>

#include "support.hpp"
#include "wqc/reduction.hpp"

using namespace wqc;
using namespace wqc::testing;

namespace {

CyclicOrderingInstance co_of(int n, std::vector<std::array<int, 3>> triples) {
    CyclicOrderingInstance co;
    for (int i = 0; i < n; ++i) co.elements.push_back(std::string(1, static_cast<char>('a' + i)));
    co.triples = std::move(triples);
    return co;
}

/// Oracle: one of the three rotations appears in increasing position order.
bool rotation_holds(const std::vector<int>& pos, const std::array<int, 3>& t) {
    const int a = pos[static_cast<std::size_t>(t[0])];
    const int b = pos[static_cast<std::size_t>(t[1])];
    const int c = pos[static_cast<std::size_t>(t[2])];
    return (a < b && b < c) || (b < c && c < a) || (c < a && a < b);
}

std::vector<int> positions(const std::vector<int>& ordering) {
    std::vector<int> pos(ordering.size());
    for (std::size_t i = 0; i < ordering.size(); ++i) pos[static_cast<std::size_t>(ordering[i])] = static_cast<int>(i);
    return pos;
}

/// Oracle: number of quartets of one tree with two W or two Z leaves.
std::int64_t b_quartets(const GadgetInstance& g, const Tree& t) {
    std::vector<char> w(static_cast<std::size_t>(t.leaf_count()), 0), z(w);
    for (int x : g.w_taxa) w[static_cast<std::size_t>(x)] = 1;
    for (int x : g.z_taxa) z[static_cast<std::size_t>(x)] = 1;
    std::int64_t count = 0;
    for (const auto& q : lexicographic_quadsets(t.leaf_count())) {
        int nw = 0;
        int nz = 0;
        for (int x : q) nw += w[static_cast<std::size_t>(x)], nz += z[static_cast<std::size_t>(x)];
        count += nw >= 2 || nz >= 2;
    }
    return count;
}

Quartet quartet_of(const TaxonSet& taxa, const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
    // Pairing ab|cd over sorted positions.
    std::array<std::pair<int, int>, 4> x{{{taxa.index(a), 0}, {taxa.index(b), 0}, {taxa.index(c), 1}, {taxa.index(d), 1}}};
    std::sort(x.begin(), x.end());
    Quartet q;
    for (std::size_t i = 0; i < 4; ++i) q.taxa[i] = x[i].first;
    for (int j = 1; j < 4; ++j)
        if (x[static_cast<std::size_t>(j)].second == x[0].second) q.topology = topology_pairing(0, j);
    return q;
}

} // namespace

TEST_SUITE("reduction") {

TEST_CASE("cyclic orderings") {
    const auto co = co_of(3, {{0, 1, 2}});
    CHECK(satisfies(co, std::vector<int>{0, 1, 2}).satisfied);
    CHECK_FALSE(satisfies(co, std::vector<int>{0, 2, 1}).satisfied);
    CHECK_THROWS(satisfies(co, std::vector<int>{0, 0, 1}));

    std::vector<std::array<int, 3>> triples;
    std::array<int, 3> t{0, 1, 2};
    do triples.push_back(t);
    while (std::next_permutation(t.begin(), t.end()));
    std::vector<int> order{0, 1, 2};
    do {
        const auto pos = positions(order);
        for (const auto& tr : triples) {
            const auto rep = satisfies(co_of(3, {tr}), order);
            CHECK(rep.satisfied == rotation_holds(pos, tr));
            CHECK(rep.satisfied == (rep.triples[0].relations_holding == 2));
        }
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("cyclic ordering files") {
    std::istringstream is("# two triples\n5 2\nx y z\nz w x\n");
    const auto co = read_cyclic_ordering(is);
    CHECK(co.elements == std::vector<std::string>{"x", "y", "z", "w", "s1"});
    CHECK(co.triples.size() == 2);
    std::ostringstream os;
    write_cyclic_ordering(os, co);
    std::istringstream again(os.str());
    CHECK(read_cyclic_ordering(again).triples == co.triples);

    std::istringstream short_header("3\na b c\n");
    CHECK_THROWS(read_cyclic_ordering(short_header));
    std::istringstream repeat("3 1\na a b\n");
    CHECK_THROWS(read_cyclic_ordering(repeat));
    std::istringstream count("3 2\na b c\n");
    CHECK_THROWS(read_cyclic_ordering(count));
}

TEST_CASE("gadget sizes and constants") {
    const auto g = build_gadget(co_of(3, {{0, 1, 2}}), 2);
    CHECK(g.wqc.size() == 6);
    CHECK(g.wqc.taxa().size() == 7);
    CHECK(g.wqc.taxa().labels() == std::vector<std::string>{"a", "b", "c", "w1", "w2", "z1", "z2"});
    CHECK(g.O_bound == 24);
    CHECK(g.K == 6 * b_quartets(g, g.wqc.trees()[0].tree));
    for (const auto& wt : g.wqc.trees()) {
        CHECK(b_quartets(g, wt.tree) == b_quartets(g, g.wqc.trees()[0].tree));
        CHECK(is_wz_augmented_caterpillar(wt.tree, g.w_taxa, g.z_taxa));
    }
    CHECK(g.threshold == g.K + g.O_bound + 4 * 1 * 2 * 2);

    const auto g4 = build_gadget(co_of(4, {{0, 1, 2}, {3, 2, 0}}), 1);
    const std::int64_t n = 4;
    CHECK(g4.O_bound == 3 * 2 * 1 * ((n - 2) * (n - 3) / 2 + 2 * (n - 2)));
}

TEST_CASE("quartet classes") {
    const auto g = build_gadget(co_of(4, {{0, 1, 2}}), 2);
    const auto& taxa = g.wqc.taxa();
    std::size_t ab = g.provenance.size();
    for (std::size_t i = 0; i < g.provenance.size(); ++i)
        if (g.provenance[i].pair == std::array<int, 2>{0, 1} && !g.provenance[i].reversed) ab = i;
    REQUIRE(ab < g.provenance.size());
    CHECK(classify_quartet(g, ab, quartet_of(taxa, "w1", "w2", "a", "b")) == QuartetClass::B);
    CHECK(classify_quartet(g, ab, quartet_of(taxa, "z1", "z2", "a", "w1")) == QuartetClass::B);
    CHECK(classify_quartet(g, ab, quartet_of(taxa, "w1", "a", "b", "z1")) == QuartetClass::in);
    CHECK(classify_quartet(g, ab, quartet_of(taxa, "w1", "a", "d", "z1")) == QuartetClass::out);
    CHECK(classify_quartet(g, ab, quartet_of(taxa, "w2", "c", "d", "z2")) == QuartetClass::out);
    CHECK(classify_quartet(g, ab, quartet_of(taxa, "w1", "z1", "a", "b")) == QuartetClass::other);
    CHECK(class_name(QuartetClass::in) == "in");
}

TEST_CASE("satisfying caterpillars meet the threshold") {
    const auto co = co_of(4, {{0, 1, 2}, {1, 3, 2}});
    for (int w = 1; w <= 2; ++w) {
        const auto g = build_gadget(co, w);
        std::vector<int> order{0, 1, 2, 3};
        int satisfying = 0;
        do {
            if (!satisfies(co, order).satisfied) continue;
            ++satisfying;
            const auto b = evaluate_candidate(g, ordering_caterpillar(g, order));
            CHECK(b.B == g.K);
            CHECK(b.out == g.O_bound);
            CHECK(b.in == 4 * 2 * w * w);
            CHECK(b.meets_threshold);
            CHECK(b.total == b.B + b.in + b.out + b.other);
        } while (std::next_permutation(order.begin(), order.end()));
        CHECK(satisfying > 0);
    }
}

TEST_CASE("every tree on the smallest gadget respects the out bound and the in-quartet conflict") {
    const auto co = co_of(3, {{0, 1, 2}});
    const auto g = build_gadget(co, 1);
    const auto& taxa = g.wqc.taxa();
    const std::array<Quartet, 3> families{quartet_of(taxa, "w1", "a", "b", "z1"), quartet_of(taxa, "w1", "b", "c", "z1"),
                                          quartet_of(taxa, "w1", "c", "a", "z1")};
    for (const auto& m : enumerate_topologies(g.wqc.taxa_ptr())) {
        const auto b = evaluate_candidate(g, m);
        CHECK(b.out <= g.O_bound);
        CHECK(b.total == score(build_table(g.wqc), m));
        const auto topo = quartet_topologies(m);
        int shown = 0;
        for (const auto& q : families) shown += topo[quadset_rank(q.taxa)] == q.topology;
        CHECK(shown <= 2);
    }
}

TEST_CASE("orderings read back from caterpillars") {
    const auto co = co_of(4, {{0, 1, 2}, {2, 3, 0}});
    const auto g = build_gadget(co, 2);
    std::vector<int> order{0, 1, 2, 3};
    do {
        const auto back = extract_ordering(g, ordering_caterpillar(g, order));
        REQUIRE(back);
        CHECK(*back == order);
        CHECK(satisfies(co, *back).satisfied == satisfies(co, order).satisfied);
    } while (std::next_permutation(order.begin(), order.end()));

    const Tree broken = tree("((w1,z1),a,(b,(c,(d,(w2,z2)))));", g.wqc.taxa_ptr());
    CHECK_FALSE(extract_ordering(g, broken));
}

TEST_CASE("sidecar round trip") {
    const auto g = build_gadget(co_of(4, {{0, 1, 2}, {3, 1, 0}}), 2);
    const auto sidecar = gadget_sidecar(g);
    CHECK(sidecar.at("K") == g.K);
    CHECK(sidecar.at("threshold") == g.threshold);
    const auto back = load_gadget(g.wqc, sidecar);
    CHECK(back.threshold == g.threshold);
    auto tampered = sidecar;
    tampered["K"] = g.K + 1;
    CHECK_THROWS(load_gadget(g.wqc, tampered));
}

} // TEST_SUITE
