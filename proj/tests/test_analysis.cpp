#include <doctest.h>

#include "support.hpp"
#include "wqc/exact.hpp"

using namespace wqc;
using namespace wqc::testing;

namespace {

bool falsifies(const std::vector<ConjectureReport>& reports, int id) { return reports.at(static_cast<std::size_t>(id - 1)).falsifies; }

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("a single tree falsifies nothing") {
    const auto reports = verify_conjectures(instance({{3, "((a,b),c,((d,e),f));"}}));
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) {
        CHECK_FALSE(r.falsifies);
        CHECK(r.optimum == 45);
        CHECK(r.optima_count == 1);
    }
    CHECK(reports[0].evidence.at("most_in_an_optimum") == 15);
    CHECK(reports[2].evidence.at("universal_quartets") == 15);
}

TEST_CASE("profile realization reproduces the requested triples") {
    const auto spec = no_dominant_spec();
    const auto r = realize_profile(spec);
    REQUIRE(r.instance);
    const auto& inst = *r.instance;
    CHECK(inst.total_multiplicity() == 44);
    const auto table = build_table(inst);
    CHECK(table.counts(quadset_rank(0, 1, 2, 3)) == Counts{11, 17, 16});
    const Tree star = tree(no_dominant_star(), inst.taxa_ptr());
    const auto topo = quartet_topologies(star);
    for (std::size_t q = 0; q < table.size(); ++q) {
        auto f = table.counts(q);
        CHECK(f[topo[q]] == 16);
        std::sort(f.begin(), f.end());
        CHECK(f == Counts{11, 16, 17});
    }
    CHECK(multiplicity_of(inst, star) == 3);
    CHECK(realize_profile(spec, {3, 0}).instance.has_value());
    CHECK(instance_json(*realize_profile(spec, {3, 0}).instance) == instance_json(inst));
}

TEST_CASE("profiles of one tree and impossible profiles") {
    const Tree t = tree("((a,b),c,(d,e));");
    nlohmann::json j{{"taxa", {"a", "b", "c", "d", "e"}}, {"k", 4}, {"quadsets", nlohmann::json::array()}};
    const auto topo = quartet_topologies(t);
    for (const auto& q : lexicographic_quadsets(5)) {
        nlohmann::json counts = {0, 0, 0};
        counts[topo[quadset_rank(q)]] = 4;
        j["quadsets"].push_back({{"quadset", {t.taxa().label(q[0]), t.taxa().label(q[1]), t.taxa().label(q[2]), t.taxa().label(q[3])}}, {"counts", counts}});
    }
    const auto r = realize_profile(parse_profile_spec(j));
    REQUIRE(r.instance);
    REQUIRE(r.instance->size() == 1);
    CHECK(isomorphic(r.instance->trees()[0].tree, t));
    CHECK(r.instance->trees()[0].multiplicity == 4);

    nlohmann::json bad{{"taxa", {"a", "b", "c", "d", "e"}}, {"k", 4}, {"quadsets", {{{"quadset", "*"}, {"counts", {1, 1, 1}}}}}};
    CHECK_FALSE(realize_profile(parse_profile_spec(bad)).instance);
    CHECK_THROWS_AS(parse_profile_spec(nlohmann::json{{"k", 4}}), Error);
}

TEST_CASE("the no-dominant instance and its reduced variant") {
    const auto& inst = no_dominant_instance();
    const auto reports = verify_conjectures(inst);
    CHECK(falsifies(reports, 1));
    CHECK(reports[0].evidence.at("most_in_an_optimum") == 0);
    CHECK(reports[0].evidence.at("best_score_with_strictly_dominant") <= 79);
    CHECK_FALSE(falsifies(reports, 5));

    const Tree star = tree(no_dominant_star(), inst.taxa_ptr());
    const auto reduced = without(inst, star);
    CHECK(reduced.total_multiplicity() == 41);
    const auto table = build_table(reduced);
    CHECK(score(table, star) == 65);
    const auto r5 = verify_conjectures(reduced);
    CHECK(falsifies(r5, 5));
    CHECK(r5[4].optimum == 75);
    CHECK(r5[4].evidence.at("best_score") == 65);
}

TEST_CASE("scan agrees with brute force") {
    for (std::uint64_t i = 0; i < 15; ++i) {
        auto rng = derived_rng(51, i);
        const int n = 5 + static_cast<int>(i % 2);
        const auto table = build_table(random_instance(taxa_of(n), 1 + static_cast<int>(uniform_below(rng, 9)), rng));
        const auto scan = scan_optima(table);
        const auto cls = classify_dominance(table);
        const auto oracle = brute_optimum(table);
        CHECK(scan.optimum == oracle.best);
        CHECK(scan.optima_count == oracle.optima.size());
        std::int64_t best_dom = -1;
        std::int64_t best_free = -1;
        for (const auto& t : enumerate_topologies(table.taxa_ptr())) {
            const auto topo = quartet_topologies(t);
            bool dom = false;
            bool least = false;
            for (std::size_t q = 0; q < topo.size(); ++q) {
                dom = dom || cls.quadsets[q].strictly_dominant[topo[q]];
                least = least || cls.quadsets[q].strictly_least_frequent[topo[q]];
            }
            if (dom) best_dom = std::max(best_dom, score(table, t));
            if (!least) best_free = std::max(best_free, score(table, t));
        }
        CHECK(scan.best_with_dominant == best_dom);
        CHECK(scan.best_without_least_frequent_score == best_free);
    }
}

TEST_CASE("seeded search") {
    SearchOptions options;
    options.pool.push_back(no_dominant_instance());
    const auto found = search_counterexamples(1, 5, 6, 10, 99, options);
    REQUIRE_FALSE(found.empty());
    CHECK(found[0].instance == instance_json(no_dominant_instance()));
    for (const auto& r : found) {
        // Re-verify each report from its own instance.
        std::string text;
        for (const auto& rec : r.instance) text += std::to_string(rec.at("multiplicity").get<std::int64_t>()) + "\t" + rec.at("newick").get<std::string>() + "\n";
        CHECK(verify_conjectures(parse_instance(text, no_dominant_instance().taxa_ptr()))[0].falsifies);
    }
    options.jobs = 4;
    const auto again = search_counterexamples(1, 5, 6, 10, 99, options);
    REQUIRE(again.size() == found.size());
    for (std::size_t i = 0; i < found.size(); ++i) CHECK(to_json(again[i]) == to_json(found[i]));

    SearchOptions identical;
    for (int i = 0; i < 5; ++i) identical.pool.push_back(instance({{3, "((a,b),c,(d,e));"}}));
    CHECK(search_counterexamples(4, 5, 3, 0, 1, identical).empty());
}

} // TEST_SUITE
