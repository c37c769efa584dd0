#include "wqc/approx.hpp"

#include <algorithm>

#include "wqc/error.hpp"
#include "wqc/parallel.hpp"

namespace wqc {

std::string method_name(ApproxMethod m) {
    switch (m) {
    case ApproxMethod::best_tree: return "best_tree";
    case ApproxMethod::derandomized: return "derandomized";
    case ApproxMethod::combined: return "combined";
    }
    return "unknown";
}

namespace {

ApproxResult make_result(const QuartetTable& table, Tree tree, ApproxMethod method) {
    const auto s = score(table, tree);
    return ApproxResult{std::move(tree), s, table.quartet_total() - s, method};
}

} // namespace

ApproxResult best_input_tree(const WqcInstance& inst, int jobs) {
    const auto& trees = inst.trees();
    if (trees.empty()) throw Error("instance contains no trees");
    const std::size_t k = trees.size();
    std::vector<std::vector<std::uint8_t>> topo(k);
    parallel_for(k, jobs, [&](std::size_t i) { topo[i] = quartet_topologies(trees[i].tree); });

    std::vector<std::int64_t> cost(k, 0);
    parallel_for(k, jobs, [&](std::size_t i) {
        std::int64_t c = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            std::int64_t d = 0;
            for (std::size_t r = 0; r < topo[i].size(); ++r) d += topo[i][r] != topo[j][r];
            c += trees[j].multiplicity * d;
        }
        cost[i] = c;
    });

    std::size_t best = 0;
    std::string best_newick = to_newick(trees[0].tree);
    for (std::size_t i = 1; i < k; ++i) {
        if (cost[i] > cost[best]) continue;
        auto nw = to_newick(trees[i].tree);
        if (cost[i] < cost[best] || nw < best_newick) {
            best = i;
            best_newick = std::move(nw);
        }
    }
    const auto table = build_table(inst);
    return make_result(table, trees[best].tree, ApproxMethod::best_tree);
}

ApproxResult derandomized_one_third(const QuartetTable& table, const DerandomizerObserver& observer) {
    const int n = table.taxon_count();
    PartialTree pt(n);
    std::vector<char> member(static_cast<std::size_t>(n), 0);

    while (auto v = pt.next_multifurcation()) {
        pt.begin_split(*v);
        const std::vector<int> kids = pt.split_children();
        std::fill(member.begin(), member.end(), 0);
        for (int c : kids) member[static_cast<std::size_t>(c)] = 1;

        for (std::size_t i = 0; i < kids.size(); ++i) {
            const int a = kids[i];
            std::int64_t ex = 0;
            std::int64_t ey = 0;
            // Quadsets through a with at least two further members of the split.
            for (int d = 3; d < n; ++d)
                for (int c = 2; c < d; ++c)
                    for (int b = 1; b < c; ++b)
                        for (int a0 = 0; a0 < b; ++a0) {
                            const Quadset q{a0, b, c, d};
                            if (std::find(q.begin(), q.end(), a) == q.end()) continue;
                            int others = 0;
                            for (int z : q) others += z != a && member[static_cast<std::size_t>(z)];
                            if (others < 2) continue;
                            const auto& f = table.counts(q);
                            const Placement px[] = {{a, Side::x}};
                            const Placement py[] = {{a, Side::y}};
                            const auto dx = completion_distribution(pt, px, q);
                            const auto dy = completion_distribution(pt, py, q);
                            for (std::size_t t = 0; t < 3; ++t) {
                                ex += f[t] * dx[t].numerator;
                                ey += f[t] * dy[t].numerator;
                            }
                        }
            const bool forced = i + 1 == kids.size() && pt.children(pt.side_node(Side::y)).empty();
            const Side side = forced || ey > ex ? Side::y : Side::x;
            pt.place_next(side);
            if (observer) observer(pt, DerandomizerStep{*v, a, ex, ey, side, forced});
        }
    }
    return make_result(table, pt.to_tree(table.taxa_ptr()), ApproxMethod::derandomized);
}

ApproxResult derandomized_one_third(const WqcInstance& inst, const DerandomizerObserver& observer) {
    return derandomized_one_third(build_table(inst), observer);
}

ApproxResult half_approximation(const WqcInstance& inst, int jobs) {
    auto best = best_input_tree(inst, jobs);
    auto derand = derandomized_one_third(inst);
    auto& pick = derand.wqc_score > best.wqc_score ? derand : best;
    pick.method = ApproxMethod::combined;
    return std::move(pick);
}

} // namespace wqc
