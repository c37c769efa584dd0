#include "wqc/fpt.hpp"

#include <algorithm>
#include <set>

#include "wqc/error.hpp"
#include "wqc/stepwise.hpp"

namespace wqc {

CompleteQuartetSet CompleteQuartetSet::of_tree(const Tree& t) { return {t.taxa_ptr(), quartet_topologies(t)}; }

namespace {

/// Topology of the quadset {w,x,y,z} pairing w with x. Labels are distinct.
std::pair<std::size_t, std::uint8_t> pairing(int w, int x, int y, int z) {
    std::array<int, 4> s{w, x, y, z};
    std::sort(s.begin(), s.end());
    const auto pos = [&](int v) { return static_cast<int>(std::find(s.begin(), s.end(), v) - s.begin()); };
    return {quadset_rank(s[0], s[1], s[2], s[3]), static_cast<std::uint8_t>(topology_pairing(pos(w), pos(x)))};
}

bool holds(const CompleteQuartetSet& q, int w, int x, int y, int z) {
    const auto [rank, topo] = pairing(w, x, y, z);
    return q.choice[rank] == topo;
}

} // namespace

std::optional<Violation> find_violation(const CompleteQuartetSet& q) {
    const int n = q.taxa ? q.taxa->size() : 0;
    if (q.choice.size() != quadset_count(n)) throw Error("quartet set is not complete");
    std::array<int, 5> s{};
    for (s[0] = 0; s[0] < n; ++s[0])
        for (s[1] = s[0] + 1; s[1] < n; ++s[1])
            for (s[2] = s[1] + 1; s[2] < n; ++s[2])
                for (s[3] = s[2] + 1; s[3] < n; ++s[3])
                    for (s[4] = s[3] + 1; s[4] < n; ++s[4])
                        // Leave out position `out`; check every labelling of the quartet on the rest.
                        for (int out = 4; out >= 0; --out) {
                            std::array<int, 4> r{};
                            for (int i = 0, j = 0; i < 5; ++i)
                                if (i != out) r[static_cast<std::size_t>(j++)] = s[static_cast<std::size_t>(i)];
                            const int e = s[static_cast<std::size_t>(out)];
                            const auto topo = q.choice[quadset_rank(r[0], r[1], r[2], r[3])];
                            static constexpr int kPairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
                            const auto* p = kPairs[topo];
                            const std::array<int, 4> x{r[static_cast<std::size_t>(p[0])], r[static_cast<std::size_t>(p[1])],
                                                       r[static_cast<std::size_t>(p[2])], r[static_cast<std::size_t>(p[3])]};
                            for (int side = 0; side < 2; ++side)
                                for (int fa = 0; fa < 2; ++fa)
                                    for (int fc = 0; fc < 2; ++fc) {
                                        const int base = side * 2;
                                        const int other = 2 - base;
                                        const int a = x[static_cast<std::size_t>(base + fa)];
                                        const int b = x[static_cast<std::size_t>(base + 1 - fa)];
                                        const int c = x[static_cast<std::size_t>(other + fc)];
                                        const int d = x[static_cast<std::size_t>(other + 1 - fc)];
                                        if (!holds(q, a, b, c, e) && !holds(q, a, e, c, d)) return Violation{a, b, c, d, e};
                                    }
                        }
    return std::nullopt;
}

Tree tree_from_complete_compatible_set(const CompleteQuartetSet& q) {
    const int n = q.taxa ? q.taxa->size() : 0;
    if (n < 4) throw Error("a complete quartet set needs at least four taxa");
    if (q.choice.size() != quadset_count(n)) throw Error("quartet set is not complete");
    StepwiseTree t(n);
    while (!t.complete()) {
        const int d = t.placed();
        bool placed = false;
        for (int e = 0; e < t.edge_count() && !placed; ++e) {
            t.insert(e);
            bool ok = true;
            for (int c = 2; c < d && ok; ++c)
                for (int b = 1; b < c && ok; ++b)
                    for (int a = 0; a < b && ok; ++a) ok = t.quartet_topology(a, b, c, d) == q.choice[quadset_rank(a, b, c, d)];
            if (ok)
                placed = true;
            else
                t.undo();
        }
        if (!placed) throw Error("quartet set is not compatible: no edge accepts taxon '" + q.taxa->label(d) + "'");
    }
    return t.to_tree(q.taxa);
}

std::int64_t& Budget::for_class(int dominant_count) {
    switch (dominant_count) {
    case 1: return d_strict;
    case 2: return k2;
    case 3: return k3;
    }
    throw Error("dominance class out of range");
}

DominantSeed dominant_seed(const QuartetTable& table) {
    DominantSeed out;
    out.set.taxa = table.taxa_ptr();
    out.set.choice.resize(table.size());
    out.dominant_count.resize(table.size());
    for (std::size_t r = 0; r < table.size(); ++r) {
        const auto cls = classify_counts(table.counts(r));
        out.dominant_count[r] = cls.dominant_count;
        out.set.choice[r] = static_cast<std::uint8_t>(std::find(cls.dominant.begin(), cls.dominant.end(), true) - cls.dominant.begin());
    }
    return out;
}

namespace {

struct Search {
    const QuartetTable& table;
    const DominantSeed& seed;
    const std::function<void(const FptStep&)>& on_step;
    CompleteQuartetSet current;
    std::vector<char> locked;
    Budget budget;
    int depth = 0;
    std::set<std::vector<std::uint8_t>> visited;
    std::vector<FptSolution> solutions;
    std::uint64_t branches = 0;

    void run() {
        // The locked set is exactly where the choice differs from the seed,
        // so the choice vector identifies the whole search state.
        if (!visited.insert(current.choice).second) return;
        const auto v = find_violation(current);
        if (!v) {
            Tree tree = tree_from_complete_compatible_set(current);
            auto nw = to_newick(tree);
            solutions.push_back({current, std::move(tree), std::move(nw), score(table, current.choice)});
            return;
        }
        const auto [a, b, c, d, e] = *v;
        const std::array<std::array<int, 4>, 4> branch{{
            {a, c, b, d},  // ac|bd on {a,b,c,d}
            {a, d, b, c},  // ad|bc on {a,b,c,d}
            {a, b, c, e},  // ab|ce on {a,b,c,e}
            {a, e, c, d},  // ae|cd on {a,c,d,e}
        }};
        for (const auto& p : branch) {
            const auto [rank, topo] = pairing(p[0], p[1], p[2], p[3]);
            if (locked[rank]) continue;
            auto& left = budget.for_class(seed.dominant_count[rank]);
            if (left == 0) continue;
            ++branches;
            ++depth;
            if (on_step) on_step(FptStep{rank, current.choice[rank], topo, depth, &locked});
            const auto before = current.choice[rank];
            --left;
            locked[rank] = 1;
            current.choice[rank] = topo;
            run();
            current.choice[rank] = before;
            locked[rank] = 0;
            ++left;
            --depth;
        }
    }
};

} // namespace

FptResult solve_fpt(const QuartetTable& table, const Budget& budget, const std::function<void(const FptStep&)>& on_step) {
    if (budget.d_strict < 0 || budget.k2 < 0 || budget.k3 < 0) throw Error("budget components must be non-negative");
    const auto seed = dominant_seed(table);
    Search s{table, seed, on_step, seed.set, std::vector<char>(table.size(), 0), budget, 0, {}, {}, 0};
    s.run();
    std::sort(s.solutions.begin(), s.solutions.end(), [](const FptSolution& x, const FptSolution& y) {
        if (x.weight != y.weight) return x.weight > y.weight;
        return x.newick < y.newick;
    });
    FptResult out;
    out.solutions = std::move(s.solutions);
    out.branches_explored = s.branches;
    return out;
}

} // namespace wqc
