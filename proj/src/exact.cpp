#include "wqc/exact.hpp"

#include <algorithm>

#include "wqc/error.hpp"
#include "wqc/parallel.hpp"

namespace wqc {

namespace {

void check_size(const QuartetTable& table, int cap) {
    const int n = table.taxon_count();
    if (n > cap) throw CapacityError("exhaustive search over " + std::to_string(n) + " taxa exceeds the cap of " + std::to_string(cap));
}

/// Fixed prefix depth, so the work split never depends on the worker count.
int prefix_depth(int n) { return std::min(n - 3, 3); }

void collect_prefixes(StepwiseTree& t, int depth, std::vector<std::vector<std::uint8_t>>& out) {
    if (static_cast<int>(t.history().size()) == depth) {
        out.push_back(t.history());
        return;
    }
    for (int e = 0; e < t.edge_count(); ++e) {
        t.insert(e);
        collect_prefixes(t, depth, out);
        t.undo();
    }
}

struct Partial {
    std::int64_t best = -1;
    std::uint64_t count = 0;
    std::uint64_t evaluated = 0;
    std::vector<std::vector<std::uint8_t>> histories;
};

void search(const QuartetTable& table, StepwiseTree& t, std::int64_t acc, std::size_t keep, Partial& out) {
    if (t.complete()) {
        ++out.evaluated;
        if (acc > out.best) {
            out.best = acc;
            out.count = 0;
            out.histories.clear();
        }
        if (acc == out.best) {
            ++out.count;
            if (out.histories.size() < keep) out.histories.push_back(t.history());
        }
        return;
    }
    for (int e = 0; e < t.edge_count(); ++e) {
        t.insert(e);
        search(table, t, acc + insertion_gain(table, t), keep, out);
        t.undo();
    }
}

} // namespace

std::int64_t insertion_gain(const QuartetTable& table, const StepwiseTree& t) {
    const int d = t.placed() - 1;
    std::int64_t gain = 0;
    for (int c = 2; c < d; ++c)
        for (int b = 1; b < c; ++b)
            for (int a = 0; a < b; ++a)
                gain += table.counts(quadset_rank(a, b, c, d))[static_cast<std::size_t>(t.quartet_topology(a, b, c, d))];
    return gain;
}

ExactResult solve_exact(const QuartetTable& table, const ExactOptions& options) {
    check_size(table, options.cap);
    const int n = table.taxon_count();
    std::vector<std::vector<std::uint8_t>> prefixes;
    {
        StepwiseTree t(n);
        collect_prefixes(t, prefix_depth(n), prefixes);
    }
    std::vector<Partial> parts(prefixes.size());
    parallel_for(prefixes.size(), options.jobs, [&](std::size_t i) {
        StepwiseTree t(n);
        std::int64_t acc = 0;
        for (auto e : prefixes[i]) {
            t.insert(e);
            acc += insertion_gain(table, t);
        }
        search(table, t, acc, options.max_optima, parts[i]);
    });

    ExactResult out;
    out.quartet_total = table.quartet_total();
    out.optimum_score = -1;
    for (const auto& p : parts) out.optimum_score = std::max(out.optimum_score, p.best);
    std::vector<std::vector<std::uint8_t>> kept;
    for (const auto& p : parts) {
        out.evaluated_count += p.evaluated;
        if (p.best != out.optimum_score) continue;
        out.optima_count += p.count;
        for (const auto& h : p.histories)
            if (kept.size() < options.max_optima) kept.push_back(h);
    }
    out.optimum_cost = out.quartet_total - out.optimum_score;

    std::vector<std::pair<std::string, Tree>> trees;
    for (const auto& h : kept) {
        Tree tree = replay(n, h).to_tree(table.taxa_ptr());
        auto nw = to_newick(tree);
        trees.emplace_back(std::move(nw), std::move(tree));
    }
    std::sort(trees.begin(), trees.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [nw, tree] : trees) out.optima.push_back(std::move(tree));
    return out;
}

std::optional<Tree> decide(const QuartetTable& table, std::int64_t threshold, int cap) {
    check_size(table, cap);
    const int n = table.taxon_count();
    StepwiseTree t(n);
    std::optional<Tree> found;
    // Upper bound on what the unplaced leaves can still add.
    std::vector<std::int64_t> best_gain(static_cast<std::size_t>(n) + 1, 0);
    for (int d = n - 1; d >= 3; --d) {
        std::int64_t g = 0;
        for (int c = 2; c < d; ++c)
            for (int b = 1; b < c; ++b)
                for (int a = 0; a < b; ++a) {
                    const auto& f = table.counts(quadset_rank(a, b, c, d));
                    g += std::max({f[0], f[1], f[2]});
                }
        best_gain[static_cast<std::size_t>(d)] = g + best_gain[static_cast<std::size_t>(d) + 1];
    }
    auto run = [&](auto&& self, std::int64_t acc) -> bool {
        if (t.complete()) {
            if (acc < threshold) return false;
            found = t.to_tree(table.taxa_ptr());
            return true;
        }
        if (acc + best_gain[static_cast<std::size_t>(t.placed())] < threshold) return false;
        for (int e = 0; e < t.edge_count(); ++e) {
            t.insert(e);
            const bool hit = self(self, acc + insertion_gain(table, t));
            t.undo();
            if (hit) return true;
        }
        return false;
    };
    run(run, 0);
    return found;
}

} // namespace wqc
