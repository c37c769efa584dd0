#include "wqc/quartets.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "wqc/error.hpp"
#include "wqc/instance.hpp"

namespace wqc {

std::uint64_t detail::binomial_slow(int n, int k) {
    if (k < 0 || n < k) return 0;
    k = std::min(k, n - k);
    std::uint64_t out = 1;
    for (int i = 1; i <= k; ++i) out = out * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return out;
}

Quadset quadset_unrank(std::size_t rank) {
    Quadset q{};
    auto r = static_cast<std::uint64_t>(rank);
    for (int k = 4; k >= 1; --k) {
        int x = k - 1;
        while (binomial(x + 1, k) <= r) ++x;
        q[static_cast<std::size_t>(k - 1)] = x;
        r -= binomial(x, k);
    }
    return q;
}

std::vector<Quadset> lexicographic_quadsets(int n) {
    std::vector<Quadset> out;
    out.reserve(static_cast<std::size_t>(quadset_count(n)));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) out.push_back({a, b, c, d});
    return out;
}

Topology topology_pairing(int i, int j) {
    if (i > j) std::swap(i, j);
    if (i == j || i < 0 || j > 3) throw Error("invalid leaf pair in quadset");
    if (i == 0) return j - 1;
    // Position 0 pairs with the remaining position 6 - i - j.
    return 5 - i - j;
}

std::string format_quartet(const TaxonSet& taxa, const Quartet& q) {
    static constexpr int kPairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    const auto* p = kPairs[q.topology];
    bool short_labels = true;
    for (int x : q.taxa) short_labels = short_labels && taxa.label(x).size() == 1;
    auto name = [&](int pos) { return taxa.label(q.taxa[static_cast<std::size_t>(p[pos])]); };
    if (short_labels) return name(0) + name(1) + "|" + name(2) + name(3);
    return name(0) + "," + name(1) + "|" + name(2) + "," + name(3);
}

namespace {

void require_quartet_tree(const Tree& t) {
    if (t.rooted() || !t.is_binary()) throw Error("quartets are defined here for binary unrooted trees");
    if (t.leaf_count() < 4) throw Error("quartets need at least four taxa");
}

} // namespace

std::vector<std::uint8_t> quartet_topologies(const Tree& t) {
    require_quartet_tree(t);
    const int n = t.leaf_count();
    const int nodes = t.node_count();
    // Leaf-to-leaf path lengths; with unit edges the four-point condition
    // picks the pairing whose paths are disjoint.
    std::vector<int> dist(static_cast<std::size_t>(n * n), 0);
    std::vector<int> level(static_cast<std::size_t>(nodes));
    std::vector<int> queue(static_cast<std::size_t>(nodes));
    for (int s = 0; s < n; ++s) {
        std::fill(level.begin(), level.end(), -1);
        std::size_t head = 0;
        std::size_t tail = 0;
        queue[tail++] = s;
        level[static_cast<std::size_t>(s)] = 0;
        while (head < tail) {
            const int v = queue[head++];
            for (int u : t.neighbors(v)) {
                if (level[static_cast<std::size_t>(u)] >= 0) continue;
                level[static_cast<std::size_t>(u)] = level[static_cast<std::size_t>(v)] + 1;
                queue[tail++] = u;
            }
        }
        for (int x = 0; x < n; ++x) dist[static_cast<std::size_t>(s * n + x)] = level[static_cast<std::size_t>(x)];
    }
    auto d = [&](int x, int y) { return dist[static_cast<std::size_t>(x * n + y)]; };

    std::vector<std::uint8_t> out(static_cast<std::size_t>(quadset_count(n)));
    for (int dd = 3; dd < n; ++dd)
        for (int c = 2; c < dd; ++c)
            for (int b = 1; b < c; ++b)
                for (int a = 0; a < b; ++a) {
                    const int s0 = d(a, b) + d(c, dd);
                    const int s1 = d(a, c) + d(b, dd);
                    const int s2 = d(a, dd) + d(b, c);
                    std::uint8_t topo = 2;
                    if (s0 < s1 && s0 < s2)
                        topo = 0;
                    else if (s1 < s2)
                        topo = 1;
                    out[quadset_rank(a, b, c, dd)] = topo;
                }
    return out;
}

std::vector<Quartet> quartets_of_tree(const Tree& t) {
    const auto topo = quartet_topologies(t);
    std::vector<Quartet> out;
    for (const auto& q : lexicographic_quadsets(t.leaf_count())) out.push_back({q, topo[quadset_rank(q)]});
    return out;
}

Topology four_leaf_topology(const Tree& t) {
    require_quartet_tree(t);
    if (t.leaf_count() != 4) throw Error("expected a four-leaf tree");
    const int hub = t.neighbors(0).front();
    for (int u : t.neighbors(hub))
        if (u != 0 && t.is_leaf(u)) return topology_pairing(0, u);
    throw Error("malformed four-leaf tree");
}

QuartetTable::QuartetTable(TaxaPtr taxa, std::vector<Counts> counts) : taxa_(std::move(taxa)), counts_(std::move(counts)) {
    if (!taxa_ || taxa_->size() < 4) throw Error("a quartet table needs at least four taxa");
    if (counts_.size() != quadset_count(taxa_->size())) throw Error("quartet table must cover every quadset");
    total_ = counts_.front()[0] + counts_.front()[1] + counts_.front()[2];
    for (const auto& f : counts_) {
        if (f[0] < 0 || f[1] < 0 || f[2] < 0) throw Error("negative quartet frequency");
        if (f[0] + f[1] + f[2] != total_) throw Error("quadset frequencies do not share one total");
    }
}

QuartetTable build_table(const WqcInstance& inst) {
    const int n = inst.taxa().size();
    if (n < 4) throw Error("a quartet table needs at least four taxa");
    std::vector<Counts> counts(static_cast<std::size_t>(quadset_count(n)), Counts{0, 0, 0});
    for (const auto& wt : inst.trees()) {
        if (!(wt.tree.taxa() == inst.taxa())) throw LabelError("tree leaf set does not match the instance taxa");
        const auto topo = quartet_topologies(wt.tree);
        for (std::size_t r = 0; r < topo.size(); ++r) counts[r][topo[r]] += wt.multiplicity;
    }
    if (inst.trees().empty()) throw Error("instance contains no trees");
    return QuartetTable(inst.taxa_ptr(), std::move(counts));
}

std::int64_t score(const QuartetTable& table, const std::vector<std::uint8_t>& topologies) {
    if (topologies.size() != table.size()) throw Error("topology vector does not match the table");
    std::int64_t s = 0;
    for (std::size_t r = 0; r < topologies.size(); ++r) s += table.counts(r)[topologies[r]];
    return s;
}

std::int64_t score(const QuartetTable& table, const Tree& m) {
    if (!(m.taxa() == table.taxa())) throw LabelError("tree leaf set does not match the table taxa");
    return score(table, quartet_topologies(m));
}

std::int64_t quartet_distance(const Tree& t1, const Tree& t2) {
    if (!(t1.taxa() == t2.taxa())) throw LabelError("trees have different leaf sets");
    const auto a = quartet_topologies(t1);
    const auto b = quartet_topologies(t2);
    std::int64_t d = 0;
    for (std::size_t r = 0; r < a.size(); ++r) d += a[r] != b[r];
    return d;
}

QuadsetDominance classify_counts(const Counts& f) {
    QuadsetDominance out;
    const auto hi = std::max({f[0], f[1], f[2]});
    const auto lo = std::min({f[0], f[1], f[2]});
    int at_lo = 0;
    for (std::size_t t = 0; t < 3; ++t) {
        out.dominant[t] = f[t] == hi;
        out.dominant_count = static_cast<std::uint8_t>(out.dominant_count + (f[t] == hi));
        at_lo += f[t] == lo;
    }
    for (std::size_t t = 0; t < 3; ++t) {
        out.strictly_dominant[t] = out.dominant[t] && out.dominant_count == 1;
        out.strictly_least_frequent[t] = f[t] == lo && at_lo == 1;
    }
    return out;
}

DominanceClass classify_dominance(const QuartetTable& table) {
    DominanceClass out;
    out.quadsets.reserve(table.size());
    for (std::size_t r = 0; r < table.size(); ++r) {
        out.quadsets.push_back(classify_counts(table.counts(r)));
        out.with_dominant_count[out.quadsets.back().dominant_count - 1u] += 1;
    }
    return out;
}

void write_table(std::ostream& os, const QuartetTable& table) {
    const auto& taxa = table.taxa();
    for (const auto& q : lexicographic_quadsets(table.taxon_count())) {
        const auto& f = table.counts(q);
        os << taxa.label(q[0]) << '\t' << taxa.label(q[1]) << '\t' << taxa.label(q[2]) << '\t' << taxa.label(q[3]) << '\t'
           << f[0] << '\t' << f[1] << '\t' << f[2] << '\n';
    }
}

QuartetTable read_table(std::istream& is) {
    struct Row {
        std::array<std::string, 4> labels;
        Counts f;
        int line;
    };
    std::vector<Row> rows;
    std::vector<std::string> order;
    std::unordered_map<std::string, int> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> fields;
        for (std::string f; ls >> f;) fields.push_back(f);
        if (fields.empty() || fields.front().front() == '#') continue;
        if (fields.size() != 7) throw Error("line " + std::to_string(line_no) + ": expected 4 labels and 3 counts");
        Row row{};
        row.line = line_no;
        for (std::size_t i = 0; i < 4; ++i) {
            row.labels[i] = fields[i];
            if (seen.emplace(fields[i], static_cast<int>(order.size())).second) order.push_back(fields[i]);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& s = fields[4 + i];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), row.f[i]);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw Error("line " + std::to_string(line_no) + ": invalid count '" + s + "'");
        }
        rows.push_back(std::move(row));
    }
    auto taxa = make_taxa(order);
    const int n = taxa->size();
    if (n < 4) throw Error("a quartet table needs at least four taxa");
    std::vector<Counts> counts(static_cast<std::size_t>(quadset_count(n)));
    std::vector<char> filled(counts.size(), 0);
    for (const auto& row : rows) {
        Quadset q{};
        for (std::size_t i = 0; i < 4; ++i) q[i] = taxa->index(row.labels[i]);
        if (!(q[0] < q[1] && q[1] < q[2] && q[2] < q[3]))
            throw Error("line " + std::to_string(row.line) + ": quadset labels are not in canonical order");
        const auto r = quadset_rank(q);
        if (filled[r]) throw Error("line " + std::to_string(row.line) + ": duplicate quadset");
        filled[r] = 1;
        counts[r] = row.f;
    }
    if (std::find(filled.begin(), filled.end(), 0) != filled.end()) throw Error("quartet table does not cover every quadset");
    return QuartetTable(std::move(taxa), std::move(counts));
}

} // namespace wqc
