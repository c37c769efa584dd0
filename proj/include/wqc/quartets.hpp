#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wqc/tree.hpp"

namespace wqc {

class WqcInstance;

/// Quadset {a<b<c<d} of taxon indices.
using Quadset = std::array<int, 4>;

/// Topology index of a quadset: 0 = ab|cd, 1 = ac|bd, 2 = ad|bc.
using Topology = int;

namespace detail {
struct SmallBinomials {
    static constexpr int kRows = 257;
    std::uint64_t value[kRows][5]{};
    constexpr SmallBinomials() {
        for (int n = 0; n < kRows; ++n) {
            value[n][0] = 1;
            for (int k = 1; k <= 4 && k <= n; ++k) value[n][k] = value[n - 1][k - 1] + (k <= n - 1 ? value[n - 1][k] : 0);
        }
    }
};
inline constexpr SmallBinomials kSmallBinomials{};
std::uint64_t binomial_slow(int n, int k);
} // namespace detail

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < k) return 0;
    if (k <= 4 && n < detail::SmallBinomials::kRows) return detail::kSmallBinomials.value[n][k];
    return detail::binomial_slow(n, k);
}
inline std::uint64_t quadset_count(int n) { return binomial(n, 4); }

/// Colexicographic rank of a sorted quadset. Dense in [0, C(n,4)).
inline std::size_t quadset_rank(int a, int b, int c, int d) {
    return static_cast<std::size_t>(binomial(a, 1) + binomial(b, 2) + binomial(c, 3) + binomial(d, 4));
}
inline std::size_t quadset_rank(const Quadset& q) { return quadset_rank(q[0], q[1], q[2], q[3]); }
Quadset quadset_unrank(std::size_t rank);

/// Quadsets in lexicographic order (the canonical dump order).
std::vector<Quadset> lexicographic_quadsets(int n);

/// Topology that pairs positions i and j (0..3) of a sorted quadset.
Topology topology_pairing(int i, int j);

struct Quartet {
    Quadset taxa;
    Topology topology = 0;

    friend bool operator==(const Quartet&, const Quartet&) = default;
    friend auto operator<=>(const Quartet&, const Quartet&) = default;
};

/// "ab|cd" for single-character labels, "a,b|c,d" otherwise.
std::string format_quartet(const TaxonSet& taxa, const Quartet& q);

/// Topology of every quadset of a binary unrooted tree, indexed by rank.
std::vector<std::uint8_t> quartet_topologies(const Tree& t);

/// Q(t): one quartet per quadset, lexicographic order.
std::vector<Quartet> quartets_of_tree(const Tree& t);

/// Topology of a binary unrooted tree on exactly four leaves.
Topology four_leaf_topology(const Tree& t);

using Counts = std::array<std::int64_t, 3>;

/// Per-quadset frequency triple f_Q over a fixed taxon set.
class QuartetTable {
public:
    /// All triples must share one sum, which becomes total().
    QuartetTable(TaxaPtr taxa, std::vector<Counts> counts);

    const TaxonSet& taxa() const noexcept { return *taxa_; }
    const TaxaPtr& taxa_ptr() const noexcept { return taxa_; }
    int taxon_count() const noexcept { return taxa_->size(); }
    std::size_t size() const noexcept { return counts_.size(); }

    const Counts& counts(std::size_t rank) const { return counts_[rank]; }
    const Counts& counts(const Quadset& q) const { return counts_[quadset_rank(q)]; }
    std::int64_t frequency(const Quartet& q) const { return counts(q.taxa)[static_cast<std::size_t>(q.topology)]; }

    /// k, the total tree multiplicity.
    std::int64_t total() const noexcept { return total_; }
    /// N = k * C(n, 4).
    std::int64_t quartet_total() const noexcept { return total_ * static_cast<std::int64_t>(counts_.size()); }

private:
    TaxaPtr taxa_;
    std::vector<Counts> counts_;
    std::int64_t total_ = 0;
};

QuartetTable build_table(const WqcInstance& inst);

/// Sum over quadsets of the count of m's topology.
std::int64_t score(const QuartetTable& table, const Tree& m);
std::int64_t score(const QuartetTable& table, const std::vector<std::uint8_t>& topologies);

/// d_Q: number of quadsets on which the two trees differ.
std::int64_t quartet_distance(const Tree& t1, const Tree& t2);

struct QuadsetDominance {
    std::uint8_t dominant_count = 0;                 // size of the argmax set
    std::array<bool, 3> dominant{};                  // membership in the argmax set
    std::array<bool, 3> strictly_dominant{};         // unique argmax
    std::array<bool, 3> strictly_least_frequent{};   // unique argmin
};

struct DominanceClass {
    std::vector<QuadsetDominance> quadsets;  // by rank
    std::array<std::int64_t, 3> with_dominant_count{};  // quadsets with exactly 1, 2, 3 dominant topologies
};

QuadsetDominance classify_counts(const Counts& f);
DominanceClass classify_dominance(const QuartetTable& table);

/// Tab-separated dump: one line `a b c d f0 f1 f2` per quadset in canonical order.
void write_table(std::ostream& os, const QuartetTable& table);
/// Reads a dump back. Taxa are ordered by first appearance; `#` lines are skipped.
QuartetTable read_table(std::istream& is);

} // namespace wqc
