#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wqc/instance.hpp"
#include "wqc/quartets.hpp"

namespace wqc {

/// Element set S and ordered triples over it (element indices).
struct CyclicOrderingInstance {
    std::vector<std::string> elements;
    std::vector<std::array<int, 3>> triples;

    int element_count() const { return static_cast<int>(elements.size()); }
};

/// Checks that every triple is over distinct known elements and |S| >= 3.
void validate(const CyclicOrderingInstance& co);

/// File format: first line `n m`, then one triple `a b c` per line. Elements
/// are taken in order of first appearance and padded with fresh names up to n.
CyclicOrderingInstance read_cyclic_ordering(std::istream& is);
void write_cyclic_ordering(std::ostream& os, const CyclicOrderingInstance& co);

struct TripleReport {
    bool satisfied;
    /// How many of a<b, b<c, c<a hold; exactly two iff satisfied.
    int relations_holding;
};

struct SatisfactionReport {
    bool satisfied;
    std::vector<TripleReport> triples;
};

/// `ordering` lists element indices from first to last.
SatisfactionReport satisfies(const CyclicOrderingInstance& co, std::span<const int> ordering);

/// Provenance of one gadget tree: the triple it came from and its designated
/// ordered pair (first, second), placed next to W or next to Z.
struct GadgetTree {
    int triple;
    std::array<int, 2> pair;
    bool reversed;
};

/// The 6m trees built from a cyclic-ordering instance. Taxa are S in element
/// order, then w1..wW, then z1..zW; element i is taxon i.
struct GadgetInstance {
    CyclicOrderingInstance source;
    WqcInstance wqc;
    int w_size;
    std::vector<int> w_taxa;
    std::vector<int> z_taxa;
    std::vector<GadgetTree> provenance;
    std::int64_t K;
    std::int64_t O_bound;
    std::int64_t threshold;  // K + O_bound + 4 m |W| |Z|
};

GadgetInstance build_gadget(const CyclicOrderingInstance& co, int w_size = 4);

/// (W | s_1 | ... | s_n | Z) for an ordering of the elements.
Tree ordering_caterpillar(const GadgetInstance& g, std::span<const int> ordering);

enum class QuartetClass { B, in, out, other };
std::string class_name(QuartetClass c);

/// Class of a quartet with respect to the indexed gadget tree.
QuartetClass classify_quartet(const GadgetInstance& g, std::size_t tree_index, const Quartet& q);

struct CandidateBreakdown {
    std::int64_t B = 0;
    std::int64_t in = 0;
    std::int64_t out = 0;
    std::int64_t other = 0;
    std::int64_t total = 0;
    bool meets_threshold = false;
};

/// Quartets of the gadget multiset displayed by M, split by class.
CandidateBreakdown evaluate_candidate(const GadgetInstance& g, const Tree& m);

/// Element order along the spine of a (W,Z)-augmented caterpillar, read from
/// the W end; elements hanging off one spine node come in element order.
std::optional<std::vector<int>> extract_ordering(const GadgetInstance& g, const Tree& m);

/// Sidecar document {K, O, threshold, w_size, ...} written next to the trees.
nlohmann::json gadget_sidecar(const GadgetInstance& g);
/// Rebuilds the gadget from its trees and sidecar.
GadgetInstance load_gadget(const WqcInstance& trees, const nlohmann::json& sidecar);

} // namespace wqc
