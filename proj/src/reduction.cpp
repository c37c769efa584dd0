#include "wqc/reduction.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "wqc/error.hpp"

namespace wqc {

void validate(const CyclicOrderingInstance& co) {
    const int n = co.element_count();
    if (n < 3) throw Error("a cyclic-ordering instance needs at least three elements");
    make_taxa(co.elements);  // distinct, non-empty
    for (const auto& t : co.triples) {
        for (int x : t)
            if (x < 0 || x >= n) throw Error("triple references an unknown element");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw Error("triple elements must be distinct");
    }
}

CyclicOrderingInstance read_cyclic_ordering(std::istream& is) {
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::vector<std::string> fields;
        for (std::string f; ls >> f;) fields.push_back(f);
        if (fields.empty() || fields.front().front() == '#') continue;
        lines.push_back(std::move(fields));
    }
    if (lines.empty() || lines.front().size() != 2) throw Error("expected a header line `n m`");
    int n = 0;
    int m = 0;
    try {
        n = std::stoi(lines[0][0]);
        m = std::stoi(lines[0][1]);
    } catch (const std::exception&) {
        throw Error("header line must hold two integers");
    }
    if (n < 3 || m < 0) throw Error("header values out of range");
    if (static_cast<int>(lines.size()) - 1 != m) throw Error("expected " + std::to_string(m) + " triples, found " + std::to_string(lines.size() - 1));

    CyclicOrderingInstance co;
    std::unordered_map<std::string, int> index;
    auto element = [&](const std::string& label) {
        auto [it, fresh] = index.emplace(label, static_cast<int>(co.elements.size()));
        if (fresh) co.elements.push_back(label);
        return it->second;
    };
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].size() != 3) throw Error("triple " + std::to_string(i) + " must list three elements");
        co.triples.push_back({element(lines[i][0]), element(lines[i][1]), element(lines[i][2])});
    }
    if (co.element_count() > n) throw Error("triples use more than n distinct elements");
    for (int fresh = 1; co.element_count() < n; ++fresh) {
        const auto name = "s" + std::to_string(fresh);
        if (!index.count(name)) element(name);
    }
    validate(co);
    return co;
}

void write_cyclic_ordering(std::ostream& os, const CyclicOrderingInstance& co) {
    os << co.element_count() << ' ' << co.triples.size() << '\n';
    for (const auto& t : co.triples) os << co.elements[static_cast<std::size_t>(t[0])] << ' ' << co.elements[static_cast<std::size_t>(t[1])] << ' ' << co.elements[static_cast<std::size_t>(t[2])] << '\n';
}

SatisfactionReport satisfies(const CyclicOrderingInstance& co, std::span<const int> ordering) {
    const int n = co.element_count();
    std::vector<int> pos(static_cast<std::size_t>(n), -1);
    if (static_cast<int>(ordering.size()) != n) throw Error("ordering is not a permutation of the elements");
    for (std::size_t i = 0; i < ordering.size(); ++i) {
        const int x = ordering[i];
        if (x < 0 || x >= n || pos[static_cast<std::size_t>(x)] >= 0) throw Error("ordering is not a permutation of the elements");
        pos[static_cast<std::size_t>(x)] = static_cast<int>(i);
    }
    SatisfactionReport out{true, {}};
    for (const auto& [a, b, c] : co.triples) {
        const int pa = pos[static_cast<std::size_t>(a)];
        const int pb = pos[static_cast<std::size_t>(b)];
        const int pc = pos[static_cast<std::size_t>(c)];
        const bool ok = (pa < pb && pb < pc) || (pb < pc && pc < pa) || (pc < pa && pa < pb);
        const int relations = (pa < pb) + (pb < pc) + (pc < pa);
        out.triples.push_back({ok, relations});
        out.satisfied = out.satisfied && ok;
    }
    return out;
}

namespace {

std::vector<std::string> side_labels(char prefix, int count) {
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

Tree side_piece(const std::vector<std::string>& labels) { return rooted_caterpillar(labels); }

Tree gadget_tree(const GadgetInstance& g, const TaxaPtr& taxa, int first, int second, bool reversed) {
    const auto& s = g.source.elements;
    std::vector<Tree> pieces;
    std::vector<std::string> w_labels;
    std::vector<std::string> z_labels;
    for (int t : g.w_taxa) w_labels.push_back(taxa->label(t));
    for (int t : g.z_taxa) z_labels.push_back(taxa->label(t));
    pieces.push_back(side_piece(w_labels));
    std::vector<int> filler;
    for (int e = 0; e < g.source.element_count(); ++e)
        if (e != first && e != second) filler.push_back(e);
    if (!reversed) {
        pieces.push_back(leaf_tree(s[static_cast<std::size_t>(first)]));
        pieces.push_back(leaf_tree(s[static_cast<std::size_t>(second)]));
        for (int e : filler) pieces.push_back(leaf_tree(s[static_cast<std::size_t>(e)]));
    } else {
        for (auto it = filler.rbegin(); it != filler.rend(); ++it) pieces.push_back(leaf_tree(s[static_cast<std::size_t>(*it)]));
        pieces.push_back(leaf_tree(s[static_cast<std::size_t>(first)]));
        pieces.push_back(leaf_tree(s[static_cast<std::size_t>(second)]));
    }
    pieces.push_back(side_piece(z_labels));
    return build_caterpillar(pieces, taxa);
}

enum class Kind : std::uint8_t { s, w, z };

struct Labeling {
    std::vector<Kind> kind;
};

Labeling labeling(const GadgetInstance& g) {
    Labeling out;
    out.kind.assign(static_cast<std::size_t>(g.wqc.taxa().size()), Kind::s);
    for (int t : g.w_taxa) out.kind[static_cast<std::size_t>(t)] = Kind::w;
    for (int t : g.z_taxa) out.kind[static_cast<std::size_t>(t)] = Kind::z;
    return out;
}

QuartetClass classify(const Labeling& lab, const std::array<int, 2>& pair, const Quartet& q) {
    int ws = 0;
    int zs = 0;
    for (int x : q.taxa) {
        ws += lab.kind[static_cast<std::size_t>(x)] == Kind::w;
        zs += lab.kind[static_cast<std::size_t>(x)] == Kind::z;
    }
    if (ws >= 2 || zs >= 2) return QuartetClass::B;
    if (ws != 1 || zs != 1) return QuartetClass::other;
    static constexpr int kPairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    const auto* p = kPairs[q.topology];
    std::array<int, 2> first{q.taxa[static_cast<std::size_t>(p[0])], q.taxa[static_cast<std::size_t>(p[1])]};
    std::array<int, 2> second{q.taxa[static_cast<std::size_t>(p[2])], q.taxa[static_cast<std::size_t>(p[3])]};
    auto kind = [&](int x) { return lab.kind[static_cast<std::size_t>(x)]; };
    if (kind(second[0]) == Kind::w || kind(second[1]) == Kind::w) std::swap(first, second);
    if (kind(first[0]) != Kind::w && kind(first[1]) != Kind::w) return QuartetClass::other;
    const int x = kind(first[0]) == Kind::w ? first[1] : first[0];
    if (kind(x) != Kind::s) return QuartetClass::other;  // w paired with z
    const int y = kind(second[0]) == Kind::z ? second[1] : second[0];
    if (x == pair[0] && y == pair[1]) return QuartetClass::in;
    if (x == pair[1] && y == pair[0]) return QuartetClass::other;
    return QuartetClass::out;
}

} // namespace

GadgetInstance build_gadget(const CyclicOrderingInstance& co, int w_size) {
    validate(co);
    if (w_size < 1) throw Error("w_size must be at least 1");
    if (co.triples.empty()) throw Error("the gadget needs at least one triple");
    const int n = co.element_count();
    const auto m = static_cast<std::int64_t>(co.triples.size());
    std::vector<std::string> labels = co.elements;
    const auto wl = side_labels('w', w_size);
    const auto zl = side_labels('z', w_size);
    labels.insert(labels.end(), wl.begin(), wl.end());
    labels.insert(labels.end(), zl.begin(), zl.end());
    auto taxa = make_taxa(labels);  // throws if an element is named like a side leaf

    GadgetInstance g{co, WqcInstance(taxa, {}), w_size, {}, {}, {}, 0, 0, 0};
    for (int i = 0; i < w_size; ++i) {
        g.w_taxa.push_back(n + i);
        g.z_taxa.push_back(n + w_size + i);
    }
    std::vector<WeightedTree> trees;
    for (std::size_t t = 0; t < co.triples.size(); ++t) {
        const auto [a, b, c] = co.triples[t];
        for (const auto& [first, second] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}})
            for (bool reversed : {false, true}) {
                trees.push_back({gadget_tree(g, taxa, first, second, reversed), 1});
                g.provenance.push_back({static_cast<int>(t), {first, second}, reversed});
            }
    }
    g.wqc = WqcInstance(taxa, std::move(trees));

    const auto lab = labeling(g);
    std::int64_t b_count = 0;
    for (const auto& q : quartets_of_tree(g.wqc.trees().front().tree)) b_count += classify(lab, g.provenance.front().pair, q) == QuartetClass::B;
    const std::int64_t ws = w_size;
    const std::int64_t rest = n - 2;
    g.K = 6 * m * b_count;
    g.O_bound = 3 * m * ws * ws * (rest * (rest - 1) / 2 + 2 * rest);
    g.threshold = g.K + g.O_bound + 4 * m * ws * ws;
    return g;
}

Tree ordering_caterpillar(const GadgetInstance& g, std::span<const int> ordering) {
    const auto& taxa = g.wqc.taxa_ptr();
    std::vector<Tree> pieces;
    std::vector<std::string> w_labels;
    std::vector<std::string> z_labels;
    for (int t : g.w_taxa) w_labels.push_back(taxa->label(t));
    for (int t : g.z_taxa) z_labels.push_back(taxa->label(t));
    pieces.push_back(side_piece(w_labels));
    for (int e : ordering) pieces.push_back(leaf_tree(g.source.elements.at(static_cast<std::size_t>(e))));
    pieces.push_back(side_piece(z_labels));
    return build_caterpillar(pieces, taxa);
}

std::string class_name(QuartetClass c) {
    switch (c) {
    case QuartetClass::B: return "B";
    case QuartetClass::in: return "in";
    case QuartetClass::out: return "out";
    case QuartetClass::other: return "other";
    }
    return "other";
}

QuartetClass classify_quartet(const GadgetInstance& g, std::size_t tree_index, const Quartet& q) {
    return classify(labeling(g), g.provenance.at(tree_index).pair, q);
}

CandidateBreakdown evaluate_candidate(const GadgetInstance& g, const Tree& m) {
    if (!(m.taxa() == g.wqc.taxa())) throw LabelError("candidate leaf set does not match the gadget");
    const auto lab = labeling(g);
    const auto mine = quartet_topologies(m);
    CandidateBreakdown out;
    for (std::size_t i = 0; i < g.wqc.trees().size(); ++i) {
        const auto& wt = g.wqc.trees()[i];
        const auto theirs = quartet_topologies(wt.tree);
        for (std::size_t r = 0; r < mine.size(); ++r) {
            if (mine[r] != theirs[r]) continue;
            const auto cls = classify(lab, g.provenance[i].pair, Quartet{quadset_unrank(r), mine[r]});
            auto& slot = cls == QuartetClass::B ? out.B : cls == QuartetClass::in ? out.in : cls == QuartetClass::out ? out.out : out.other;
            slot += wt.multiplicity;
        }
    }
    out.total = out.B + out.in + out.out + out.other;
    out.meets_threshold = out.total >= g.threshold;
    return out;
}

std::optional<std::vector<int>> extract_ordering(const GadgetInstance& g, const Tree& m) {
    if (!(m.taxa() == g.wqc.taxa())) throw LabelError("candidate leaf set does not match the gadget");
    if (!is_wz_augmented_caterpillar(m, g.w_taxa, g.z_taxa)) return std::nullopt;
    const int n = m.leaf_count();
    // Hang from a W leaf: W is then the complement of some subtree.
    const Rooting r = hang(m, g.w_taxa.front());
    std::vector<std::vector<char>> below(static_cast<std::size_t>(m.node_count()), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (auto it = r.preorder.rbegin(); it != r.preorder.rend(); ++it) {
        const int v = *it;
        if (m.is_leaf(v)) below[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = 1;
        const int p = r.parent[static_cast<std::size_t>(v)];
        if (p < 0) continue;
        for (int x = 0; x < n; ++x) below[static_cast<std::size_t>(p)][static_cast<std::size_t>(x)] |= below[static_cast<std::size_t>(v)][static_cast<std::size_t>(x)];
    }
    std::vector<char> w_set(static_cast<std::size_t>(n), 0);
    std::vector<char> z_set(static_cast<std::size_t>(n), 0);
    for (int t : g.w_taxa) w_set[static_cast<std::size_t>(t)] = 1;
    for (int t : g.z_taxa) z_set[static_cast<std::size_t>(t)] = 1;
    std::vector<char> not_w(w_set.size());
    for (std::size_t i = 0; i < w_set.size(); ++i) not_w[i] = !w_set[i];
    int start = -1;
    int z_root = -1;
    for (int v = 0; v < m.node_count(); ++v) {
        if (below[static_cast<std::size_t>(v)] == not_w) start = v;
        if (below[static_cast<std::size_t>(v)] == z_set) z_root = v;
    }
    if (start < 0 || z_root < 0) return std::nullopt;
    std::vector<int> spine;
    for (int v = r.parent[static_cast<std::size_t>(z_root)]; v >= 0; v = r.parent[static_cast<std::size_t>(v)]) {
        spine.push_back(v);
        if (v == start) break;
    }
    if (spine.empty() || spine.back() != start) return std::nullopt;
    std::reverse(spine.begin(), spine.end());

    std::vector<int> order;
    for (std::size_t i = 0; i < spine.size(); ++i) {
        const int v = spine[i];
        const int on_path = i + 1 < spine.size() ? spine[i + 1] : z_root;
        std::vector<int> hanging;
        for (int u : m.neighbors(v)) {
            if (u == r.parent[static_cast<std::size_t>(v)] || u == on_path) continue;
            for (int x = 0; x < n; ++x)
                if (below[static_cast<std::size_t>(u)][static_cast<std::size_t>(x)]) hanging.push_back(x);
        }
        std::sort(hanging.begin(), hanging.end());
        order.insert(order.end(), hanging.begin(), hanging.end());
    }
    return order;
}

nlohmann::json gadget_sidecar(const GadgetInstance& g) {
    nlohmann::json prov = nlohmann::json::array();
    const auto& s = g.source.elements;
    for (const auto& p : g.provenance) {
        const auto& t = g.source.triples[static_cast<std::size_t>(p.triple)];
        prov.push_back({{"triple", {s[static_cast<std::size_t>(t[0])], s[static_cast<std::size_t>(t[1])], s[static_cast<std::size_t>(t[2])]}},
                        {"pair", {s[static_cast<std::size_t>(p.pair[0])], s[static_cast<std::size_t>(p.pair[1])]}},
                        {"orientation", p.reversed ? "reversed" : "ordered"}});
    }
    std::vector<std::string> w;
    std::vector<std::string> z;
    for (int t : g.w_taxa) w.push_back(g.wqc.taxa().label(t));
    for (int t : g.z_taxa) z.push_back(g.wqc.taxa().label(t));
    return {{"K", g.K},
            {"O", g.O_bound},
            {"threshold", g.threshold},
            {"w_size", g.w_size},
            {"elements", s},
            {"w_labels", w},
            {"z_labels", z},
            {"provenance", prov}};
}

GadgetInstance load_gadget(const WqcInstance& trees, const nlohmann::json& sidecar) {
    try {
        CyclicOrderingInstance co;
        co.elements = sidecar.at("elements").get<std::vector<std::string>>();
        std::unordered_map<std::string, int> index;
        for (std::size_t i = 0; i < co.elements.size(); ++i) index[co.elements[i]] = static_cast<int>(i);
        auto element = [&](const nlohmann::json& j) {
            auto it = index.find(j.get<std::string>());
            if (it == index.end()) throw Error("sidecar references an unknown element");
            return it->second;
        };
        const auto& prov = sidecar.at("provenance");
        if (prov.size() != trees.size()) throw Error("sidecar provenance does not match the tree count");
        if (prov.size() % 6 != 0) throw Error("sidecar provenance must hold six trees per triple");
        // Trees come in blocks of six per triple.
        std::vector<GadgetTree> provenance;
        for (std::size_t i = 0; i < prov.size(); ++i) {
            const auto& p = prov[i];
            if (i % 6 == 0) co.triples.push_back({element(p.at("triple")[0]), element(p.at("triple")[1]), element(p.at("triple")[2])});
            provenance.push_back({static_cast<int>(i / 6), {element(p.at("pair")[0]), element(p.at("pair")[1])},
                                  p.at("orientation").get<std::string>() == "reversed"});
        }
        const int w_size = sidecar.at("w_size").get<int>();
        GadgetInstance g = build_gadget(co, w_size);
        if (!(g.wqc.taxa() == trees.taxa())) throw Error("gadget trees do not match the sidecar labels");
        for (std::size_t i = 0; i < provenance.size(); ++i) {
            const auto& a = provenance[i];
            const auto& b = g.provenance[i];
            if (a.pair != b.pair || a.reversed != b.reversed)
                throw Error("sidecar provenance is not in construction order");
            if (!isomorphic(g.wqc.trees()[i].tree, trees.trees()[i].tree)) throw Error("gadget tree " + std::to_string(i + 1) + " does not match its provenance");
        }
        if (g.K != sidecar.at("K").get<std::int64_t>() || g.O_bound != sidecar.at("O").get<std::int64_t>() ||
            g.threshold != sidecar.at("threshold").get<std::int64_t>())
            throw Error("sidecar totals do not match the rebuilt gadget");
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed gadget sidecar: ") + e.what());
    }
}

} // namespace wqc
