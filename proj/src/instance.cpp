#include "wqc/instance.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "wqc/error.hpp"

namespace wqc {

WqcInstance::WqcInstance(TaxaPtr taxa, std::vector<WeightedTree> trees) : taxa_(std::move(taxa)), trees_(std::move(trees)) {
    if (!taxa_) throw Error("instance needs a taxon set");
    for (const auto& wt : trees_) {
        if (wt.multiplicity < 1) throw Error("tree multiplicity must be at least 1");
        if (!(wt.tree.taxa() == *taxa_)) throw LabelError("tree leaf set does not match the instance taxa");
        if (wt.tree.rooted() || !wt.tree.is_binary()) throw Error("instance trees must be binary and unrooted");
    }
}

std::int64_t WqcInstance::total_multiplicity() const {
    std::int64_t k = 0;
    for (const auto& wt : trees_) k += wt.multiplicity;
    return k;
}

namespace {
std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace

WqcInstance read_instance(std::istream& is, TaxaPtr taxa) {
    std::vector<WeightedTree> trees;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::int64_t mult = 1;
        if (auto tab = body.find('\t'); tab != std::string_view::npos) {
            auto head = trim(body.substr(0, tab));
            auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), mult);
            if (ec != std::errc() || ptr != head.data() + head.size())
                throw Error("line " + std::to_string(line_no) + ": invalid multiplicity '" + std::string(head) + "'");
            body = trim(body.substr(tab + 1));
        }
        try {
            NewickOptions opts;
            opts.taxa = taxa;
            Tree t = parse_newick(body, opts);
            if (!taxa) taxa = t.taxa_ptr();
            trees.push_back({std::move(t), mult});
        } catch (const Error& e) {
            throw Error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (trees.empty()) throw Error("instance contains no trees");
    return WqcInstance(std::move(taxa), std::move(trees));
}

WqcInstance parse_instance(const std::string& text, TaxaPtr taxa) {
    std::istringstream is(text);
    return read_instance(is, std::move(taxa));
}

void write_instance(std::ostream& os, const WqcInstance& inst) {
    for (const auto& wt : inst.trees()) os << wt.multiplicity << '\t' << to_newick(wt.tree) << '\n';
}

} // namespace wqc
