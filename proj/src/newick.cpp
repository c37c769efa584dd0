#include <algorithm>
#include <cctype>
#include <sstream>

#include "wqc/error.hpp"
#include "wqc/tree.hpp"

namespace wqc {

namespace {

struct ParsedNode {
    std::string label;
    std::vector<int> children;
    std::size_t position = 0;
};

class NewickParser {
public:
    explicit NewickParser(std::string_view text) : text_(text) {}

    std::vector<ParsedNode> parse() {
        skip_blank();
        subtree();
        skip_blank();
        expect(';');
        skip_blank();
        if (pos_ != text_.size()) fail("trailing characters after ';'");
        return std::move(nodes_);
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw NewickError(what, pos_); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void expect(char c) {
        if (peek() != c) {
            if (at_end()) fail(std::string("unexpected end of input, expected '") + c + "'");
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    void skip_blank() {
        while (!at_end()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                ++pos_;
            } else if (peek() == '[') {
                auto close = text_.find(']', pos_);
                if (close == std::string_view::npos) fail("unterminated comment");
                pos_ = close + 1;
            } else {
                break;
            }
        }
    }

    static bool is_label_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && std::string_view("()[]':;,").find(c) == std::string_view::npos;
    }

    std::string label() {
        skip_blank();
        std::string out;
        if (peek() == '\'') {
            ++pos_;
            while (true) {
                if (at_end()) fail("unterminated quoted label");
                if (peek() == '\'') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
                        out.push_back('\'');
                        pos_ += 2;
                        continue;
                    }
                    ++pos_;
                    break;
                }
                out.push_back(text_[pos_++]);
            }
        } else {
            while (!at_end() && is_label_char(peek())) out.push_back(text_[pos_++]);
        }
        skip_blank();
        return out;
    }

    void branch_length() {
        skip_blank();
        if (peek() != ':') return;
        ++pos_;
        skip_blank();
        const std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || std::string_view("+-.eE").find(peek()) != std::string_view::npos)) ++pos_;
        if (pos_ == start) fail("expected branch length");
        skip_blank();
    }

    int subtree() {
        skip_blank();
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(ParsedNode{{}, {}, pos_});
        if (peek() == '(') {
            ++pos_;
            while (true) {
                const int child = subtree();
                nodes_[static_cast<std::size_t>(id)].children.push_back(child);
                skip_blank();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                if (peek() == ')') {
                    nodes_[static_cast<std::size_t>(id)].position = pos_;
                    ++pos_;
                    break;
                }
                if (at_end()) fail("unbalanced parenthesis");
                fail("expected ',' or ')'");
            }
            label();  // internal labels are ignored
        } else {
            std::string name = label();
            if (name.empty()) fail("expected a label or '('");
            nodes_[static_cast<std::size_t>(id)].label = std::move(name);
        }
        branch_length();
        return id;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<ParsedNode> nodes_;
};

bool needs_quotes(const std::string& label) {
    return std::any_of(label.begin(), label.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || std::string_view("()[]':;,").find(c) != std::string_view::npos;
    });
}

void write_label(std::ostringstream& os, const std::string& label) {
    if (!needs_quotes(label)) {
        os << label;
        return;
    }
    os << '\'';
    for (char c : label) {
        if (c == '\'') os << '\'';
        os << c;
    }
    os << '\'';
}

} // namespace

Tree parse_newick(std::string_view text, const NewickOptions& options) {
    auto nodes = NewickParser(text).parse();

    std::vector<int> leaves;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        if (nodes[static_cast<std::size_t>(i)].children.empty()) leaves.push_back(i);

    TaxaPtr taxa = options.taxa;
    if (!taxa) {
        std::vector<std::string> labels;
        for (int v : leaves) labels.push_back(nodes[static_cast<std::size_t>(v)].label);
        taxa = make_taxa(std::move(labels));  // throws on duplicates
    }
    const int n = taxa->size();

    std::vector<int> id(nodes.size(), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (int v : leaves) {
        const auto& name = nodes[static_cast<std::size_t>(v)].label;
        const int t = taxa->index(name);
        if (used[static_cast<std::size_t>(t)]) throw LabelError("duplicate taxon label '" + name + "'");
        used[static_cast<std::size_t>(t)] = 1;
        id[static_cast<std::size_t>(v)] = t;
    }
    for (int t = 0; t < n; ++t)
        if (!used[static_cast<std::size_t>(t)]) throw LabelError("missing taxon label '" + taxa->label(t) + "'");

    const ParsedNode& top = nodes.front();
    if (top.children.empty()) {
        if (!options.rooted) throw NewickError("an unrooted tree needs at least two leaves", top.position);
        return Tree(std::move(taxa), {{}}, 0);
    }

    for (std::size_t v = 0; v < nodes.size(); ++v) {
        const auto k = nodes[v].children.size();
        if (k == 1) throw NewickError("node with a single child", nodes[v].position);
        if (!options.require_binary || k == 0) continue;
        const bool top_node = v == 0;
        const bool ok = top_node ? (k == 2 || (k == 3 && !options.rooted)) : k == 2;
        if (!ok) throw NewickError("non-binary internal node", nodes[v].position);
    }

    const bool suppress = !options.rooted && top.children.size() == 2;
    int next = n;
    for (std::size_t v = 0; v < nodes.size(); ++v)
        if (!nodes[v].children.empty() && !(v == 0 && suppress)) id[v] = next++;

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(next));
    auto link = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    };
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (v == 0 && suppress) continue;
        for (int c : nodes[v].children) link(id[v], id[static_cast<std::size_t>(c)]);
    }
    if (suppress) link(id[static_cast<std::size_t>(top.children[0])], id[static_cast<std::size_t>(top.children[1])]);

    std::optional<int> root;
    if (options.rooted) root = id[0];
    return Tree(std::move(taxa), std::move(adj), root);
}

std::string to_newick(const Tree& t) {
    std::ostringstream os;
    const int n = t.leaf_count();
    if (n == 1) {
        write_label(os, t.taxa().label(0));
        os << ';';
        return os.str();
    }
    int top;
    if (t.rooted())
        top = t.root();
    else if (n == 2)
        top = -1;
    else
        top = t.neighbors(0).front();

    if (top < 0) {
        os << '(';
        write_label(os, t.taxa().label(0));
        os << ',';
        write_label(os, t.taxa().label(1));
        os << ");";
        return os.str();
    }

    const Rooting r = hang(t, top);
    std::vector<int> smallest(static_cast<std::size_t>(t.node_count()), n);
    for (auto it = r.preorder.rbegin(); it != r.preorder.rend(); ++it) {
        const int v = *it;
        if (t.is_leaf(v)) smallest[static_cast<std::size_t>(v)] = v;
        const int p = r.parent[static_cast<std::size_t>(v)];
        if (p >= 0) smallest[static_cast<std::size_t>(p)] = std::min(smallest[static_cast<std::size_t>(p)], smallest[static_cast<std::size_t>(v)]);
    }

    auto write = [&](auto&& self, int v) -> void {
        if (t.is_leaf(v)) {
            write_label(os, t.taxa().label(v));
            return;
        }
        std::vector<int> kids;
        for (int u : t.neighbors(v))
            if (u != r.parent[static_cast<std::size_t>(v)]) kids.push_back(u);
        std::sort(kids.begin(), kids.end(), [&](int a, int b) { return smallest[static_cast<std::size_t>(a)] < smallest[static_cast<std::size_t>(b)]; });
        os << '(';
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i) os << ',';
            self(self, kids[i]);
        }
        os << ')';
    };
    write(write, top);
    os << ';';
    return os.str();
}

} // namespace wqc
