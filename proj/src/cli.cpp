#include "wqc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wqc/analysis.hpp"
#include "wqc/approx.hpp"
#include "wqc/error.hpp"
#include "wqc/exact.hpp"
#include "wqc/fpt.hpp"
#include "wqc/reduction.hpp"

namespace wqc::cli {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// An input file holds either trees or a quartet table.
struct Input {
    std::optional<WqcInstance> instance;
    std::optional<QuartetTable> table;

    const QuartetTable& quartets() const { return *table; }
    const WqcInstance& trees(const std::string& purpose) const {
        if (!instance) throw Error(purpose + " needs an instance file of trees, not a quartet table");
        return *instance;
    }
};

bool looks_like_trees(const std::string& text) {
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        return line.find('(') != std::string::npos;
    }
    return false;
}

Input load_input(const std::string& path) {
    const auto text = slurp(path);
    Input in;
    if (looks_like_trees(text)) {
        in.instance = parse_instance(text);
        in.table = build_table(*in.instance);
    } else {
        std::istringstream is(text);
        in.table = read_table(is);
    }
    return in;
}

Tree tree_on(const std::string& newick, const TaxaPtr& taxa) {
    NewickOptions options;
    options.taxa = taxa;
    return parse_newick(newick, options);
}

json approx_json(const ApproxResult& r) {
    // Share of the input quartets the tree keeps.
    const auto total = r.wqc_score + r.wmqi_cost;
    return {{"method", method_name(r.method)},
            {"newick", to_newick(r.tree)},
            {"score", r.wqc_score},
            {"cost", r.wmqi_cost},
            {"ratio", total ? static_cast<double>(r.wqc_score) / static_cast<double>(total) : 1.0}};
}

json exact_json(const ExactResult& r) {
    json optima = json::array();
    for (const auto& t : r.optima) optima.push_back(to_newick(t));
    return {{"method", "exact"},
            {"optimum_score", r.optimum_score},
            {"optimum_cost", r.optimum_cost},
            {"quartet_total", r.quartet_total},
            {"optima", optima},
            {"optima_count", r.optima_count},
            {"optima_truncated", r.optima_truncated()},
            {"evaluated_count", r.evaluated_count}};
}

json fpt_json(const FptResult& r, const Budget& b) {
    json solutions = json::array();
    for (const auto& s : r.solutions) solutions.push_back({{"newick", s.newick}, {"weight", s.weight}});
    json out{{"method", "fpt"},
             {"budget", {{"d", b.d_strict}, {"k2", b.k2}, {"k3", b.k3}}},
             {"solutions", solutions},
             {"branches_explored", r.branches_explored}};
    out["best"] = r.best() ? json{{"newick", r.best()->newick}, {"weight", r.best()->weight}} : json(nullptr);
    return out;
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); })) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + scalar_text(x);
        return s;
    }
    return v.dump();
}

bool is_matrix(const json& v) {
    return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& row) {
               return row.is_array() && std::all_of(row.begin(), row.end(), [](const json& x) { return x.is_number(); });
           });
}

/// Key-value rows with aligned keys; numeric matrices as aligned grids.
void write_pretty(std::ostream& os, const json& record) {
    std::size_t width = 0;
    for (const auto& [key, v] : record.items()) width = std::max(width, key.size());
    for (const auto& [key, v] : record.items()) {
        if (is_matrix(v)) {
            std::size_t cell = 1;
            for (const auto& row : v)
                for (const auto& x : row) cell = std::max(cell, x.dump().size());
            os << key << ":\n";
            for (const auto& row : v) {
                for (const auto& x : row) os << ' ' << std::setw(static_cast<int>(cell)) << x.dump();
                os << '\n';
            }
            continue;
        }
        os << std::left << std::setw(static_cast<int>(width)) << key << "  " << scalar_text(v) << '\n';
    }
}

class Printer {
public:
    Printer(std::ostream& os, const bool& pretty) : os_(os), pretty_(pretty) {}

    void operator()(const json& record) {
        if (!pretty_) {
            os_ << record.dump() << '\n';
            return;
        }
        if (printed_) os_ << '\n';
        write_pretty(os_, record);
        printed_ = true;
    }

private:
    std::ostream& os_;
    const bool& pretty_;
    bool printed_ = false;
};

json breakdown_json(const GadgetInstance& g, const Tree& m) {
    const auto b = evaluate_candidate(g, m);
    json out{{"newick", to_newick(m)},
             {"B", b.B},
             {"in", b.in},
             {"out", b.out},
             {"other", b.other},
             {"total", b.total},
             {"K", g.K},
             {"O", g.O_bound},
             {"in_target", 4 * static_cast<std::int64_t>(g.source.triples.size()) * g.w_size * g.w_size},
             {"threshold", g.threshold},
             {"meets_threshold", b.meets_threshold}};
    const auto ordering = extract_ordering(g, m);
    if (ordering) {
        json labels = json::array();
        for (int e : *ordering) labels.push_back(g.source.elements[static_cast<std::size_t>(e)]);
        out["ordering"] = labels;
        out["ordering_satisfies"] = satisfies(g.source, *ordering).satisfied;
    } else {
        out["ordering"] = nullptr;
        out["ordering_satisfies"] = nullptr;
    }
    return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted quartet consensus toolkit", "wqc"};
    app.require_subcommand(1);
    int jobs = 1;
    bool pretty = false;
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));
    app.add_flag("--pretty", pretty, "Aligned human-readable output instead of JSON lines");

    Printer print(out, pretty);
    std::function<void()> action;

    std::string input;
    std::string newick;
    auto add_input = [&](CLI::App* sub) { sub->add_option("-i,--input", input, "Instance file or quartet table")->required()->check(CLI::ExistingFile); };

    auto* score_cmd = app.add_subcommand("score", "WQC score of a tree");
    add_input(score_cmd);
    score_cmd->add_option("-t,--tree", newick, "Newick tree")->required();
    score_cmd->callback([&] {
        action = [&] {
            const auto in = load_input(input);
            const auto& table = in.quartets();
            const Tree m = tree_on(newick, table.taxa_ptr());
            const auto s = score(table, m);
            print({{"newick", to_newick(m)}, {"score", s}, {"cost", table.quartet_total() - s}, {"quartet_total", table.quartet_total()}});
        };
    });

    auto* distance_cmd = app.add_subcommand("distance", "Pairwise quartet distances of the input trees");
    add_input(distance_cmd);
    distance_cmd->callback([&] {
        action = [&] {
            const auto in = load_input(input);
            const auto& inst = in.trees("distance");
            const auto& trees = inst.trees();
            std::vector<std::vector<std::uint8_t>> topo;
            json listed = json::array();
            for (const auto& wt : trees) {
                topo.push_back(quartet_topologies(wt.tree));
                listed.push_back({{"newick", to_newick(wt.tree)}, {"multiplicity", wt.multiplicity}});
            }
            json matrix = json::array();
            for (std::size_t i = 0; i < trees.size(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < trees.size(); ++j) {
                    std::int64_t d = 0;
                    for (std::size_t r = 0; r < topo[i].size(); ++r) d += topo[i][r] != topo[j][r];
                    row.push_back(d);
                }
                matrix.push_back(row);
            }
            print({{"trees", listed}, {"matrix", matrix}});
        };
    });

    std::string method;
    int cap = kDefaultEnumerationCap;
    std::size_t max_optima = 100;
    auto* consensus_cmd = app.add_subcommand("consensus", "Consensus tree by one method");
    add_input(consensus_cmd);
    consensus_cmd->add_option("--method", method, "best-tree, derand, half, exact or fpt")
        ->required()
        ->check(CLI::IsMember({"best-tree", "derand", "half", "exact", "fpt"}));
    consensus_cmd->add_option("--cap", cap, "Largest taxon count for exhaustive search")->check(CLI::Range(4, 12));
    consensus_cmd->add_option("--max-optima", max_optima, "Optimal trees listed by the exact method");
    consensus_cmd->callback([&] {
        action = [&] {
            const auto in = load_input(input);
            if (method == "best-tree") {
                print(approx_json(best_input_tree(in.trees("best-tree"), jobs)));
            } else if (method == "derand") {
                print(approx_json(derandomized_one_third(in.quartets())));
            } else if (method == "half") {
                print(approx_json(half_approximation(in.trees("half"), jobs)));
            } else if (method == "exact") {
                print(exact_json(solve_exact(in.quartets(), {jobs, cap, max_optima})));
            } else {
                // Every quadset may be replaced: the budget never binds.
                const auto all = static_cast<std::int64_t>(in.quartets().size());
                const Budget b{all, all, all};
                print(fpt_json(solve_fpt(in.quartets(), b), b));
            }
        };
    });

    std::optional<std::int64_t> threshold;
    auto* exact_cmd = app.add_subcommand("exact", "Exhaustive optimum, or the decision version with --threshold");
    add_input(exact_cmd);
    exact_cmd->add_option("--threshold", threshold, "Decide whether some tree scores at least this much");
    exact_cmd->add_option("--cap", cap, "Largest taxon count for exhaustive search")->check(CLI::Range(4, 12));
    exact_cmd->add_option("--max-optima", max_optima, "Optimal trees listed");
    exact_cmd->callback([&] {
        action = [&] {
            const auto in = load_input(input);
            if (!threshold) {
                print(exact_json(solve_exact(in.quartets(), {jobs, cap, max_optima})));
                return;
            }
            const auto witness = decide(in.quartets(), *threshold, cap);
            print({{"threshold", *threshold},
                   {"decision", witness.has_value()},
                   {"witness", witness ? json(to_newick(*witness)) : json(nullptr)},
                   {"witness_score", witness ? json(score(in.quartets(), *witness)) : json(nullptr)}});
        };
    });

    Budget budget;
    auto* fpt_cmd = app.add_subcommand("fpt", "Bounded-replacement search from the dominant quartets");
    add_input(fpt_cmd);
    fpt_cmd->add_option("--budget-d", budget.d_strict, "Replacements on quadsets with one dominant topology")->required()->check(CLI::NonNegativeNumber);
    fpt_cmd->add_option("--budget-k2", budget.k2, "Replacements on quadsets with two dominant topologies")->required()->check(CLI::NonNegativeNumber);
    fpt_cmd->add_option("--budget-k3", budget.k3, "Replacements on quadsets with three dominant topologies")->required()->check(CLI::NonNegativeNumber);
    fpt_cmd->callback([&] {
        action = [&] {
            const auto in = load_input(input);
            print(fpt_json(solve_fpt(in.quartets(), budget), budget));
        };
    });

    std::string output;
    int w_size = 4;
    auto* gen_cmd = app.add_subcommand("gen-cyclic", "Gadget instance from a cyclic-ordering instance");
    add_input(gen_cmd);
    gen_cmd->add_option("--w-size", w_size, "Leaves in each of W and Z")->check(CLI::Range(1, 64));
    gen_cmd->add_option("-o,--output", output, "Tree file to write; the sidecar goes to OUTPUT.json")->required();
    gen_cmd->callback([&] {
        action = [&] {
            std::ifstream is(input);
            const auto co = read_cyclic_ordering(is);
            const auto g = build_gadget(co, w_size);
            {
                std::ofstream os(output, std::ios::binary);
                if (!os) throw Error("cannot write " + output);
                write_instance(os, g.wqc);
            }
            {
                std::ofstream os(output + ".json", std::ios::binary);
                if (!os) throw Error("cannot write " + output + ".json");
                os << gadget_sidecar(g).dump(2) << '\n';
            }
            print({{"trees", output},
                   {"sidecar", output + ".json"},
                   {"tree_count", g.wqc.size()},
                   {"taxon_count", g.wqc.taxa().size()},
                   {"w_size", g.w_size},
                   {"K", g.K},
                   {"O", g.O_bound},
                   {"threshold", g.threshold}});
        };
    });

    std::string gadget;
    auto* verify_cmd = app.add_subcommand("verify-gadget", "Quartet class breakdown of a candidate tree on a gadget");
    verify_cmd->add_option("-g,--gadget", gadget, "Tree file written by gen-cyclic")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("-t,--tree", newick, "Candidate Newick tree")->required();
    verify_cmd->callback([&] {
        action = [&] {
            const auto sidecar = json::parse(slurp(gadget + ".json"));
            std::vector<std::string> labels = sidecar.at("elements").get<std::vector<std::string>>();
            for (const char* key : {"w_labels", "z_labels"})
                for (const auto& l : sidecar.at(key)) labels.push_back(l.get<std::string>());
            const auto taxa = make_taxa(labels);
            const auto g = load_gadget(parse_instance(slurp(gadget), taxa), sidecar);
            print(breakdown_json(g, tree_on(newick, taxa)));
        };
    });

    auto* lab = app.add_subcommand("lab", "Dominance conjecture experiments");
    lab->require_subcommand(1);

    auto* lab_verify = lab->add_subcommand("verify", "Evaluate the five conjectures on one instance");
    add_input(lab_verify);
    lab_verify->add_option("--cap", cap, "Largest taxon count for exhaustive search")->check(CLI::Range(4, 12));
    lab_verify->callback([&] {
        action = [&] {
            const auto in = load_input(input);
            const auto reports = in.instance ? verify_conjectures(*in.instance, cap) : verify_conjectures(in.quartets(), cap);
            for (const auto& r : reports) print(to_json(r));
        };
    });

    std::string spec_path;
    std::uint64_t max_candidates = 0;
    auto* lab_realize = lab->add_subcommand("realize", "Find a tree multiset with a prescribed quartet profile");
    lab_realize->add_option("-s,--spec", spec_path, "Profile specification (JSON)")->required()->check(CLI::ExistingFile);
    lab_realize->add_option("--max-candidates", max_candidates, "Give up after this many candidate multisets (0 = never)");
    lab_realize->add_option("-o,--output", output, "Also write the witness as an instance file");
    lab_realize->callback([&] {
        action = [&] {
            const auto spec = parse_profile_spec(json::parse(slurp(spec_path)));
            const auto r = realize_profile(spec, {jobs, max_candidates});
            json record{{"found", r.instance.has_value()}, {"profiles", r.profiles}, {"candidates", r.candidates}};
            record["instance"] = r.instance ? instance_json(*r.instance) : json(nullptr);
            if (r.instance && !output.empty()) {
                std::ofstream os(output, std::ios::binary);
                if (!os) throw Error("cannot write " + output);
                write_instance(os, *r.instance);
            }
            print(record);
        };
    });

    int conjecture = 0;
    int taxa_count = 5;
    int tree_count = 5;
    int trials = 100;
    std::uint64_t seed = 0;
    std::vector<std::string> pool_files;
    auto* lab_search = lab->add_subcommand("search", "Seeded random search for falsifying instances");
    lab_search->add_option("--conjecture", conjecture, "Conjecture id")->required()->check(CLI::Range(1, 5));
    lab_search->add_option("--taxa", taxa_count, "Taxa per random instance")->check(CLI::Range(4, kDefaultEnumerationCap));
    lab_search->add_option("--trees", tree_count, "Trees per random instance")->check(CLI::Range(1, 100000));
    lab_search->add_option("--trials", trials, "Random instances")->check(CLI::NonNegativeNumber);
    lab_search->add_option("--seed", seed, "Seed for the random instances")->required();
    lab_search->add_option("--pool", pool_files, "Instance files checked before the random trials")->check(CLI::ExistingFile);
    lab_search->callback([&] {
        action = [&] {
            SearchOptions options;
            options.jobs = jobs;
            for (const auto& f : pool_files) options.pool.push_back(load_input(f).trees("--pool"));
            const auto reports = search_counterexamples(conjecture, taxa_count, tree_count, trials, seed, options);
            for (const auto& r : reports) print(to_json(r));
            print({{"summary",
                    {{"conjecture", conjecture},
                     {"pool", pool_files.size()},
                     {"trials", trials},
                     {"seed", seed},
                     {"falsifiers", reports.size()}}}});
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "wqc: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (action) action();
        return kExitOk;
    } catch (const std::exception& e) {
        err << "wqc: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace wqc::cli
