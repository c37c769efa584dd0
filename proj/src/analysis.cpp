#include "wqc/analysis.hpp"

#include <algorithm>
#include <atomic>

#include "wqc/error.hpp"
#include "wqc/parallel.hpp"
#include "wqc/random.hpp"

namespace wqc {

namespace {

constexpr std::size_t kListedQuartets = 20;
constexpr std::size_t kListedOptima = 50;

void check_cap(int n, int cap) {
    if (n > cap) throw CapacityError("exhaustive search over " + std::to_string(n) + " taxa exceeds the cap of " + std::to_string(cap));
}

} // namespace

OptimaScan scan_optima(const QuartetTable& table, int cap) {
    const int n = table.taxon_count();
    check_cap(n, cap);
    const std::size_t quadsets = table.size();
    std::vector<int> dominant(quadsets, -1);
    std::vector<int> least(quadsets, -1);
    for (std::size_t r = 0; r < quadsets; ++r) {
        const auto cls = classify_counts(table.counts(r));
        for (int t = 0; t < 3; ++t) {
            if (cls.strictly_dominant[static_cast<std::size_t>(t)]) dominant[r] = t;
            if (cls.strictly_least_frequent[static_cast<std::size_t>(t)]) least[r] = t;
        }
    }

    OptimaScan out;
    out.optimal_display.assign(quadsets * 3, 0);
    std::optional<std::vector<std::uint8_t>> free_history;
    std::vector<std::uint8_t> topo(quadsets);
    for_each_topology(n, [&](const StepwiseTree& t) {
        std::int64_t s = 0;
        std::int64_t dom = 0;
        bool has_least = false;
        for (int d = 3; d < n; ++d)
            for (int c = 2; c < d; ++c)
                for (int b = 1; b < c; ++b)
                    for (int a = 0; a < b; ++a) {
                        const auto r = quadset_rank(a, b, c, d);
                        const int x = t.quartet_topology(a, b, c, d);
                        topo[r] = static_cast<std::uint8_t>(x);
                        s += table.counts(r)[static_cast<std::size_t>(x)];
                        dom += dominant[r] == x;
                        has_least = has_least || least[r] == x;
                    }
        if (s > out.optimum) {
            out.optimum = s;
            out.optima_count = 0;
            out.most_dominant_in_optimum = 0;
            std::fill(out.optimal_display.begin(), out.optimal_display.end(), 0);
        }
        if (s == out.optimum) {
            ++out.optima_count;
            out.most_dominant_in_optimum = std::max(out.most_dominant_in_optimum, dom);
            for (std::size_t r = 0; r < quadsets; ++r) ++out.optimal_display[r * 3 + topo[r]];
        }
        if (dom > 0) out.best_with_dominant = std::max(out.best_with_dominant, s);
        if (!has_least && s > out.best_without_least_frequent_score) {
            out.best_without_least_frequent_score = s;
            free_history = t.history();
        }
    });
    if (free_history) out.best_without_least_frequent = replay(n, *free_history).to_tree(table.taxa_ptr());
    return out;
}

nlohmann::json to_json(const ConjectureReport& r) {
    nlohmann::json j{{"conjecture", r.conjecture},
                     {"verdict", r.falsifies ? "falsifies" : "consistent"},
                     {"optimum", r.optimum},
                     {"optima_count", r.optima_count},
                     {"optima", r.optima},
                     {"evidence", r.evidence}};
    if (!r.instance.is_null()) j["instance"] = r.instance;
    return j;
}

nlohmann::json instance_json(const WqcInstance& inst) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& wt : inst.trees()) out.push_back({{"multiplicity", wt.multiplicity}, {"newick", to_newick(wt.tree)}});
    return out;
}

std::vector<ConjectureReport> verify_conjectures(const QuartetTable& table, int cap) {
    const auto scan = scan_optima(table, cap);
    ExactOptions options;
    options.cap = cap;
    options.max_optima = kListedOptima;
    const auto exact = solve_exact(table, options);
    if (exact.optimum_score != scan.optimum || exact.optima_count != scan.optima_count)
        throw Error("optima scan disagrees with the exact solver");

    const auto& taxa = table.taxa();
    const std::int64_t k = table.total();
    std::vector<std::string> optima;
    for (const auto& t : exact.optima) optima.push_back(to_newick(t));
    auto report = [&](int id) {
        ConjectureReport r;
        r.conjecture = id;
        r.optimum = exact.optimum_score;
        r.optima_count = exact.optima_count;
        r.optima = optima;
        return r;
    };
    auto listed = [&](const std::vector<Quartet>& qs) {
        nlohmann::json a = nlohmann::json::array();
        for (std::size_t i = 0; i < qs.size() && i < kListedQuartets; ++i) a.push_back(format_quartet(taxa, qs[i]));
        return a;
    };
    auto in_some_optimum = [&](std::size_t r, int t) { return scan.optimal_display[r * 3 + static_cast<std::size_t>(t)] > 0; };

    std::int64_t strictly_dominant = 0;
    std::vector<Quartet> majority_absent, universal_absent, unseen_present;
    std::int64_t majority = 0;
    std::int64_t universal = 0;
    for (const auto& q : lexicographic_quadsets(table.taxon_count())) {
        const auto r = quadset_rank(q);
        const auto& f = table.counts(r);
        const auto cls = classify_counts(f);
        for (int t = 0; t < 3; ++t) {
            const auto ft = f[static_cast<std::size_t>(t)];
            strictly_dominant += cls.strictly_dominant[static_cast<std::size_t>(t)];
            if (2 * ft > k) {
                ++majority;
                if (!in_some_optimum(r, t)) majority_absent.push_back({q, t});
            }
            if (ft == k && k > 0) {
                ++universal;
                if (!in_some_optimum(r, t)) universal_absent.push_back({q, t});
            }
            if (ft == 0 && in_some_optimum(r, t)) unseen_present.push_back({q, t});
        }
    }

    std::vector<ConjectureReport> out;
    {
        auto r = report(1);
        r.falsifies = strictly_dominant > 0 && scan.most_dominant_in_optimum == 0;
        r.evidence = {{"strictly_dominant_quartets", strictly_dominant},
                      {"most_in_an_optimum", scan.most_dominant_in_optimum},
                      {"fraction", {scan.most_dominant_in_optimum, strictly_dominant}},
                      {"best_score_with_strictly_dominant", scan.best_with_dominant}};
        out.push_back(std::move(r));
    }
    {
        auto r = report(2);
        r.falsifies = !majority_absent.empty();
        r.evidence = {{"majority_quartets", majority}, {"absent_from_all_optima", majority_absent.size()}, {"examples", listed(majority_absent)}};
        out.push_back(std::move(r));
    }
    {
        auto r = report(3);
        r.falsifies = !universal_absent.empty();
        r.evidence = {{"universal_quartets", universal}, {"absent_from_all_optima", universal_absent.size()}, {"examples", listed(universal_absent)}};
        out.push_back(std::move(r));
    }
    {
        auto r = report(4);
        r.falsifies = !unseen_present.empty();
        r.evidence = {{"unseen_in_some_optimum", unseen_present.size()}, {"examples", listed(unseen_present)}};
        out.push_back(std::move(r));
    }
    {
        auto r = report(5);
        const bool exists = scan.best_without_least_frequent.has_value();
        r.falsifies = exists && scan.best_without_least_frequent_score < scan.optimum;
        r.evidence = {{"tree_without_least_frequent_exists", exists}};
        if (exists) {
            r.evidence["best_score"] = scan.best_without_least_frequent_score;
            r.evidence["best_tree"] = to_newick(*scan.best_without_least_frequent);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ConjectureReport> verify_conjectures(const WqcInstance& inst, int cap) {
    auto reports = verify_conjectures(build_table(inst), cap);
    const auto j = instance_json(inst);
    for (auto& r : reports) r.instance = j;
    return reports;
}

namespace {

Tree spec_tree(const nlohmann::json& j, const TaxaPtr& taxa) {
    return parse_newick(j.get<std::string>(), NewickOptions{taxa, true, false});
}

ProfileSpec::Optimum parse_optimum(const nlohmann::json& j, const TaxaPtr& taxa) {
    ProfileSpec::Optimum o;
    if (j.contains("score")) o.score = j.at("score").get<std::int64_t>();
    if (j.contains("unique")) o.unique = j.at("unique").get<bool>();
    if (j.contains("newick")) o.tree = spec_tree(j.at("newick"), taxa);
    return o;
}

} // namespace

ProfileSpec parse_profile_spec(const nlohmann::json& j) {
    try {
        ProfileSpec s;
        s.taxa = make_taxa(j.at("taxa").get<std::vector<std::string>>());
        if (s.taxa->size() < 4) throw Error("profile spec needs at least four taxa");
        s.k = j.at("k").get<std::int64_t>();
        if (s.k < 1) throw Error("profile spec needs k >= 1");
        for (const auto& q : j.value("quadsets", nlohmann::json::array())) {
            ProfileSpec::QuadsetRule rule;
            const auto& qs = q.at("quadset");
            if (!(qs.is_string() && qs.get<std::string>() == "*")) {
                Quadset x{};
                const auto labels = qs.get<std::vector<std::string>>();
                if (labels.size() != 4) throw Error("a quadset lists four labels");
                for (std::size_t i = 0; i < 4; ++i) x[i] = s.taxa->index(labels[i]);
                std::sort(x.begin(), x.end());
                if (std::adjacent_find(x.begin(), x.end()) != x.end()) throw Error("quadset labels must be distinct");
                // Counts are given in the listed label order's topology indexing only when sorted.
                if (labels != std::vector<std::string>{s.taxa->label(x[0]), s.taxa->label(x[1]), s.taxa->label(x[2]), s.taxa->label(x[3])})
                    throw Error("quadset labels must follow the taxa order");
                rule.quadset = x;
            }
            if (q.contains("counts")) {
                const auto& c = q.at("counts");
                if (!c.is_array() || c.size() != 3) throw Error("counts must hold three entries");
                for (std::size_t i = 0; i < 3; ++i)
                    if (!c[i].is_null()) rule.counts[i] = c[i].get<std::int64_t>();
            }
            if (q.contains("permutation_of")) rule.permutation_of = q.at("permutation_of").get<std::array<std::int64_t, 3>>();
            s.quadsets.push_back(std::move(rule));
        }
        for (const auto& d : j.value("displayed_counts", nlohmann::json::array()))
            s.displayed_counts.push_back({spec_tree(d.at("newick"), s.taxa), d.at("count").get<std::int64_t>()});
        for (const auto& f : j.value("fixed_multiplicities", nlohmann::json::array())) {
            const auto m = f.at("multiplicity").get<std::int64_t>();
            if (m < 0) throw Error("fixed multiplicities must be non-negative");
            s.fixed_multiplicities.push_back({spec_tree(f.at("newick"), s.taxa), m});
        }
        if (j.contains("optimum")) s.optimum = parse_optimum(j.at("optimum"), s.taxa);
        for (const auto& v : j.value("variants", nlohmann::json::array()))
            s.variants.push_back({spec_tree(v.at("drop"), s.taxa), parse_optimum(v.value("optimum", nlohmann::json::object()), s.taxa)});
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed profile spec: ") + e.what());
    }
}

namespace {

/// Candidate triples for one quadset, ascending.
std::vector<Counts> candidate_triples(const ProfileSpec& spec, const Quadset& q, const std::vector<std::vector<std::uint8_t>>& displayed_topo) {
    const ProfileSpec::QuadsetRule* rule = nullptr;
    for (const auto& r : spec.quadsets)
        if (r.quadset && *r.quadset == q) rule = &r;
    if (!rule)
        for (const auto& r : spec.quadsets)
            if (!r.quadset) rule = &r;

    std::vector<Counts> raw;
    if (rule && rule->permutation_of) {
        auto p = *rule->permutation_of;
        std::sort(p.begin(), p.end());
        do raw.push_back(Counts{p[0], p[1], p[2]});
        while (std::next_permutation(p.begin(), p.end()));
    } else {
        for (std::int64_t a = 0; a <= spec.k; ++a)
            for (std::int64_t b = 0; a + b <= spec.k; ++b) raw.push_back(Counts{a, b, spec.k - a - b});
    }
    const auto r = quadset_rank(q);
    std::vector<Counts> out;
    for (const auto& f : raw) {
        if (f[0] + f[1] + f[2] != spec.k) continue;
        bool ok = true;
        if (rule)
            for (std::size_t t = 0; t < 3; ++t) ok = ok && (!rule->counts[t] || *rule->counts[t] == f[t]);
        for (std::size_t d = 0; d < spec.displayed_counts.size(); ++d)
            ok = ok && f[displayed_topo[d][r]] == spec.displayed_counts[d].count;
        if (ok) out.push_back(f);
    }
    return out;
}

bool meets(const ProfileSpec::Optimum& want, const QuartetTable& table) {
    if (!want.score && !want.unique && !want.tree) return true;
    ExactOptions options;
    options.max_optima = 2;
    const auto ex = solve_exact(table, options);
    if (want.score && ex.optimum_score != *want.score) return false;
    if (want.unique && (ex.optima_count == 1) != *want.unique) return false;
    if (want.tree) {
        if (score(table, *want.tree) != ex.optimum_score) return false;
    }
    return true;
}

struct ProfileSolver {
    const ProfileSpec& spec;
    const std::vector<Tree>& trees;
    const std::vector<std::vector<std::uint8_t>>& topo;
    const std::vector<std::int64_t>& fixed;  // -1 for free
    std::vector<std::int64_t> rem;           // rank * 3 + topology
    std::vector<int> open;                   // free variables left per equation
    std::vector<std::int64_t> x;
    std::vector<int> free_vars;
    std::uint64_t checked = 0;
    std::uint64_t limit = 0;
    std::optional<WqcInstance> found;

    bool stop() const { return found.has_value() || (limit && checked >= limit); }

    void verify() {
        ++checked;
        std::vector<WeightedTree> chosen;
        for (std::size_t i = 0; i < trees.size(); ++i)
            if (x[i] > 0) chosen.push_back({trees[i], x[i]});
        WqcInstance inst(spec.taxa, chosen);
        if (!meets(spec.optimum, build_table(inst))) return;
        for (const auto& v : spec.variants) {
            std::vector<WeightedTree> kept;
            for (const auto& wt : chosen)
                if (!isomorphic(wt.tree, v.drop)) kept.push_back(wt);
            if (kept.empty()) return;
            if (!meets(v.optimum, build_table(WqcInstance(spec.taxa, kept)))) return;
        }
        found = std::move(inst);
    }

    void dfs(std::size_t pos) {
        if (stop()) return;
        if (pos == free_vars.size()) {
            verify();
            return;
        }
        const auto j = static_cast<std::size_t>(free_vars[pos]);
        const auto& tj = topo[j];
        std::int64_t hi = spec.k;
        std::optional<std::int64_t> forced;
        for (std::size_t r = 0; r < tj.size(); ++r) {
            const auto e = r * 3 + tj[r];
            hi = std::min(hi, rem[e]);
            if (open[e] == 1) {
                if (forced && *forced != rem[e]) return;
                forced = rem[e];
            }
        }
        std::int64_t lo = 0;
        if (forced) {
            if (*forced > hi) return;
            lo = hi = *forced;
        }
        for (std::size_t r = 0; r < tj.size(); ++r) --open[r * 3 + tj[r]];
        for (std::int64_t v = lo; v <= hi && !stop(); ++v) {
            x[j] = v;
            for (std::size_t r = 0; r < tj.size(); ++r) rem[r * 3 + tj[r]] -= v;
            bool ok = true;
            for (std::size_t r = 0; r < tj.size() && ok; ++r) {
                const auto e = r * 3 + tj[r];
                ok = open[e] > 0 || rem[e] == 0;
            }
            if (ok) dfs(pos + 1);
            for (std::size_t r = 0; r < tj.size(); ++r) rem[r * 3 + tj[r]] += v;
        }
        x[j] = 0;
        for (std::size_t r = 0; r < tj.size(); ++r) ++open[r * 3 + tj[r]];
    }
};

} // namespace

RealizeResult realize_profile(const ProfileSpec& spec, const RealizeOptions& options) {
    const int n = spec.taxa->size();
    check_cap(n, 6);
    const auto trees = enumerate_topologies(spec.taxa);
    std::vector<std::vector<std::uint8_t>> topo;
    for (const auto& t : trees) topo.push_back(quartet_topologies(t));
    std::vector<std::vector<std::uint8_t>> displayed_topo;
    for (const auto& d : spec.displayed_counts) displayed_topo.push_back(quartet_topologies(d.tree));

    std::vector<std::int64_t> fixed(trees.size(), -1);
    for (const auto& f : spec.fixed_multiplicities) {
        const auto q = quartet_topologies(f.tree);
        const auto it = std::find(topo.begin(), topo.end(), q);
        const auto i = static_cast<std::size_t>(it - topo.begin());
        if (fixed[i] >= 0 && fixed[i] != f.multiplicity) return {};
        fixed[i] = f.multiplicity;
    }

    const auto quadsets = lexicographic_quadsets(n);
    std::vector<std::vector<Counts>> choices;
    for (const auto& q : quadsets) {
        choices.push_back(candidate_triples(spec, q, displayed_topo));
        if (choices.back().empty()) return {};
    }

    // Profiles in lexicographic order: the last quadset varies fastest.
    std::vector<std::vector<Counts>> profiles;
    std::vector<std::size_t> digit(quadsets.size(), 0);
    while (true) {
        std::vector<Counts> target(quadsets.size());
        for (std::size_t i = 0; i < quadsets.size(); ++i) target[quadset_rank(quadsets[i])] = choices[i][digit[i]];
        profiles.push_back(std::move(target));
        std::size_t i = quadsets.size();
        while (i > 0 && ++digit[i - 1] == choices[i - 1].size()) digit[--i] = 0;
        if (i == 0) break;
    }

    RealizeResult out;
    const std::size_t chunk = static_cast<std::size_t>(std::max(options.jobs, 1));
    std::atomic<std::uint64_t> checked{0};
    for (std::size_t begin = 0; begin < profiles.size(); begin += chunk) {
        const std::size_t end = std::min(profiles.size(), begin + chunk);
        std::vector<std::optional<WqcInstance>> hits(end - begin);
        std::vector<std::uint64_t> counts(end - begin, 0);
        parallel_for(end - begin, options.jobs, [&](std::size_t off) {
            const auto& target = profiles[begin + off];
            ProfileSolver s{spec, trees, topo, fixed, {}, {}, std::vector<std::int64_t>(trees.size(), 0), {}, 0, 0, std::nullopt};
            s.rem.assign(target.size() * 3, 0);
            s.open.assign(target.size() * 3, 0);
            for (std::size_t r = 0; r < target.size(); ++r)
                for (std::size_t t = 0; t < 3; ++t) s.rem[r * 3 + t] = target[r][t];
            for (std::size_t i = 0; i < trees.size(); ++i) {
                if (fixed[i] >= 0) {
                    s.x[i] = fixed[i];
                    for (std::size_t r = 0; r < target.size(); ++r) s.rem[r * 3 + topo[i][r]] -= fixed[i];
                } else {
                    s.free_vars.push_back(static_cast<int>(i));
                    for (std::size_t r = 0; r < target.size(); ++r) ++s.open[r * 3 + topo[i][r]];
                }
            }
            for (std::size_t e = 0; e < s.rem.size(); ++e)
                if (s.rem[e] < 0 || (s.open[e] == 0 && s.rem[e] != 0)) return;
            if (options.max_candidates) s.limit = options.max_candidates;
            s.dfs(0);
            counts[off] = s.checked;
            hits[off] = std::move(s.found);
        });
        for (std::size_t off = 0; off < hits.size(); ++off) {
            ++out.profiles;
            out.candidates += counts[off];
            if (hits[off]) {
                out.instance = std::move(hits[off]);
                return out;
            }
        }
        if (options.max_candidates && out.candidates >= options.max_candidates) break;
    }
    return out;
}

std::vector<ConjectureReport> search_counterexamples(int conjecture, int n, int k, int trials, std::uint64_t seed,
                                                     const SearchOptions& options) {
    if (conjecture < 1 || conjecture > 5) throw Error("conjecture id must be between 1 and 5");
    if (n < 4) throw Error("search needs at least four taxa");
    if (k < 1) throw Error("search needs k >= 1");
    if (trials < 0) throw Error("trial count must be non-negative");
    check_cap(n, kDefaultEnumerationCap);
    const auto taxa = make_taxa(default_labels(n));
    const std::size_t pooled = options.pool.size();
    const std::size_t total = pooled + static_cast<std::size_t>(trials);
    std::vector<std::optional<ConjectureReport>> found(total);
    parallel_for(total, options.jobs, [&](std::size_t i) {
        std::optional<WqcInstance> generated;
        if (i >= pooled) {
            auto rng = derived_rng(seed, i - pooled);
            generated = random_instance(taxa, k, rng);
        }
        const WqcInstance& inst = i < pooled ? options.pool[i] : *generated;
        auto reports = verify_conjectures(inst);
        auto& r = reports[static_cast<std::size_t>(conjecture - 1)];
        if (r.falsifies) found[i] = std::move(r);
    });
    std::vector<ConjectureReport> out;
    for (auto& r : found)
        if (r) out.push_back(std::move(*r));
    return out;
}

} // namespace wqc
