// cp: command-line front end for the Toeplitz / Cuntz-Pimsner ring library.
//
// Every verb prints {"ok":..., "result":..., "diagnostics":[...]} on stdout
// (or DOT / a plain table when --format asks for it).  Exit codes: 0 success,
// 1 domain error or negative answer, 2 usage error.

#include "cpr/cpring.hpp"
#include "cpr/crossedprod.hpp"
#include "cpr/errors.hpp"
#include "cpr/expr.hpp"
#include "cpr/finrank.hpp"
#include "cpr/graphalg.hpp"
#include "cpr/ideals.hpp"
#include "cpr/rsystem.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace cpr;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input;
    std::vector<std::string> exprs;
    int cap = 8;
    int slack = 2;
    int level = 3;
    std::string format = "json";
    unsigned seed = 1;
    std::string j = "jmax";
    std::string k = "jmax";
    std::string i_set, h_set, s_set;
    std::string strategy = "ascending";
    std::string backend = "cp";
};

// What a loaded input file turned out to be.
struct Loaded {
    std::optional<FiniteGraph> graph;  // as written, possibly with infinite emitters
    SystemPtr sys;                     // null for graphs with infinite emitters
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

Loaded load(const std::string& path) {
    json j = read_json(path);
    Loaded out;
    if (j.is_object() && j.contains("vertices")) {
        out.graph = graph_from_json(j);
        bool finite = true;
        for (const auto& e : out.graph->edges) finite = finite && e.mult.has_value();
        if (finite) out.sys = std::make_shared<const RSystem>(build_graph_system(*out.graph));
    } else {
        out.sys = std::make_shared<const RSystem>(system_from_json(j));
    }
    return out;
}

const SystemPtr& need_system(const Loaded& in) {
    if (!in.sys) throw InfiniteMultiplicity("this verb needs a finite graph or a system file");
    return in.sys;
}

RingPtr make_ring(const SystemPtr& sys, int cap) {
    auto ring = ToeplitzRing::create(sys, cap);
    if (const char* dir = std::getenv("CP_RINGS_CACHE_DIR"); dir && *dir)
        ring->mutable_tower().set_persistent_cache(dir);
    return ring;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "jmax", "all", "none" or a comma list of ring basis labels
Subspace subspace_arg(const std::string& arg, const TensorTower& tw) {
    std::size_t n = tw.system().ring.dim();
    if (arg == "jmax") return canonical_ideals(tw).j_max;
    if (arg == "all") return Subspace::full(n);
    if (arg == "none" || arg.empty()) return Subspace(n);
    std::vector<std::size_t> idx;
    const auto& labels = tw.system().ring.labels;
    for (const auto& l : split_list(arg)) {
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end()) throw UnknownGenerator("no ring basis element '" + l + "'");
        idx.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
    return Subspace::coordinates(n, idx);
}

VertexSet vertex_set(const std::string& s) {
    auto v = split_list(s);
    return VertexSet(v.begin(), v.end());
}

json vertex_json(const VertexSet& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

std::string vertex_braces(const VertexSet& s) {
    std::string out = "{";
    for (const auto& v : s) out += (out.size() > 1 ? "," : "") + v;
    return out + "}";
}

json report_json(const ValidationReport& rep) {
    json v = json::array();
    for (const auto& x : rep.violations) v.push_back({{"identity", x.identity}, {"witness", x.witness}});
    return v;
}

json flags_json(const TPairFlags& f) {
    return {{"i_two_sided", f.i_two_sided}, {"i_invariant", f.i_invariant}, {"i_in_j", f.i_in_j},
            {"j_two_sided", f.j_two_sided}, {"j_compatible", f.j_compatible}, {"j_faithful", f.j_faithful}};
}

Reduction strategy_arg(const std::string& s) {
    if (s == "ascending") return Reduction::ascending;
    if (s == "descending") return Reduction::descending_eager;
    throw UsageError("unknown strategy " + s);
}

struct Outcome {
    bool ok = true;
    json result = json::object();
    std::vector<std::string> diagnostics;
    std::optional<std::string> raw;  // printed verbatim instead of JSON
};

// ---------------------------------------------------------------- verbs

Outcome run_validate(const Options& o) {
    Loaded in = load(o.input);
    Outcome out;
    auto rep = validate_axioms(*need_system(in));
    out.ok = rep.ok();
    out.result = {{"violations", report_json(rep)}};
    return out;
}

Outcome run_mul(const Options& o) {
    if (o.exprs.empty()) throw UsageError("mul needs at least one expression");
    Loaded in = load(o.input);
    Outcome out;
    if (o.backend == "lpa") {
        if (!in.graph) throw UsageError("--backend lpa needs a graph file");
        auto g = LpaGraph::create(*in.graph);
        Reduction how = strategy_arg(o.strategy);
        LpaElement acc = parse_lpa(o.exprs[0], g);
        for (std::size_t i = 1; i < o.exprs.size(); ++i) acc = lpa_mul(acc, parse_lpa(o.exprs[i], g), how);
        out.result = {{"product", lpa_to_string(lpa_normalize(acc, how))}};
        return out;
    }
    auto ring = make_ring(need_system(in), o.cap);
    ToeplitzElement acc = parse_toeplitz(o.exprs[0], ring);
    for (std::size_t i = 1; i < o.exprs.size(); ++i) acc = acc * parse_toeplitz(o.exprs[i], ring);
    json comps = json::array();
    for (const auto& [g, v] : acc.components()) {
        std::size_t nz = 0;
        for (const auto& c : v) nz += sgn(c) != 0;
        comps.push_back({{"m", g.m}, {"n", g.n}, {"nonzero", nz}});
    }
    out.result = {{"product", toeplitz_to_string(acc)}, {"components", comps}};
    return out;
}

Outcome run_eq(const Options& o) {
    if (o.exprs.size() != 2) throw UsageError("eq needs two expressions");
    Loaded in = load(o.input);
    Outcome out;
    auto ring = make_ring(need_system(in), o.cap);
    auto ctx = std::make_shared<const CpContext>(ring, subspace_arg(o.j, ring->tower()), o.slack);
    CpElement a{ctx, parse_toeplitz(o.exprs[0], ring)}, b{ctx, parse_toeplitz(o.exprs[1], ring)};
    bool eq = cp_equal(a, b);
    json used = json::array();
    for (const auto& [zd, s] : ctx->slack_used()) used.push_back({{"z", zd.first}, {"d", zd.second}, {"slack", s}});
    out.result = {{"equal", eq}, {"j", subspace_to_json(ring->system().ring, ctx->ideal().ideal)}, {"slack_used", used}};
    if (!ctx->ideal().is_faithful) out.diagnostics.push_back("J is not faithful");
    return out;
}

Outcome run_nf(const Options& o) {
    if (o.exprs.size() != 1) throw UsageError("nf needs one expression");
    Loaded in = load(o.input);
    Outcome out;
    if (in.graph) {
        auto g = LpaGraph::create(*in.graph);
        LpaElement x = lpa_normalize(parse_lpa(o.exprs[0], g), strategy_arg(o.strategy));
        out.result = {{"normal_form", lpa_to_string(x)}, {"terms", x.terms().size()}};
    } else {
        auto ring = make_ring(need_system(in), o.cap);
        out.result = {{"normal_form", toeplitz_to_string(parse_toeplitz(o.exprs[0], ring))}};
        out.diagnostics.push_back("no graph: printed the Toeplitz representative");
    }
    return out;
}

Outcome run_fs(const Options& o) {
    Loaded in = load(o.input);
    Outcome out;
    auto ring = make_ring(need_system(in), o.cap);
    const auto& tw = ring->tower();
    json levels = json::array();
    for (int n = 1; n <= std::min(o.level, o.cap); ++n) {
        auto rep = check_fs(tw, n);
        out.ok = out.ok && rep.holds();
        levels.push_back({{"level", n},
                          {"q_side", rep.q_side},
                          {"p_side", rep.p_side},
                          {"finite_rank_dim", finite_rank_space(tw, n).span.dim()}});
    }
    out.result = {{"holds", out.ok}, {"levels", levels}};
    return out;
}

Outcome run_jmax(const Options& o) {
    Loaded in = load(o.input);
    Outcome out;
    auto ring = make_ring(need_system(in), o.cap);
    auto ci = canonical_ideals(ring->tower());
    const auto& r = ring->system().ring;
    out.result = {{"j_max", subspace_to_json(r, ci.j_max)}};
    out.diagnostics.push_back("ker_delta = " + subspace_to_json(r, ci.ker_delta).dump());
    out.diagnostics.push_back("delta_inverse_f = " + subspace_to_json(r, ci.delta_inv_f).dump());
    if (!ci.j_max_faithful) out.diagnostics.push_back("j_max meets ker_delta");
    return out;
}

// Pairs (H, S) of a graph with infinite emitters, ordered by pair_order.
Outcome graph_pair_lattice(const Options& o, const FiniteGraph& g) {
    Outcome out;
    auto pairs = enumerate_ideal_pairs(g);
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (std::size_t a = 0; a < pairs.size(); ++a)
        for (std::size_t b = 0; b < pairs.size(); ++b) {
            if (a == b || !pair_order(pairs[a], pairs[b])) continue;
            bool cover = true;
            for (std::size_t c = 0; c < pairs.size() && cover; ++c)
                if (c != a && c != b && pair_order(pairs[a], pairs[c]) && pair_order(pairs[c], pairs[b])) cover = false;
            if (cover) covers.emplace_back(a, b);
        }
    if (o.format == "dot") {
        std::ostringstream os;
        os << "digraph ideal_pairs {\n  rankdir=BT;\n";
        for (std::size_t a = 0; a < pairs.size(); ++a)
            os << "  n" << a << " [label=\"H=" << vertex_braces(pairs[a].h) << " S=" << vertex_braces(pairs[a].s) << "\"];\n";
        for (auto [a, b] : covers) os << "  n" << a << " -> n" << b << ";\n";
        os << "}\n";
        out.raw = os.str();
        return out;
    }
    json nodes = json::array(), edges = json::array();
    for (std::size_t a = 0; a < pairs.size(); ++a)
        nodes.push_back({{"id", a}, {"h", vertex_json(pairs[a].h)}, {"s", vertex_json(pairs[a].s)}});
    for (auto [a, b] : covers) edges.push_back({a, b});
    out.result = {{"nodes", nodes}, {"edges", edges}};
    return out;
}

Outcome run_lattice(const Options& o) {
    Loaded in = load(o.input);
    if (!in.sys) return graph_pair_lattice(o, *in.graph);
    Outcome out;
    auto ring = make_ring(in.sys, o.cap);
    Subspace k = subspace_arg(o.k, ring->tower());
    Lattice lat = build_lattice(enumerate_tpairs(in.sys, &k));
    if (o.format == "dot") {
        out.raw = lattice_to_dot(*in.sys, lat);
        return out;
    }
    out.result = lattice_to_json(*in.sys, lat);
    out.diagnostics.push_back("coordinate ideals only; K = " + subspace_to_json(in.sys->ring, k).dump());
    return out;
}

Outcome run_tpair(const Options& o) {
    Loaded in = load(o.input);
    Outcome out;
    const SystemPtr& sys = need_system(in);
    auto ring = make_ring(sys, o.cap);
    TPair w;
    if (!o.h_set.empty() || !o.s_set.empty()) {
        if (!in.graph) throw UsageError("--hereditary/--breaking need a graph file");
        IdealPair pair{vertex_set(o.h_set), vertex_set(o.s_set)};
        w = ideal_pair_to_tpair(*sys, pair);
        bool listed = false;
        for (const auto& p : enumerate_ideal_pairs(*in.graph)) listed = listed || p == pair;
        if (!listed) out.diagnostics.push_back("(H, S) is not an admissible pair of the graph");
    } else {
        w = {subspace_arg(o.i_set.empty() ? "none" : o.i_set, ring->tower()), subspace_arg(o.j, ring->tower())};
    }
    auto flags = validate_tpair(sys, w.i, w.j);
    out.ok = flags.ok();
    for (const auto& f : flags.failures()) out.diagnostics.push_back(f);
    out.result = {{"i", subspace_to_json(sys->ring, w.i)}, {"j", subspace_to_json(sys->ring, w.j)}, {"flags", flags_json(flags)}};
    return out;
}

Outcome run_quotient(const Options& o) {
    Loaded in = load(o.input);
    Outcome out;
    if (in.graph && !o.h_set.empty()) {
        VertexSet h = vertex_set(o.h_set);
        if (!is_hereditary(*in.graph, h)) out.diagnostics.push_back("H is not hereditary");
        out.result = {{"graph", graph_to_json(quotient_graph(*in.graph, h))}};
        return out;
    }
    const SystemPtr& sys = need_system(in);
    auto ring = make_ring(sys, o.cap);
    auto qs = quotient_system(sys, subspace_arg(o.i_set, ring->tower()));
    out.result = {{"system", system_to_json(*qs.system)}};
    if (qs.system->graph) out.result["graph"] = graph_to_json(*qs.system->graph);
    return out;
}

Outcome run_compare(const Options& o) {
    if (o.exprs.size() != 2) throw UsageError("compare needs two expressions");
    Loaded in = load(o.input);
    Outcome out;
    const SystemPtr& sys = need_system(in);
    auto ring = make_ring(sys, o.cap);
    auto ctx = std::make_shared<const CpContext>(ring, canonical_ideals(ring->tower()).j_max, o.slack);
    ToeplitzElement a = parse_toeplitz(o.exprs[0], ring), b = parse_toeplitz(o.exprs[1], ring);
    bool generic = cp_equal({ctx, a}, {ctx, b});
    out.result = {{"cp", generic}};
    bool agree = true;
    if (in.graph) {
        auto g = LpaGraph::create(*sys->graph);
        bool l = lpa_from_toeplitz(a, g) == lpa_from_toeplitz(b, g);
        out.result["lpa"] = l;
        agree = agree && l == generic;
    }
    if (sys->phi) {
        bool c = toeplitz_to_crossed(a) == toeplitz_to_crossed(b);
        out.result["crossed"] = c;
        agree = agree && c == generic;
    }
    if (!in.graph && !sys->phi) out.diagnostics.push_back("no second backend for this system");
    out.result["agree"] = agree;
    out.ok = agree;
    return out;
}

Outcome run_gauge_split(const Options& o) {
    if (o.exprs.size() != 1) throw UsageError("gauge-split needs one expression");
    Loaded in = load(o.input);
    Outcome out;
    auto ring = make_ring(need_system(in), o.cap);
    ToeplitzElement x = parse_toeplitz(o.exprs[0], ring);
    auto zs = x.z_degrees();
    if (zs.empty()) {
        out.result = {{"components", json::object()}};
        return out;
    }
    int zmin = zs.front(), zmax = zs.back();
    std::mt19937 rng(o.seed);
    std::uniform_int_distribution<int> pick(-60, 60);
    std::vector<Rational> ts;
    while (ts.size() < static_cast<std::size_t>(zmax - zmin + 1)) {
        Rational t(pick(rng));
        if (sgn(t) != 0 && std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    }
    std::vector<ToeplitzElement> evals;
    for (const auto& t : ts) evals.push_back(gauge(t, x));
    json comps = json::object();
    ToeplitzElement sum(ring);
    for (const auto& [z, part] : homogeneous_components(ts, evals, zmin, zmax)) {
        if (part.is_zero()) continue;
        comps[std::to_string(z)] = toeplitz_to_string(part);
        sum = sum + part;
    }
    json tj = json::array();
    for (const auto& t : ts) tj.push_back(to_string(t));
    out.ok = sum == x;
    out.result = {{"components", comps}, {"evaluation_points", tj}};
    if (!out.ok) out.diagnostics.push_back("components do not sum to the input");
    return out;
}

void print_table(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) print_table(v, prefix.empty() ? k : prefix + "." + k, os);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) print_table(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << "\t" << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cp: exact computations in Toeplitz and relative Cuntz-Pimsner rings"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--cap", o.cap, "tensor level cap")->check(CLI::Range(1, 24));
    app.add_option("--slack", o.slack, "starting membership slack")->check(CLI::Range(0, 24));
    app.add_option("--format", o.format, "json, dot or table")->check(CLI::IsMember({"json", "dot", "table"}));
    app.add_option("--seed", o.seed, "seed for randomized choices");

    using Runner = Outcome (*)(const Options&);
    std::vector<std::pair<CLI::App*, Runner>> verbs;
    auto verb = [&](const char* name, const char* help, Runner fn, bool exprs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("input", o.input, "graph or system JSON file")->required();
        if (exprs) sub->add_option("exprs", o.exprs, "element expressions");
        verbs.emplace_back(sub, fn);
        return sub;
    };
    verb("validate", "check the system axioms", run_validate, false);
    auto* mul = verb("mul", "multiply expressions", run_mul, true);
    mul->add_option("--backend", o.backend, "cp or lpa")->check(CLI::IsMember({"cp", "lpa"}));
    mul->add_option("--strategy", o.strategy, "ascending or descending");
    auto* eq = verb("eq", "equality in the relative ring", run_eq, true);
    eq->add_option("--j", o.j, "jmax, all, none or ring labels");
    verb("nf", "normal form", run_nf, true)->add_option("--strategy", o.strategy, "ascending or descending");
    verb("fs", "finite-rank identity check", run_fs, false)->add_option("--level", o.level, "levels to check");
    verb("jmax", "canonical ideal j_max", run_jmax, false);
    verb("lattice", "ideal lattice", run_lattice, false)->add_option("--k", o.k, "lower bound K for J");
    auto* tp = verb("tpair", "validate a pair (I, J)", run_tpair, false);
    tp->add_option("--i", o.i_set, "ring labels of I");
    tp->add_option("--j", o.j, "ring labels of J");
    tp->add_option("--hereditary", o.h_set, "hereditary saturated vertex set");
    tp->add_option("--breaking", o.s_set, "breaking vertices");
    auto* qu = verb("quotient", "quotient system", run_quotient, false);
    qu->add_option("--i", o.i_set, "ring labels of I");
    qu->add_option("--hereditary", o.h_set, "vertex set of a graph quotient");
    verb("compare", "cross-check backends", run_compare, true);
    verb("gauge-split", "homogeneous components", run_gauge_split, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        json err = {{"ok", false}, {"result", nullptr}, {"diagnostics", {std::string("usage: ") + e.what()}}};
        std::cout << err.dump(2) << "\n";
        return 2;
    }

    Outcome out;
    int code = 0;
    try {
        for (auto& [sub, fn] : verbs)
            if (sub->parsed()) out = fn(o);
        code = out.ok ? 0 : 1;
    } catch (const UsageError& e) {
        out = {false, nullptr, {std::string("usage: ") + e.what()}, std::nullopt};
        code = 2;
    } catch (const Error& e) {
        out = {false, nullptr, {e.kind() + ": " + e.what()}, std::nullopt};
        code = 1;
    }

    if (out.raw && code == 0) {
        std::cout << *out.raw;
    } else if (o.format == "table" && code != 2) {
        print_table(out.result, "", std::cout);
        for (const auto& d : out.diagnostics) std::cout << "# " << d << "\n";
    } else {
        json doc = {{"ok", out.ok}, {"result", out.result}, {"diagnostics", out.diagnostics}};
        std::cout << doc.dump(2) << "\n";
    }
    return code;
}
