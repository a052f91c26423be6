// c2tool: graph polynomials, Dodgson/forest queries, exact point counts and
// c2 invariants over q-sweeps, denominator-reduction traces, and the
// verification suites.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "c2/count.hpp"
#include "c2/denom.hpp"
#include "c2/graph.hpp"
#include "c2/identities.hpp"
#include "c2/json_io.hpp"
#include "c2/kirchhoff.hpp"
#include "c2/momentum.hpp"

using namespace c2;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_input = 2;
constexpr int exit_hypothesis = 3;
constexpr int exit_divisibility = 4;

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

// "0,1|2|3,4" -> {{0,1},{2},{3,4}}
VertexPartition parse_parts(const std::string& s) {
    VertexPartition parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '|')) parts.push_back(parse_int_list(part));
    return parts;
}

struct Options {
    std::string graph_path;
    std::string right_path;
    std::vector<int> qs{2, 3};
    std::vector<int> order;
    std::vector<int> I, J, K;
    std::string parts;
    std::vector<int> edges;
    std::vector<int> joins;
    std::vector<int> vertices;
    std::vector<std::string> quadruple;
    int vertex = -1;
    int edge6 = 6;
    bool json = false;
    int threads = 1;
    std::uint64_t work_cap = std::uint64_t(1) << 32;
    unsigned seed = 0;
    int tuples = 20;
    CountOptions count_opts() const { return {work_cap, threads}; }
};

void print_report(const C2Report& rep, const Options& opt) {
    if (opt.json) {
        std::cout << to_json(rep).dump(2) << "\n";
        return;
    }
    for (auto& w : rep.warnings) std::cout << "# " << w << "\n";
    std::cout << "q\tcount\tresidue\n";
    for (auto& e : rep.entries) std::cout << e.q << "\t" << e.count.str() << "\t" << e.residue << "\n";
}

int print_checks(const std::vector<CheckResult>& checks, const Options& opt) {
    bool failed = false;
    if (opt.json) {
        std::cout << to_json(checks).dump(2) << "\n";
    } else {
        for (auto& c : checks) {
            std::cout << (c.verdict == Verdict::holds ? "PASS" : c.verdict == Verdict::fails ? "FAIL" : "SKIP")
                      << "  " << c.name;
            if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
            std::cout << "\n";
        }
    }
    for (auto& c : checks)
        if (c.verdict == Verdict::fails) failed = true;
    return failed ? exit_check_failed : exit_ok;
}

// first vertex of the wanted degree
int find_vertex_of_degree(const Graph& g, int deg) {
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) == deg) return v;
    throw hypothesis_error("no vertex of degree " + std::to_string(deg));
}

JoinSpec make_join(const Graph& left, const Graph& right, int k) {
    JoinSpec spec;
    spec.left = left;
    spec.right = right;
    spec.left_vertex = find_vertex_of_degree(left, k);
    spec.right_vertex = find_vertex_of_degree(right, k);
    for (int i = 0; i < k; ++i) spec.matching.push_back(i);
    return spec;
}

int pick_j(const Graph& g, std::mt19937& rng, std::vector<int> avoid) {
    auto labels = g.labels();
    for (int tries = 0; tries < 1000; ++tries) {
        int j = labels[rng() % labels.size()];
        if (std::find(avoid.begin(), avoid.end(), j) == avoid.end()) return j;
    }
    throw input_error("graph too small to pick a fresh edge");
}

std::vector<CheckResult> suite_dodgson(const Graph& g, const Options& opt) {
    std::vector<CheckResult> out;
    MultiPoly p = psi(g);
    bool cd = true;
    for (auto& e : g.edges())
        if (p != psi(g.delete_edge(e.label)) * MultiPoly::var(e.label) + psi(g.contract_edge(e.label))) cd = false;
    out.push_back(detail::check("contraction-deletion on every edge", cd));

    std::mt19937 rng(opt.seed);
    std::vector<int> labels = g.labels();
    auto pick = [&]() { return labels[rng() % labels.size()]; };
    int ok1 = 0, ok2 = 0, n1 = 0, n2 = 0;
    while (n1 < opt.tuples || n2 < opt.tuples) {
        int a = pick(), b = pick(), x = pick();
        if (a == b || a == x || b == x) continue;
        if (n1 < opt.tuples && ((a < x && b < x) || (x < a && x < b))) {
            ++n1;
            if (dodgson_identity1(g, {}, {}, a, b, x)) ++ok1;
        }
        int lo = std::min(a, b), hi = std::max(a, b);
        if (n2 < opt.tuples && x < lo) {
            ++n2;
            if (dodgson_identity2(g, {}, {pick_j(g, rng, {lo, hi, x})}, lo, hi, x)) ++ok2;
        }
    }
    out.push_back(detail::check("Dodgson identity 1 on random admissible tuples",
                                ok1 == opt.tuples, std::to_string(ok1) + "/" + std::to_string(opt.tuples)));
    out.push_back(detail::check("Dodgson identity 2 on random admissible tuples",
                                ok2 == opt.tuples, std::to_string(ok2) + "/" + std::to_string(opt.tuples)));

    // vanishing: the full star of each vertex inside I, and a cycle in I+K
    bool star_ok = true;
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::vector<int> star;
        for (auto& e : g.edges())
            if (e.tail == v || e.head == v) star.push_back(e.label);
        if (star.size() < 1 || star.size() > 4) continue;
        std::vector<int> other;
        for (int l : labels)
            if (std::find(star.begin(), star.end(), l) == star.end()) other.push_back(l);
        if (other.size() < star.size()) continue;
        other.resize(star.size());
        if (!dodgson(g, {star, other, {}}).is_zero()) star_ok = false;
    }
    out.push_back(detail::check("star vanishing", star_ok));
    return out;
}

std::vector<CheckResult> suite_plucker(const Graph& g, const Options& opt) {
    std::vector<CheckResult> out;
    std::vector<int> labels = g.labels();
    std::sort(labels.begin(), labels.end());
    std::mt19937 rng(opt.seed);
    int ok2 = 0, ok3 = 0, okk = 0, n2 = 0, n3 = 0;
    if (labels.size() < 4) {
        out.push_back({"plucker", Verdict::hypotheses_not_met, "needs at least 4 edges"});
        return out;
    }
    while (n2 < opt.tuples) {
        std::vector<int> pickv = labels;
        std::shuffle(pickv.begin(), pickv.end(), rng);
        pickv.resize(4);
        std::sort(pickv.begin(), pickv.end());
        ++n2;
        if (plucker_n2(g, {pickv[0], pickv[1], pickv[2], pickv[3]})) ++ok2;
    }
    out.push_back(detail::check("Plucker n=2", ok2 == opt.tuples, std::to_string(ok2) + "/" + std::to_string(opt.tuples)));
    if (labels.size() >= 6) {
        while (n3 < opt.tuples) {
            std::vector<int> pickv = labels;
            std::shuffle(pickv.begin(), pickv.end(), rng);
            pickv.resize(6);
            std::sort(pickv.begin(), pickv.end());
            ++n3;
            std::array<int, 6> t{pickv[0], pickv[1], pickv[2], pickv[3], pickv[4], pickv[5]};
            if (plucker_n3(g, t)) ++ok3;
            if (plucker_kernel(g, t)) ++okk;
        }
        out.push_back(detail::check("Plucker n=3", ok3 == n3, std::to_string(ok3) + "/" + std::to_string(n3)));
        out.push_back(detail::check("Plucker kernel (4-term form)", okk == n3, std::to_string(okk) + "/" + std::to_string(n3)));
    }
    return out;
}

std::vector<CheckResult> suite_sing(const Graph& g, const Options& opt) {
    std::vector<CheckResult> out;
    for (int q : opt.qs) out.push_back(sing_mod_q(g, q, opt.count_opts()));
    return out;
}

std::vector<CheckResult> suite_joins3(const Graph& left, const Graph& right, const Options& opt) {
    std::vector<CheckResult> out;
    JoinSpec spec = make_join(left, right, 3);
    auto s = three_join_structure(spec);
    out.push_back(detail::check("coefficient quadratic relation (left side)", s.coeff_quadratic_left));
    out.push_back(detail::check("coefficient quadratic relation (right side)", s.coeff_quadratic_right));
    out.push_back(detail::check("quadric form of the join polynomial", s.quadric_form));
    out.push_back(detail::check("expanded form of the join polynomial", s.expanded_form));
    out.push_back(detail::check("structure coefficients match Dodgson minors", s.dodgson_match));
    Graph G = edge_join(spec);
    int l = 4, r = 4 + left.edge_count() - 3;
    auto v = three_join_vanishing(spec, l, r, opt.qs, opt.count_opts());
    out.push_back(detail::check("5-invariant (1,2,3,l,r) vanishes", v.five_invariant_zero));
    out.push_back(detail::check("proof kernel Psi^{12l,13r} vanishes", v.kernel_zero));
    for (auto& [q, ok] : v.q3_divides)
        out.push_back(detail::check("q^3 | [X_G]_q at q=" + std::to_string(q), ok));
    return out;
}

std::vector<CheckResult> suite_joins4(const Graph& left, const Graph& right, const Options& opt) {
    std::vector<CheckResult> out;
    JoinSpec spec = make_join(left, right, 4);
    Graph G = edge_join(spec);
    int l = 5, r = 5 + left.edge_count() - 4;
    auto rep = four_join_d6(spec, l, r);
    out.push_back(detail::check("vanishing Dodgsons for the x1 step", rep.vanishing_dodgsons));
    out.push_back(detail::check("D6 product formula, all three pairings", rep.product_formula));
    out.push_back(detail::check("A-bracket antisymmetry", rep.bracket_antisymmetry));
    out.push_back(detail::check("A-bracket three-term relation", rep.bracket_three_term));
    out.push_back(detail::check("P = A-bracket products", rep.bracket_factorization));
    out.push_back(detail::check("twisting identities", rep.twisting));
    out.push_back(chevalley_c2_zero(spec, l, r, opt.qs, opt.count_opts()));
    return out;
}

std::vector<CheckResult> suite_subdiv(const Graph& g, const Options& opt) {
    std::vector<CheckResult> out;
    if (opt.edges.empty()) {
        out.push_back({"subdivergence", Verdict::hypotheses_not_met, "pass --edges with the subgraph labels"});
        return out;
    }
    auto rep = subdivergence_square(g, opt.edges);
    out.push_back({"subdivergence reduction (m=" + std::to_string(rep.m) + ")", rep.verdict, rep.detail});
    if (!opt.joins.empty()) {
        auto co = subdivergence_corollary(g, opt.edges, opt.joins);
        out.push_back({"subdivergence corollary (m=" + std::to_string(co.m) + ", k=" + std::to_string(opt.joins.size()) + ")",
                       co.verdict, co.detail});
    }
    return out;
}

std::vector<CheckResult> suite_split4(const Graph& g, const Options& opt) {
    std::vector<CheckResult> out;
    int v = opt.vertex >= 0 ? opt.vertex : find_vertex_of_degree(g, 4);
    auto rep = split_vertex_d6(g, v, opt.edge6);
    out.push_back(detail::check("cyclic resultant identity", rep.cyclic_resultant));
    out.push_back(detail::check("B, C vanish at x5=0", rep.bc_vanish_at_x5));
    out.push_back(detail::check("split Dodgsons are +-(A-B), +-(A-C), +-(B-C)", rep.split_dodgsons));
    out.push_back(detail::check("telescoping sum vanishes", rep.telescoping));
    out.push_back(detail::check("D6 two-term identity", rep.d6_two_term));
    out.push_back(detail::check("12|34 resolution collapses on its double edge", rep.double_edge_collapses));
    return out;
}

std::vector<CheckResult> suite_fourterm(const Options& opt) {
    std::vector<CheckResult> out;
    if (opt.quadruple.size() != 4) {
        out.push_back({"four-term relation", Verdict::hypotheses_not_met, "pass --quadruple with four graph files"});
        return out;
    }
    std::array<Graph, 4> gs = {load_graph(opt.quadruple[0]), load_graph(opt.quadruple[1]),
                               load_graph(opt.quadruple[2]), load_graph(opt.quadruple[3])};
    auto rep = four_term_d7(gs);
    std::string signs;
    for (int s : rep.signs) signs += (s > 0 ? "+" : s < 0 ? "-" : "?");
    out.push_back({"four-term D7 relation (signs " + signs + ")", rep.verdict, rep.detail});
    return out;
}

std::vector<CheckResult> suite_oneterm(const Graph& g, const Options& opt) {
    std::vector<CheckResult> out;
    if (opt.edges.size() != 5 || opt.vertices.size() != 4) {
        out.push_back({"one-term relation", Verdict::hypotheses_not_met,
                       "pass --edges with five edges and --vertices with a,b,c,d"});
        return out;
    }
    auto rep = one_term_check(g, {opt.edges[0], opt.edges[1], opt.edges[2], opt.edges[3], opt.edges[4]},
                              opt.vertices[0], opt.vertices[1], opt.vertices[2], opt.vertices[3]);
    out.push_back({"one-term relation", rep.verdict, rep.detail});
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph polynomials, c2 invariants and their identities"};
    app.require_subcommand(1);
    Options opt;
    std::string qs_str = "2,3", order_str, i_str, j_str, k_str, edges_str, joins_str, vertices_str;

    auto add_common = [&](CLI::App* cmd, bool needs_graph = true) {
        if (needs_graph) cmd->add_option("--graph", opt.graph_path, "graph file")->required();
        cmd->add_flag("--json", opt.json, "JSON output");
        cmd->add_option("--threads", opt.threads, "worker threads for counting");
        cmd->add_option("--work-cap", opt.work_cap, "maximum evaluated assignments");
        cmd->add_option("--seed", opt.seed, "seed for randomized searches");
    };

    auto* cpsi = app.add_subcommand("psi", "graph polynomial");
    add_common(cpsi);

    auto* cdod = app.add_subcommand("dodgson", "Dodgson polynomial Psi^{I,J}_K");
    add_common(cdod);
    cdod->add_option("--I", i_str, "row edge labels")->required();
    cdod->add_option("--J", j_str, "column edge labels")->required();
    cdod->add_option("--K", k_str, "edge labels set to zero");

    auto* cfor = app.add_subcommand("forest", "spanning forest polynomial");
    add_common(cfor);
    cfor->add_option("--parts", opt.parts, "vertex partition, e.g. \"0,1|2\"")->required();

    auto* ccount = app.add_subcommand("count", "point counts of the graph hypersurface");
    add_common(ccount);
    ccount->add_option("--q", qs_str, "field sizes");
    bool count_sing = false, count_elim = false;
    ccount->add_flag("--sing", count_sing, "count the singular locus system instead");
    ccount->add_flag("--elim", count_elim, "use elimination counting");

    auto* cc2 = app.add_subcommand("c2", "c2 invariant");
    std::string mode;
    cc2->add_option("mode", mode, "param | denom | mom")->required();
    add_common(cc2);
    cc2->add_option("--q", qs_str, "field sizes");
    cc2->add_option("--order", order_str, "edge order for denom mode");

    auto* cred = app.add_subcommand("reduce", "denominator reduction trace");
    add_common(cred);
    cred->add_option("--order", order_str, "edge order")->required();

    auto* cver = app.add_subcommand("verify", "verification suites");
    std::string suite;
    cver->add_option("suite", suite, "dodgson|plucker|sing|joins3|joins4|subdiv|split4|fourterm|oneterm")->required();
    cver->add_option("--graph", opt.graph_path, "graph file");
    cver->add_option("--right", opt.right_path, "right-side graph for joins");
    cver->add_option("--q", qs_str, "field sizes");
    cver->add_option("--edges", edges_str, "edge labels (subdiv H, oneterm edges)");
    cver->add_option("--joins", joins_str, "join edge labels (subdiv corollary)");
    cver->add_option("--vertex", opt.vertex, "4-valent vertex for split4");
    cver->add_option("--edge6", opt.edge6, "sixth edge for split4");
    cver->add_option("--vertices", vertices_str, "attachment vertices a,b,c,d for oneterm");
    cver->add_option("--quadruple", opt.quadruple, "four graph files for fourterm")->expected(4);
    cver->add_option("--tuples", opt.tuples, "random tuples per identity");
    cver->add_flag("--json", opt.json, "JSON output");
    cver->add_option("--threads", opt.threads, "worker threads");
    cver->add_option("--work-cap", opt.work_cap, "maximum evaluated assignments");
    cver->add_option("--seed", opt.seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        opt.qs = parse_int_list(qs_str);
        if (!order_str.empty()) opt.order = parse_int_list(order_str);
        if (!i_str.empty()) opt.I = parse_int_list(i_str);
        if (!j_str.empty()) opt.J = parse_int_list(j_str);
        if (!k_str.empty()) opt.K = parse_int_list(k_str);
        if (!edges_str.empty()) opt.edges = parse_int_list(edges_str);
        if (!joins_str.empty()) opt.joins = parse_int_list(joins_str);
        if (!vertices_str.empty()) opt.vertices = parse_int_list(vertices_str);

        if (cpsi->parsed()) {
            Graph g = load_graph(opt.graph_path);
            MultiPoly p = psi(g);
            if (opt.json)
                std::cout << nlohmann::json{{"schema", json_schema}, {"psi", p.to_string()}}.dump(2) << "\n";
            else
                std::cout << p.to_string() << "\n";
        } else if (cdod->parsed()) {
            Graph g = load_graph(opt.graph_path);
            MultiPoly p = dodgson(g, {opt.I, opt.J, opt.K});
            if (opt.json)
                std::cout << nlohmann::json{{"schema", json_schema}, {"dodgson", p.to_string()}}.dump(2) << "\n";
            else
                std::cout << p.to_string() << "\n";
        } else if (cfor->parsed()) {
            Graph g = load_graph(opt.graph_path);
            MultiPoly p = forest_poly(g, parse_parts(opt.parts));
            if (opt.json)
                std::cout << nlohmann::json{{"schema", json_schema}, {"forest", p.to_string()}}.dump(2) << "\n";
            else
                std::cout << p.to_string() << "\n";
        } else if (ccount->parsed()) {
            Graph g = load_graph(opt.graph_path);
            std::vector<MultiPoly> sys = count_sing ? sing_system(g) : std::vector<MultiPoly>{psi(g)};
            std::vector<int> vars = g.labels();
            std::sort(vars.begin(), vars.end());
            nlohmann::json arr = nlohmann::json::array();
            for (int q : opt.qs) {
                CountResult c = count_elim ? count_points_elim(sys, vars, q, opt.count_opts())
                                           : count_points(sys, vars, q, opt.count_opts());
                if (opt.json)
                    arr.push_back(to_json(c));
                else
                    std::cout << "q=" << q << "\tcount=" << c.count.str() << "\n";
            }
            if (opt.json)
                std::cout << nlohmann::json{{"schema", json_schema}, {"counts", arr}}.dump(2) << "\n";
        } else if (cc2->parsed()) {
            Graph g = load_graph(opt.graph_path);
            C2Report rep;
            if (mode == "param") {
                rep = c2_parametric(g, opt.qs, opt.count_opts());
            } else if (mode == "denom") {
                std::vector<int> order = opt.order;
                if (order.empty()) {
                    order = g.labels();
                    std::sort(order.begin(), order.end());
                    order.pop_back();
                }
                rep = c2_via_denominator(g, order, opt.qs, opt.count_opts());
            } else if (mode == "mom") {
                rep = c2_momentum(g, opt.qs, opt.count_opts());
            } else {
                throw input_error("unknown c2 mode: " + mode);
            }
            print_report(rep, opt);
        } else if (cred->parsed()) {
            Graph g = load_graph(opt.graph_path);
            DenomTrace tr = denominator_reduce(g, opt.order);
            if (opt.json) {
                std::cout << to_json(tr).dump(2) << "\n";
            } else {
                for (auto& s : tr.steps) std::cout << "D^" << s.n << " = " << s.d.to_string() << "\n";
                std::cout << "status: " << to_string(tr.status)
                          << (tr.note.empty() ? "" : " (" + tr.note + ")") << "\n";
            }
        } else if (cver->parsed()) {
            std::vector<CheckResult> checks;
            if (suite == "fourterm") {
                checks = suite_fourterm(opt);
            } else {
                if (opt.graph_path.empty()) throw input_error("verify: --graph is required for this suite");
                Graph g = load_graph(opt.graph_path);
                Graph right = opt.right_path.empty() ? g : load_graph(opt.right_path);
                if (suite == "dodgson") checks = suite_dodgson(g, opt);
                else if (suite == "plucker") checks = suite_plucker(g, opt);
                else if (suite == "sing") checks = suite_sing(g, opt);
                else if (suite == "joins3") checks = suite_joins3(g, right, opt);
                else if (suite == "joins4") checks = suite_joins4(g, right, opt);
                else if (suite == "subdiv") checks = suite_subdiv(g, opt);
                else if (suite == "split4") checks = suite_split4(g, opt);
                else if (suite == "oneterm") checks = suite_oneterm(g, opt);
                else throw input_error("unknown suite: " + suite);
            }
            return print_checks(checks, opt);
        }
        return exit_ok;
    } catch (const divisibility_error& e) {
        std::cerr << "divisibility failure: " << e.what() << "\n";
        return exit_divisibility;
    } catch (const hypothesis_error& e) {
        std::cerr << "hypothesis not met: " << e.what() << "\n";
        return exit_hypothesis;
    } catch (const work_cap_error& e) {
        std::cerr << "work cap exceeded: " << e.what() << "\n";
        return exit_hypothesis;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
}
