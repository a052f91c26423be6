#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "c2/kirchhoff.hpp"

using namespace c2;

namespace {

Graph triangle() { return Graph(3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}}); }
Graph sunset() { return Graph(2, std::vector<std::pair<int, int>>{{0, 1}, {0, 1}, {0, 1}}); }
Graph k4() {
    return Graph(4, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}
Graph w4() {
    return Graph(5, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {4, 1}});
}

// Independent oracle: the spanning-tree expansion of the graph polynomial.
MultiPoly psi_from_trees(const Graph& g) {
    MultiPoly p;
    for (auto& tree : spanning_trees(g)) {
        std::vector<Monomial::Factor> fs;
        for (int l : g.labels())
            if (std::find(tree.begin(), tree.end(), l) == tree.end()) fs.push_back({l, 1});
        p += MultiPoly::term(Monomial(std::move(fs)), 1);
    }
    return p;
}

} // namespace

TEST_CASE("graph matrix shape") {
    GraphMatrix gm = graph_matrix(triangle());
    CHECK(gm.m.size() == 5); // 3 edges + 2 of 3 vertices
    CHECK(gm.removed_vertex == 2);
    Graph single(2, std::vector<std::pair<int, int>>{{0, 1}});
    GraphMatrix sm = graph_matrix(single);
    CHECK(sm.m.size() == 2);
    CHECK(sm.m.det() == MultiPoly::constant(1));
}

TEST_CASE("psi equals the spanning-tree expansion") {
    // every graph in the suite, N <= 12
    std::vector<Graph> suite = {triangle(), sunset(), k4(), w4(),
                                Graph(2, std::vector<std::pair<int, int>>{{0, 1}, {0, 1}}),
                                Graph(4, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}})};
    // a 3-edge join of two K4s (9 edges)
    JoinSpec js{k4(), 3, k4(), 0, {0, 1, 2}};
    suite.push_back(edge_join(js));
    for (auto& g : suite) {
        MultiPoly p = psi(g);
        CHECK(p == psi_from_trees(g));
        // all coefficients are +1
        for (auto& [m, c] : p.terms()) CHECK(c == 1);
    }
    CHECK(psi(sunset()).to_string() == "x1*x2 + x1*x3 + x2*x3");
    CHECK(psi(triangle()).to_string() == "x1 + x2 + x3");
    CHECK(psi(k4()).term_count() == 16);
}

TEST_CASE("psi of degenerate graphs") {
    CHECK(psi(Graph::zero_graph()).is_zero());
    Graph disconnected(4, std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
    CHECK(psi(disconnected).is_zero());
    // spanning tree count at x_e = 1 equals det of the all-ones evaluation
    Graph g = k4();
    std::map<int, Int> ones;
    for (int l : g.labels()) ones[l] = 1;
    CHECK(psi(g).eval_partial(ones).constant_value() == Int(spanning_trees(g).size()));
}

TEST_CASE("dodgson basics") {
    Graph c3 = triangle();
    CHECK(dodgson(c3, {{}, {}, {}}) == psi(c3));
    // Psi^{1,1} = dPsi/dx1 = 1 for the triangle
    CHECK(dodgson(c3, {{1}, {1}, {}}) == MultiPoly::constant(1));
    // Psi^{1,2} has degree h-1 = 0
    MultiPoly d12 = dodgson(c3, {{1}, {2}, {}});
    CHECK(d12.degree() == 0);
    CHECK((d12 == MultiPoly::constant(1) || d12 == MultiPoly::constant(-1)));
    CHECK_THROWS_AS(dodgson(c3, {{1}, {1, 2}, {}}), input_error);
    CHECK(dodgson(Graph::zero_graph(), {{}, {}, {}}).is_zero());
}

TEST_CASE("contraction-deletion") {
    for (auto& g : {triangle(), sunset(), k4(), w4()}) {
        MultiPoly p = psi(g);
        for (auto& e : g.edges()) {
            CHECK(p == psi(g.delete_edge(e.label)) * MultiPoly::var(e.label) + psi(g.contract_edge(e.label)));
            // multilinearity
            CHECK(p.degree_in(e.label) <= 1);
        }
    }
}

TEST_CASE("dodgson contraction-deletion up to sign") {
    Graph g = k4();
    for (int e = 5; e <= 6; ++e) {
        MultiPoly lhs = dodgson(g, {{1, e}, {2, e}, {}});
        MultiPoly rhs = dodgson(g.delete_edge(e), {{1}, {2}, {}});
        CHECK((lhs == rhs || lhs == -rhs));
        MultiPoly lhs2 = dodgson(g, {{1}, {2}, {e}});
        MultiPoly rhs2 = dodgson(g.contract_edge(e), {{1}, {2}, {}});
        CHECK((lhs2 == rhs2 || lhs2 == -rhs2));
    }
}

TEST_CASE("dodgson identities on random admissible tuples") {
    std::mt19937 rng(3);
    Graph g = w4();
    auto labels = g.labels();
    auto pick = [&]() { return labels[rng() % labels.size()]; };
    int done = 0;
    while (done < 25) {
        int a = pick(), b = pick(), xv = pick();
        if (a == b || a == xv || b == xv) continue;
        if (!((a < xv && b < xv) || (xv < a && xv < b))) continue;
        // identity 1 with I = J = {}
        MultiPoly lhs = resultant(dodgson(g, {{}, {}, {}}), dodgson(g, {{a}, {b}, {}}), xv);
        CHECK(lhs == dodgson(g, {{xv}, {b}, {}}) * dodgson(g, {{a}, {xv}, {}}));
        ++done;
    }
    done = 0;
    while (done < 25) {
        int xv = pick(), a = pick(), b = pick(), j = pick();
        if (xv >= a || a >= b) continue;
        if (j == xv || j == a || j == b) continue;
        // identity 2, |J| = |I|+1, with the position sign of the fixed matrix
        MultiPoly lhs = resultant(dodgson(g, {{a}, {j}, {}}), dodgson(g, {{b}, {j}, {}}), xv);
        Int sgn = (j < xv) ? 1 : -1;
        CHECK(lhs == sgn * (dodgson(g, {{xv}, {j}, {}}) * dodgson(g, {{a, b}, {j, xv}, {}})));
        ++done;
    }
}

TEST_CASE("plucker relations") {
    Graph g = k4();
    for (int i1 = 1; i1 <= 6; ++i1)
        for (int i2 = i1 + 1; i2 <= 6; ++i2)
            for (int i3 = i2 + 1; i3 <= 6; ++i3)
                for (int i4 = i3 + 1; i4 <= 6; ++i4) {
                    MultiPoly s = dodgson(g, {{i1, i2}, {i3, i4}, {}}) - dodgson(g, {{i1, i3}, {i2, i4}, {}}) +
                                  dodgson(g, {{i1, i4}, {i2, i3}, {}});
                    CHECK(s.is_zero());
                }
    // n=3 on W4, all 28 sorted 6-tuples
    Graph w = w4();
    for (int i1 = 1; i1 <= 8; ++i1)
        for (int i2 = i1 + 1; i2 <= 8; ++i2)
            for (int i3 = i2 + 1; i3 <= 8; ++i3)
                for (int i4 = i3 + 1; i4 <= 8; ++i4)
                    for (int i5 = i4 + 1; i5 <= 8; ++i5)
                        for (int i6 = i5 + 1; i6 <= 8; ++i6) {
                            MultiPoly s = dodgson(w, {{i1, i2, i3}, {i4, i5, i6}, {}}) -
                                          dodgson(w, {{i1, i2, i4}, {i3, i5, i6}, {}}) +
                                          dodgson(w, {{i1, i2, i5}, {i3, i4, i6}, {}}) -
                                          dodgson(w, {{i1, i2, i6}, {i3, i4, i5}, {}});
                            CHECK(s.is_zero());
                        }
}

TEST_CASE("vanishing conditions") {
    Graph g = k4();
    // the full star {1,2,3} of vertex 0 inside I
    CHECK(dodgson(g, {{1, 2, 3}, {4, 5, 6}, {}}).is_zero());
    CHECK(dodgson(g, {{4, 5, 6}, {1, 2, 3}, {}}).is_zero()); // ... or inside J
    // a cycle {1,4,2} inside I u K with E n I n J empty
    CHECK(dodgson(g, {{1, 4}, {5, 6}, {2}}).is_zero());
    // parallel edges form a 2-cycle
    Graph doubled(4, std::vector<std::pair<int, int>>{
                         {0, 1}, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(dodgson(doubled, {{1, 2}, {3, 4}, {}}).is_zero());
}

TEST_CASE("forest polynomials") {
    Graph c3 = triangle();
    SECTION("single part gives psi") {
        CHECK(forest_poly(c3, {{0, 1, 2}}) == psi(c3));
        CHECK(forest_poly(k4(), {{0, 1, 2, 3}}) == psi(k4()));
    }
    SECTION("two separated corners of the triangle") {
        MultiPoly p = forest_poly(c3, {{0}, {1}});
        // 2-tree forests of C3 keep 0 and 1 apart: forests {2},{3} (single edges)
        // complements are pairs of edges
        CHECK(p.degree() == 2);
        CHECK(p == MultiPoly::var(1) * MultiPoly::var(2) + MultiPoly::var(1) * MultiPoly::var(3));
    }
    SECTION("unrealizable partition") {
        // one part spread over two components
        Graph disc(4, std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
        CHECK(forest_poly(disc, {{0, 2}, {1}, {3}}).is_zero());
    }
    SECTION("part order does not matter") {
        Graph g = k4();
        CHECK(forest_poly(g, {{0}, {1, 2}}) == forest_poly(g, {{1, 2}, {0}}));
    }
    SECTION("input validation") {
        CHECK_THROWS_AS(forest_poly(c3, {{0}, {0}}), input_error);
        CHECK_THROWS_AS(forest_poly(c3, {{9}}), input_error);
        CHECK(forest_poly_or_zero(c3, {{0}, {0}}).is_zero());
    }
}

namespace {

// rename variables by a permutation of labels
MultiPoly rename_vars(const MultiPoly& p, const std::map<int, int>& perm) {
    std::vector<MultiPoly::Term> ts;
    for (auto& [m, c] : p.terms()) {
        std::vector<Monomial::Factor> fs;
        for (auto& [v, e] : m.factors()) {
            auto it = perm.find(v);
            fs.push_back({it == perm.end() ? v : it->second, e});
        }
        ts.push_back({Monomial(std::move(fs)), c});
    }
    return MultiPoly::from_terms(std::move(ts));
}

} // namespace

TEST_CASE("twisting a join relabels psi by a side automorphism") {
    // a Klein twist is undone by the rim automorphism of the twisted side:
    // psi agrees after permuting that side's internal edge variables only
    // (the join variables stay put)
    JoinSpec spec{w4(), 0, w4(), 0, {0, 1, 2, 3}};
    MultiPoly base = psi(edge_join(spec));
    struct Twist {
        std::array<int, 4> matching;
        std::map<int, int> rim; // induced permutation of the right rim labels
    };
    const std::vector<Twist> twists = {
        {{1, 0, 3, 2}, {{10, 12}, {12, 10}}},                     // reflection
        {{2, 3, 0, 1}, {{9, 11}, {11, 9}, {10, 12}, {12, 10}}},   // half turn
        {{3, 2, 1, 0}, {{9, 11}, {11, 9}}},                       // reflection
    };
    for (auto& tw : twists) {
        JoinSpec alt = spec;
        alt.matching = {tw.matching[0], tw.matching[1], tw.matching[2], tw.matching[3]};
        MultiPoly twisted = psi(edge_join(alt));
        CHECK(twisted == rename_vars(base, tw.rim));
    }
}

TEST_CASE("dodgson as signed forest sum") {
    SECTION("reassembly on K4") {
        Graph g = k4();
        auto terms = dodgson_as_forest_sum(g, {1}, {2});
        REQUIRE(!terms.empty());
        Graph rest = g.delete_edges({1, 2});
        MultiPoly sum;
        for (auto& [s, parts] : terms) sum += Int(s) * forest_poly(rest, parts);
        CHECK(sum == dodgson(g, {{1}, {2}, {}}));
    }
    SECTION("reassembly on W4 with |I| = 2") {
        Graph g = w4();
        auto terms = dodgson_as_forest_sum(g, {1, 5}, {2, 6});
        Graph rest = g.delete_edges({1, 5, 2, 6});
        MultiPoly sum;
        for (auto& [s, parts] : terms) sum += Int(s) * forest_poly(rest, parts);
        CHECK(sum == dodgson(g, {{1, 5}, {2, 6}, {}}));
    }
    SECTION("I = J = {} gives psi in one part") {
        Graph g = triangle();
        CHECK_THROWS_AS(dodgson_as_forest_sum(g, {1}, {1}), input_error); // I and J intersect
    }
    SECTION("sign is witness independent") {
        // every realizing forest must produce the same determinant sign
        CHECK_NOTHROW(dodgson_as_forest_sum(k4(), {1}, {2}, true));
        CHECK_NOTHROW(dodgson_as_forest_sum(w4(), {1, 5}, {2, 6}, true));
        CHECK_NOTHROW(dodgson_as_forest_sum(w4(), {3}, {7}, true));
    }
}
