#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "c2/count.hpp"
#include "c2/fq.hpp"
#include "c2/kirchhoff.hpp"

using namespace c2;

namespace {

MultiPoly x(int v) { return MultiPoly::var(v); }
Graph sunset() { return Graph(2, std::vector<std::pair<int, int>>{{0, 1}, {0, 1}, {0, 1}}); }
Graph k4() {
    return Graph(4, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

} // namespace

TEST_CASE("field axioms for every supported q") {
    for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27}) {
        const FieldTables& F = FieldTables::get(q);
        for (int a = 0; a < q; ++a) {
            if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
            CHECK(F.add(a, F.neg(a)) == 0);
            for (int b = 0; b < q; ++b) {
                // Frobenius additivity: (a+b)^p = a^p + b^p
                CHECK(F.pow(F.add(a, b), F.p) == F.add(F.pow(a, F.p), F.pow(b, F.p)));
                for (int c = 0; c < q && a < 6 && b < 6; ++c) {
                    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
                    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                }
            }
        }
        // multiplicative group order
        for (int a = 1; a < q; ++a) CHECK(F.pow(a, q - 1) == 1);
    }
    CHECK_THROWS_AS(FieldTables::get(6), input_error);
    CHECK_THROWS_AS(FieldTables::get(12), input_error);
}

TEST_CASE("FqElem wrapper") {
    FqElem a(9, 5), b(9, 7);
    CHECK((a * a.inverse()).value() == 1);
    CHECK((a + (-a)).value() == 0);
    CHECK(a.pow(8) == FqElem(9, 1));
    CHECK((a * b) == (b * a));
}

TEST_CASE("count_points on stated examples") {
    MultiPoly plane = x(1) + x(2) + x(3);
    for (int q : {2, 3, 5}) {
        CHECK(count_points({plane}, {1, 2, 3}, q).count == Int(q) * q);
    }
    MultiPoly s = x(1) * x(2) + x(1) * x(3) + x(2) * x(3);
    CHECK(count_points({s}, {1, 2, 3}, 2).count == 4);
    CHECK(count_points({s}, {1, 2, 3}, 3).count == 9);
    // explicit ambient: a zero polynomial vanishes everywhere
    CHECK(count_points({MultiPoly::zero()}, {1, 2}, 3).count == 9);
    // empty system: the whole space
    CHECK(count_points({}, {1, 2, 3}, 2).count == 8);
    // nonzero constant: empty variety
    CHECK(count_points({MultiPoly::constant(1)}, {1, 2}, 5).count == 0);
}

TEST_CASE("work cap") {
    MultiPoly p = x(1);
    CountOptions opts;
    opts.work_cap = 100;
    std::vector<int> vars;
    for (int v = 1; v <= 12; ++v) vars.push_back(v);
    CHECK_THROWS_AS(count_points({p}, vars, 3, opts), work_cap_error);
}

TEST_CASE("threading does not change counts") {
    Graph g = k4();
    MultiPoly p = psi(g);
    std::vector<int> vars = g.labels();
    CountOptions one, four;
    four.threads = 4;
    for (int q : {2, 3, 5}) CHECK(count_points({p}, vars, q, one).count == count_points({p}, vars, q, four).count);
}

TEST_CASE("counting is invariant under variable permutation") {
    MultiPoly f = x(1) * x(2) + x(3);
    MultiPoly g = x(3) * x(2) + x(1); // same shape, roles permuted
    for (int q : {2, 3, 5}) CHECK(count_points({f}, {1, 2, 3}, q).count == count_points({g}, {1, 2, 3}, q).count);
}

TEST_CASE("elimination counting agrees with enumeration") {
    SECTION("single linear polynomial case split") {
        // [ax+b]: q [a,b] + q^{N-1} - [a]
        MultiPoly a = x(2) + x(3), b = x(2) * x(3), f = a * x(1) + b;
        for (int q : {2, 3, 5, 7}) {
            Int lhs = count_points_elim({f}, {1, 2, 3}, q).count;
            Int rhs = Int(q) * count_points({a, b}, {2, 3}, q).count + Int(q) * q -
                      count_points({a}, {2, 3}, q).count;
            CHECK(lhs == rhs);
            CHECK(lhs == count_points({f}, {1, 2, 3}, q).count);
        }
    }
    SECTION("graph hypersurfaces") {
        for (int q : {2, 3, 5, 7}) {
            MultiPoly p = psi(k4());
            CHECK(count_points({p}, q).count == count_points_elim({p}, q).count);
        }
    }
    SECTION("singular-locus system of K4") {
        Graph g = k4();
        MultiPoly p = psi(g);
        std::vector<MultiPoly> sys;
        for (int l : g.labels()) sys.push_back(split(p, l).leading);
        for (int q : {2, 3}) {
            CHECK(count_points(sys, g.labels(), q).count == count_points_elim(sys, g.labels(), q).count);
        }
    }
    SECTION("random small systems") {
        std::mt19937 rng(5);
        std::uniform_int_distribution<int> coeff(-2, 2);
        int cases = 0;
        while (cases < 50) {
            int nvars = 3 + static_cast<int>(rng() % 2);
            int npolys = 1 + static_cast<int>(rng() % 3);
            std::vector<MultiPoly> sys;
            for (int p = 0; p < npolys; ++p) {
                MultiPoly f;
                for (int t = 0; t < 3; ++t) {
                    std::vector<Monomial::Factor> fs;
                    for (int v = 1; v <= nvars; ++v)
                        if (rng() % 2) fs.push_back({v, 1});
                    f += MultiPoly::term(Monomial(std::move(fs)), coeff(rng));
                }
                sys.push_back(f);
            }
            std::vector<int> vars;
            for (int v = 1; v <= nvars; ++v) vars.push_back(v);
            int q = (rng() % 2) ? 2 : 3;
            CHECK(count_points(sys, vars, q).count == count_points_elim(sys, vars, q).count);
            ++cases;
        }
    }
}

TEST_CASE("inclusion-exclusion identity") {
    // [f, h g] = [f,h] + [f,g] - [f,h,g]
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int rep = 0; rep < 20; ++rep) {
        auto rnd = [&]() {
            MultiPoly f;
            for (int t = 0; t < 3; ++t) {
                std::vector<Monomial::Factor> fs;
                for (int v = 1; v <= 3; ++v)
                    if (rng() % 2) fs.push_back({v, 1});
                f += MultiPoly::term(Monomial(std::move(fs)), coeff(rng));
            }
            return f;
        };
        MultiPoly f = rnd(), h = rnd(), g = rnd();
        for (int q : {2, 3}) {
            Int lhs = count_points({f, h * g}, {1, 2, 3}, q).count;
            Int rhs = count_points({f, h}, {1, 2, 3}, q).count + count_points({f, g}, {1, 2, 3}, q).count -
                      count_points({f, h, g}, {1, 2, 3}, q).count;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("cn invariant extraction") {
    // hyperplane in A^3: count q^2, c2 = 1
    std::vector<CountResult> counts;
    for (int q : {2, 3, 5}) counts.push_back(count_points({x(1) + x(2) + x(3)}, {1, 2, 3}, q));
    auto c2 = cn_invariant(counts, 2);
    for (auto& [q, r] : c2) CHECK(r == 1);
    // sunset psi, n=2 -> 1
    MultiPoly s = psi(sunset());
    std::vector<CountResult> sc = {count_points({s}, {1, 2, 3}, 2), count_points({s}, {1, 2, 3}, 3)};
    auto c2s = cn_invariant(sc, 2);
    CHECK(c2s[2] == 1);
    CHECK(c2s[3] == 1);
    // n=3 fails at q=2 (4 is not divisible by 8)
    CHECK_THROWS_AS(cn_invariant(sc, 3), divisibility_error);
    CHECK_THROWS_AS(cn_invariant({}, 2), input_error);
}

TEST_CASE("c2 parametric") {
    auto rep = c2_parametric(sunset(), {2, 3, 5});
    REQUIRE(rep.entries.size() == 3);
    for (auto& e : rep.entries) CHECK(e.residue == 1);
    CHECK(!rep.warnings.empty()); // 2-vertex warning
    auto repk = c2_parametric(k4(), {2, 3, 5, 7});
    for (auto& e : repk.entries) CHECK(e.residue == (e.q - 1)); // c2(K4) = -1
    CHECK(repk.warnings.empty());
}

TEST_CASE("divisibility shadows of [BS]") {
    // q | [Psi]_q when N >= h+1 and q^2 | [Psi]_q when N >= h+2
    std::vector<Graph> suite = {sunset(), k4(),
                                Graph(3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}}),
                                Graph(5, std::vector<std::pair<int, int>>{
                                             {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {4, 1}})};
    for (auto& g : suite) {
        MultiPoly p = psi(g);
        for (int q : {2, 3, 5}) {
            Int c = count_points({p}, g.labels(), q).count;
            if (g.edge_count() >= g.h() + 1) CHECK(c % q == 0);
            if (g.edge_count() >= g.h() + 2) CHECK(c % (Int(q) * q) == 0);
        }
    }
}

TEST_CASE("fit_count_polynomial") {
    SECTION("hyperplane counts give q^2") {
        std::vector<std::pair<int, Int>> samples;
        for (int q : {2, 3, 4, 5}) samples.push_back({q, Int(q) * q});
        auto fit = fit_count_polynomial(samples);
        REQUIRE(fit.has_value());
        CHECK(*fit == std::vector<Int>{0, 0, 1});
    }
    SECTION("non-polynomial data returns none") {
        std::vector<std::pair<int, Int>> samples = {{2, 1}, {3, 2}, {5, 300}, {7, 301}};
        CHECK(!fit_count_polynomial(samples).has_value());
    }
    SECTION("held-out verification is required") {
        CHECK(!fit_count_polynomial({{2, 4}}).has_value());
    }
}
