#pragma once

#include <string>
#include <vector>

#include "c2/count.hpp"
#include "c2/graph.hpp"
#include "c2/kirchhoff.hpp"
#include "c2/multipoly.hpp"

namespace c2 {

// Momentum-space coordinates for loop i (1-based):
//   p_i^+  -> x_{4(i-1)+1},  p_i^-  -> x_{4(i-1)+2},
//   p'_i^+ -> x_{4(i-1)+3},  p'_i^- -> x_{4(i-1)+4}.
inline int mom_var(int loop, int component) { return 4 * (loop - 1) + component; }

// Per-edge quadrics over the twistor metric: Q_e = (c_e.p^+)(c_e.p^-) +
// (c_e.p'^+)(c_e.p'^-), with the routing c_e read off a cycle basis.
// Quadrics are evaluated from the routing vectors; the product polynomial is
// never expanded.
struct QuadricSystem {
    int h = 0;
    int n_edges = 0;
    std::vector<std::vector<int>> routing; // [edge][loop] in {-1,0,1}

    std::vector<MultiPoly> quadrics() const {
        std::vector<MultiPoly> qs;
        for (int e = 0; e < n_edges; ++e) {
            MultiPoly plus, minus, pplus, pminus;
            for (int i = 1; i <= h; ++i) {
                int c = routing[e][i - 1];
                if (c == 0) continue;
                plus += Int(c) * MultiPoly::var(mom_var(i, 1));
                minus += Int(c) * MultiPoly::var(mom_var(i, 2));
                pplus += Int(c) * MultiPoly::var(mom_var(i, 3));
                pminus += Int(c) * MultiPoly::var(mom_var(i, 4));
            }
            qs.push_back(plus * minus + pplus * pminus);
        }
        return qs;
    }
};

inline QuadricSystem build_quadrics(const Graph& g, const std::vector<std::vector<int>>& basis) {
    if (g.is_zero() || !g.connected()) throw input_error("build_quadrics: graph must be connected");
    if (g.h() < 1) throw hypothesis_error("build_quadrics: graph has no cycles");
    QuadricSystem qs;
    qs.h = static_cast<int>(basis.size());
    qs.n_edges = g.edge_count();
    qs.routing.assign(qs.n_edges, std::vector<int>(qs.h, 0));
    for (int i = 0; i < qs.h; ++i)
        for (int e = 0; e < qs.n_edges; ++e) qs.routing[e][i] = basis[i][e];
    return qs;
}

inline QuadricSystem build_quadrics(const Graph& g) { return build_quadrics(g, cycle_basis(g)); }

// Symmetric h x h matrix with N(x)_{ij} = sum_e x_e c_{e,i} c_{e,j} and
// det N(x) = Psi_G(x); a determinant mismatch indicates a routing bug.
struct NMatrix {
    int h = 0;
    std::vector<MultiPoly> entries; // row-major h x h
    MultiPoly determinant;

    const MultiPoly& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * h + j]; }
};

inline NMatrix n_matrix(const Graph& g) {
    QuadricSystem qs = build_quadrics(g);
    NMatrix nm;
    nm.h = qs.h;
    nm.entries.assign(static_cast<std::size_t>(qs.h) * qs.h, MultiPoly());
    const auto& es = g.edges();
    for (int i = 0; i < qs.h; ++i)
        for (int j = 0; j < qs.h; ++j) {
            MultiPoly entry;
            for (int e = 0; e < qs.n_edges; ++e) {
                int c = qs.routing[e][i] * qs.routing[e][j];
                if (c != 0) entry += Int(c) * MultiPoly::var(es[e].label);
            }
            nm.entries[static_cast<std::size_t>(i) * qs.h + j] = entry;
        }
    PolyMatrix m(qs.h);
    for (int i = 0; i < qs.h; ++i)
        for (int j = 0; j < qs.h; ++j) m.at(i, j) = nm.at(i, j);
    nm.determinant = m.det().sign_normalized();
    if (nm.determinant != psi(g))
        throw std::logic_error("n_matrix: det N(x) != Psi_G(x); cycle routing is inconsistent");
    return nm;
}

// [Q_1 Q_2 ... Q_N]_q: points of F_q^{4h} where at least one quadric
// vanishes (union counting with early exit on the first vanishing quadric).
inline CountResult count_union_quadrics(const QuadricSystem& qs, int q, const CountOptions& opts = {}) {
    const FieldTables& F = FieldTables::get(q);
    int nvars = 4 * qs.h;
    Int count = detail::enumerate_count(q, nvars, opts, [&](const std::uint8_t* pt) {
        for (int e = 0; e < qs.n_edges; ++e) {
            std::uint8_t dot[4] = {0, 0, 0, 0};
            for (int i = 0; i < qs.h; ++i) {
                int c = qs.routing[e][i];
                if (c == 0) continue;
                for (int comp = 0; comp < 4; ++comp) {
                    std::uint8_t coord = pt[4 * i + comp];
                    dot[comp] = c > 0 ? F.add(dot[comp], coord) : F.sub(dot[comp], coord);
                }
            }
            std::uint8_t val = F.add(F.mul(dot[0], dot[1]), F.mul(dot[2], dot[3]));
            if (val == 0) return true;
        }
        return false;
    });
    return {q, count, nvars};
}

// Momentum-space c2: count/q^2 mod q for the union of the propagator
// quadrics. Hypotheses of the momentum-space definition: h >= 2, N <= 2h.
inline C2Report c2_momentum(const Graph& g, const std::vector<int>& qs_list, const CountOptions& opts = {}) {
    if (g.h() < 2) throw hypothesis_error("c2_momentum: requires h >= 2");
    if (g.edge_count() > 2 * g.h()) throw hypothesis_error("c2_momentum: requires N <= 2h");
    QuadricSystem qs = build_quadrics(g);
    C2Report rep;
    rep.method = "mom";
    for (int q : qs_list) {
        CountResult c = count_union_quadrics(qs, q, opts);
        Int q2 = Int(q) * q;
        if (c.count % q2 != 0)
            throw divisibility_error("c2_momentum: q^2 does not divide the count at q=" + std::to_string(q));
        Int r = (c.count / q2) % q;
        rep.entries.push_back({q, c.count, static_cast<int>(r.convert_to<long long>())});
    }
    return rep;
}

// Vanishing of the momentum-space c2 for h >= 3, 2h > N.
inline bool c2_momentum_vanishing(const Graph& g, const std::vector<int>& qs_list, const CountOptions& opts = {}) {
    if (g.h() < 3) throw hypothesis_error("c2_momentum_vanishing: requires h >= 3");
    if (2 * g.h() <= g.edge_count()) throw hypothesis_error("c2_momentum_vanishing: requires 2h > N");
    C2Report rep = c2_momentum(g, qs_list, opts);
    for (auto& e : rep.entries)
        if (e.residue != 0) return false;
    return true;
}

// Independent check of the inclusion-exclusion congruence
//   [Q_1...Q_N]_q = (-q)^{2h-N} ( [Psi]_q + q^2 [Sing]_q
//                    - q sum_e [Psi_{G//e}]_q + q^2 sum_{e1<e2} [Psi_{G//e1e2}]_q )  mod q^3,
// both sides counted by brute force.
inline bool verify_quadric_congruence(const Graph& g, int q, const CountOptions& opts = {}) {
    if (g.h() < 2) throw hypothesis_error("verify_quadric_congruence: requires h >= 2");
    if (2 * g.h() < g.edge_count()) throw hypothesis_error("verify_quadric_congruence: requires 2h >= N");
    int N = g.edge_count();
    int d = 2 * g.h() - N;
    Int q3 = Int(q) * q * q;

    QuadricSystem qs = build_quadrics(g);
    Int lhs = count_union_quadrics(qs, q, opts).count % q3;

    std::vector<int> labels = g.labels();
    std::sort(labels.begin(), labels.end());
    MultiPoly p = psi(g);
    Int rhs = count_points({p}, labels, q, opts).count;

    std::vector<MultiPoly> partials;
    for (int l : labels) partials.push_back(split(p, l).leading);
    rhs += Int(q) * q * count_points(partials, labels, q, opts).count;

    for (int l : labels) {
        std::vector<int> rest;
        for (int m : labels)
            if (m != l) rest.push_back(m);
        rhs -= Int(q) * count_points({psi(g.contract_edge(l))}, rest, q, opts).count;
    }
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = a + 1; b < labels.size(); ++b) {
            std::vector<int> rest;
            for (int m : labels)
                if (m != labels[a] && m != labels[b]) rest.push_back(m);
            Graph gg = g.contract_edge(labels[a]);
            Graph ggg = gg.is_zero() ? gg : gg.contract_edge(labels[b]);
            rhs += Int(q) * q * count_points({psi(ggg)}, rest, q, opts).count;
        }
    for (int i = 0; i < d; ++i) rhs *= -q;
    rhs %= q3;
    return ((lhs - rhs) % q3 + q3) % q3 == 0;
}

} // namespace c2
