#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "c2/graph.hpp"
#include "c2/multipoly.hpp"

namespace c2 {

// ---------------------------------------------------------------------------
// Dense matrix of polynomials with a fraction-free (Bareiss) determinant.
// ---------------------------------------------------------------------------
class PolyMatrix {
public:
    explicit PolyMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    int size() const { return n_; }
    MultiPoly& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const MultiPoly& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    PolyMatrix minor_without(const std::vector<int>& rows, const std::vector<int>& cols) const {
        std::vector<int> keep_r, keep_c;
        for (int i = 0; i < n_; ++i) {
            if (std::find(rows.begin(), rows.end(), i) == rows.end()) keep_r.push_back(i);
            if (std::find(cols.begin(), cols.end(), i) == cols.end()) keep_c.push_back(i);
        }
        if (keep_r.size() != keep_c.size()) throw input_error("minor_without: non-square minor");
        PolyMatrix m(static_cast<int>(keep_r.size()));
        for (std::size_t i = 0; i < keep_r.size(); ++i)
            for (std::size_t j = 0; j < keep_c.size(); ++j)
                m.at(static_cast<int>(i), static_cast<int>(j)) = at(keep_r[i], keep_c[j]);
        return m;
    }

    MultiPoly det() const {
        PolyMatrix m(*this);
        int n = n_;
        if (n == 0) return MultiPoly::constant(1);
        int sign = 1;
        MultiPoly prev = MultiPoly::constant(1);
        for (int k = 0; k + 1 < n; ++k) {
            // pivot: nonzero entry in column k with the fewest terms
            int best = -1;
            std::size_t best_terms = 0;
            for (int r = k; r < n; ++r) {
                const MultiPoly& cand = m.at(r, k);
                if (cand.is_zero()) continue;
                if (best < 0 || cand.term_count() < best_terms) {
                    best = r;
                    best_terms = cand.term_count();
                }
            }
            if (best < 0) return MultiPoly::zero();
            if (best != k) {
                for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(best, j));
                sign = -sign;
            }
            const MultiPoly pivot = m.at(k, k);
            for (int i = k + 1; i < n; ++i) {
                for (int j = k + 1; j < n; ++j)
                    m.at(i, j) = divide_exact(pivot * m.at(i, j) - m.at(i, k) * m.at(k, j), prev);
                m.at(i, k) = MultiPoly::zero();
            }
            prev = pivot;
        }
        MultiPoly d = m.at(n - 1, n - 1);
        return sign < 0 ? -d : d;
    }

private:
    int n_;
    std::vector<MultiPoly> a_;
};

// ---------------------------------------------------------------------------
// Expanded graph matrix [[A, E],[-E^T, 0]] with the highest-indexed vertex
// deleted; rows and columns are edges first, then vertices. det = Psi_G.
// ---------------------------------------------------------------------------
struct GraphMatrix {
    PolyMatrix m{0};
    std::vector<int> edge_labels;  // edge row i <-> edge_labels[i]
    int removed_vertex = -1;
};

inline GraphMatrix graph_matrix(const Graph& g) {
    if (g.is_zero()) throw input_error("graph_matrix: zero graph");
    if (g.vertex_count() < 1) throw input_error("graph_matrix: graph has no vertices");
    int ne = g.edge_count();
    int nv = g.vertex_count() - 1; // highest-indexed vertex removed
    GraphMatrix gm;
    gm.m = PolyMatrix(ne + nv);
    gm.removed_vertex = g.vertex_count() - 1;
    const auto& es = g.edges();
    for (int i = 0; i < ne; ++i) {
        gm.edge_labels.push_back(es[i].label);
        gm.m.at(i, i) = MultiPoly::var(es[i].label);
        if (es[i].tail == es[i].head) continue; // self-loop: zero incidence
        for (int v = 0; v < nv; ++v) {
            int entry = 0;
            if (es[i].tail == v) entry = 1;
            else if (es[i].head == v) entry = -1;
            if (entry != 0) {
                gm.m.at(i, ne + v) = MultiPoly::constant(entry);
                gm.m.at(ne + v, i) = MultiPoly::constant(-entry);
            }
        }
    }
    return gm;
}

struct DodgsonSpec {
    std::vector<int> I, J, K; // edge labels
};

// Psi^{I,J}_{G,K} = det M_G(I,J)_K: rows I and columns J removed, x_e = 0 for
// e in K. The fixed matrix convention fixes every sign.
inline MultiPoly dodgson(const Graph& g, const DodgsonSpec& spec) {
    if (g.is_zero()) return MultiPoly::zero();
    if (spec.I.size() != spec.J.size()) throw input_error("dodgson: |I| != |J|");
    for (auto& set : {spec.I, spec.J, spec.K})
        for (int l : set) (void)g.edge_by_label(l);
    GraphMatrix gm = graph_matrix(g);
    auto pos_of = [&](int label) {
        for (std::size_t i = 0; i < gm.edge_labels.size(); ++i)
            if (gm.edge_labels[i] == label) return static_cast<int>(i);
        throw input_error("dodgson: label not in matrix");
    };
    for (int l : spec.K) {
        int p = pos_of(l);
        gm.m.at(p, p) = MultiPoly::zero();
    }
    std::vector<int> rows, cols;
    for (int l : spec.I) rows.push_back(pos_of(l));
    for (int l : spec.J) cols.push_back(pos_of(l));
    return gm.m.minor_without(rows, cols).det();
}

// Graph polynomial by symbolic determinant, normalized so the spanning-tree
// expansion (all +1 coefficients) comes out positively.
inline MultiPoly psi(const Graph& g) {
    if (g.is_zero() || g.vertex_count() == 0 || !g.connected()) return MultiPoly::zero();
    return dodgson(g, {}).sign_normalized();
}

// dPsi/dx_e; by linearity this is the Dodgson polynomial Psi^{e,e}.
inline MultiPoly psi_partial(const Graph& g, int edge_label) {
    return split(psi(g), edge_label).leading;
}

// Psi with x_e = 0 for e in K.
inline MultiPoly psi_zeroed(const Graph& g, const std::vector<int>& K) {
    MultiPoly p = psi(g);
    std::map<int, Int> zero;
    for (int l : K) zero[l] = 0;
    return p.eval_partial(zero);
}

// ---------------------------------------------------------------------------
// Spanning forest polynomials.
// ---------------------------------------------------------------------------
using VertexPartition = std::vector<std::vector<int>>;

namespace detail {

struct ForestEnum {
    const Graph& g;
    std::vector<int> part_of;      // vertex -> part index or -1
    int k;                         // number of parts
    int need;                      // edges in a spanning forest with k trees
    std::vector<char> in_forest;   // per edge position
    // callback returns false to stop enumeration
    std::function<bool(const std::vector<char>&)> emit;

    bool run(int pos, UnionFind uf, std::vector<int> comp_part, int picked) {
        const auto& es = g.edges();
        int n = static_cast<int>(es.size());
        if (picked == need) {
            // acyclic with V-k edges => exactly k components; mixing was
            // pruned, so it remains to check no part is split across trees
            std::vector<int> root_of_part(k, -1);
            for (int v = 0; v < g.vertex_count(); ++v) {
                int p = part_of[v];
                if (p < 0) continue;
                int r = uf.find(v);
                if (root_of_part[p] == -1)
                    root_of_part[p] = r;
                else if (root_of_part[p] != r)
                    return true; // partition not realized by this forest
            }
            return emit(in_forest);
        }
        if (n - pos < need - picked) return true;
        if (pos >= n) return true;
        const Edge& e = es[pos];
        // branch 1: take the edge if it neither closes a cycle nor mixes parts
        if (e.tail != e.head) {
            int ra = uf.find(e.tail), rb = uf.find(e.head);
            if (ra != rb) {
                int pa = comp_part[ra], pb = comp_part[rb];
                if (pa < 0 || pb < 0 || pa == pb) {
                    UnionFind uf2 = uf;
                    uf2.unite(ra, rb);
                    std::vector<int> cp2 = comp_part;
                    cp2[uf2.find(ra)] = std::max(pa, pb);
                    in_forest[pos] = 1;
                    if (!run(pos + 1, uf2, cp2, picked + 1)) return false;
                    in_forest[pos] = 0;
                }
            }
        }
        // branch 2: skip the edge
        return run(pos + 1, uf, comp_part, picked);
    }
};

// Validate a partition and return part_of[] (-1 for unmarked vertices).
// Parts are treated as sets; listing a vertex twice in one part is harmless.
inline std::vector<int> part_map(const Graph& g, const VertexPartition& parts) {
    std::vector<int> part_of(g.vertex_count(), -1);
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (parts[p].empty()) throw input_error("forest_poly: empty part");
        for (int v : parts[p]) {
            if (v < 0 || v >= g.vertex_count()) throw input_error("forest_poly: vertex out of range");
            if (part_of[v] != -1 && part_of[v] != static_cast<int>(p))
                throw input_error("forest_poly: parts are not disjoint");
            part_of[v] = static_cast<int>(p);
        }
    }
    return part_of;
}

} // namespace detail

// Phi^P_G: sum over spanning forests F = T_1 u ... u T_k realizing the
// partition (tree T_i contains part P_i and no other marked vertices) of the
// product of x_e over e not in F.
inline MultiPoly forest_poly(const Graph& g, const VertexPartition& parts) {
    if (g.is_zero()) return MultiPoly::zero();
    if (parts.empty()) throw input_error("forest_poly: no parts");
    std::vector<int> part_of = detail::part_map(g, parts);
    int k = static_cast<int>(parts.size());
    int need = g.vertex_count() - k;
    if (need < 0) return MultiPoly::zero();

    MultiPoly result;
    detail::ForestEnum fe{g, part_of, k, need, std::vector<char>(g.edge_count(), 0), nullptr};
    fe.emit = [&](const std::vector<char>& in_forest) {
        std::vector<Monomial::Factor> factors;
        const auto& es = g.edges();
        for (int i = 0; i < g.edge_count(); ++i)
            if (!in_forest[i]) factors.push_back({es[i].label, 1});
        result += MultiPoly::term(Monomial(std::move(factors)), 1);
        return true;
    };
    std::vector<int> comp_part(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) comp_part[v] = part_of[v];
    fe.run(0, detail::UnionFind(g.vertex_count()), comp_part, 0);
    return result;
}

// Phi^P where a vertex demanded by two different parts simply empties the
// forest sum (used by join checkers whose attachment vertices may coincide).
inline MultiPoly forest_poly_or_zero(const Graph& g, const VertexPartition& parts) {
    try {
        return forest_poly(g, parts);
    } catch (const input_error&) {
        return MultiPoly::zero();
    }
}

// Spanning forests realizing the partition; cap limits how many are
// collected (1 = first witness only).
inline std::vector<std::vector<int>> witness_forests(const Graph& g, const VertexPartition& parts,
                                                     std::size_t cap = 1) {
    std::vector<int> part_of = detail::part_map(g, parts);
    int k = static_cast<int>(parts.size());
    int need = g.vertex_count() - k;
    std::vector<std::vector<int>> found;
    if (need < 0 || cap == 0) return found;
    detail::ForestEnum fe{g, part_of, k, need, std::vector<char>(g.edge_count(), 0), nullptr};
    fe.emit = [&](const std::vector<char>& in_forest) {
        std::vector<int> labels;
        const auto& es = g.edges();
        for (int i = 0; i < g.edge_count(); ++i)
            if (in_forest[i]) labels.push_back(es[i].label);
        found.push_back(std::move(labels));
        return found.size() < cap;
    };
    std::vector<int> comp_part(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) comp_part[v] = part_of[v];
    fe.run(0, detail::UnionFind(g.vertex_count()), comp_part, 0);
    return found;
}

// ---------------------------------------------------------------------------
// Dodgson polynomials as signed sums of spanning forest polynomials.
// ---------------------------------------------------------------------------
struct SignedPartition {
    int sign = 0;
    VertexPartition parts;
};

namespace detail {

inline Int int_det(std::vector<std::vector<Int>> m) {
    int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        int piv = -1;
        for (int r = k; r < n; ++r)
            if (m[r][k] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// incidence column of edge e over vertices 0..V-2 (highest vertex removed)
inline std::vector<Int> incidence_column(const Graph& g, int label) {
    const Edge& e = g.edge_by_label(label);
    std::vector<Int> col(g.vertex_count() - 1, 0);
    if (e.tail != e.head) {
        if (e.tail < g.vertex_count() - 1) col[e.tail] += 1;
        if (e.head < g.vertex_count() - 1) col[e.head] -= 1;
    }
    return col;
}

// enumerate set partitions of xs into exactly k nonempty parts
inline void partitions_into(const std::vector<int>& xs, std::size_t k,
                            std::vector<std::vector<int>>& current,
                            std::vector<VertexPartition>& out) {
    if (current.size() > k) return;
    std::size_t placed = 0;
    for (auto& p : current) placed += p.size();
    if (placed == xs.size()) {
        if (current.size() == k) out.push_back(current);
        return;
    }
    // place xs[placed] into an existing part or a new one
    for (std::size_t i = 0; i < current.size(); ++i) {
        current[i].push_back(xs[placed]);
        partitions_into(xs, k, current, out);
        current[i].pop_back();
    }
    if (current.size() < k) {
        current.push_back({xs[placed]});
        partitions_into(xs, k, current, out);
        current.pop_back();
    }
}

} // namespace detail

// The signed partitions of V(I u J) with Psi^{I,J} = sum f_i Phi^{P_i} over
// G \ (I u J). A partition survives iff contracting I (resp. J) turns its
// parts into a single tree; the sign comes from incidence determinants on a
// witness forest. Witness-independence of that sign is asserted rather
// than assumed: with check_witnesses every realizing forest is verified to
// give the same sign (a mismatch throws).
inline std::vector<SignedPartition> dodgson_as_forest_sum(const Graph& g, const std::vector<int>& I,
                                                          const std::vector<int>& J,
                                                          bool check_witnesses = false) {
    if (I.size() != J.size()) throw input_error("dodgson_as_forest_sum: |I| != |J|");
    for (int a : I)
        for (int b : J)
            if (a == b) throw input_error("dodgson_as_forest_sum: I and J intersect");

    std::set<int> marked_set;
    for (int l : I) {
        marked_set.insert(g.edge_by_label(l).tail);
        marked_set.insert(g.edge_by_label(l).head);
    }
    for (int l : J) {
        marked_set.insert(g.edge_by_label(l).tail);
        marked_set.insert(g.edge_by_label(l).head);
    }
    std::vector<int> marked(marked_set.begin(), marked_set.end());
    std::size_t k = I.size() + 1;

    std::vector<int> IJ;
    IJ.insert(IJ.end(), I.begin(), I.end());
    IJ.insert(IJ.end(), J.begin(), J.end());
    Graph rest = g.delete_edges(IJ);

    auto tree_condition = [&](const VertexPartition& parts, const std::vector<int>& edges) {
        // parts as nodes; each edge joins the parts of its endpoints
        auto part_of = [&](int v) {
            for (std::size_t p = 0; p < parts.size(); ++p)
                if (std::find(parts[p].begin(), parts[p].end(), v) != parts[p].end())
                    return static_cast<int>(p);
            return -1;
        };
        detail::UnionFind uf(static_cast<int>(parts.size()));
        int merges = 0;
        for (int l : edges) {
            const Edge& e = g.edge_by_label(l);
            int pa = part_of(e.tail), pb = part_of(e.head);
            if (pa < 0 || pb < 0) return false;
            if (pa == pb) return false;
            if (!uf.unite(pa, pb)) return false;
            ++merges;
        }
        return merges == static_cast<int>(parts.size()) - 1;
    };

    std::vector<VertexPartition> candidates;
    std::vector<std::vector<int>> current;
    detail::partitions_into(marked, k, current, candidates);

    std::vector<SignedPartition> out;
    for (auto& parts : candidates) {
        if (!tree_condition(parts, I) || !tree_condition(parts, J)) continue;
        auto witnesses = witness_forests(rest, parts, check_witnesses ? SIZE_MAX : 1);
        if (witnesses.empty()) continue; // Phi^P = 0, contributes nothing
        // det[E_I E_F] det[E_J E_F], incidence columns in sorted label order
        auto sign_from = [&](const std::vector<int>& forest) {
            auto build = [&](const std::vector<int>& first) {
                std::vector<int> cols_labels = first;
                std::sort(cols_labels.begin(), cols_labels.end());
                std::vector<int> forest_sorted = forest;
                std::sort(forest_sorted.begin(), forest_sorted.end());
                cols_labels.insert(cols_labels.end(), forest_sorted.begin(), forest_sorted.end());
                int dim = g.vertex_count() - 1;
                if (static_cast<int>(cols_labels.size()) != dim)
                    throw input_error("dodgson_as_forest_sum: witness forest has unexpected size");
                std::vector<std::vector<Int>> m(dim, std::vector<Int>(dim));
                for (int j = 0; j < dim; ++j) {
                    auto col = detail::incidence_column(g, cols_labels[j]);
                    for (int i = 0; i < dim; ++i) m[i][j] = col[i];
                }
                return detail::int_det(std::move(m));
            };
            return build(I) * build(J);
        };
        Int d = sign_from(witnesses.front());
        if (check_witnesses)
            for (auto& w : witnesses)
                if (sign_from(w) != d)
                    throw std::logic_error("dodgson_as_forest_sum: sign depends on the witness forest");
        if (d == 0) continue;
        out.push_back({d > 0 ? 1 : -1, parts});
    }
    return out;
}

} // namespace c2
