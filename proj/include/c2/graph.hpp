#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "c2/errors.hpp"

namespace c2 {

struct Edge {
    int tail = 0;
    int head = 0;
    int label = 0; // 1-based, stable across minors
    bool operator==(const Edge&) const = default;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    // returns false if already joined
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
        return true;
    }

private:
    std::vector<int> parent_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Graph: ordered, oriented multigraph. Edge order, orientation and labels are
// part of identity; they fix all Dodgson signs downstream. The zero graph is
// the zero object of the graph algebra (result of contracting a self-loop).
// ---------------------------------------------------------------------------
class Graph {
public:
    Graph() = default;

    Graph(int vertex_count, const std::vector<std::pair<int, int>>& edge_list) : v_(vertex_count) {
        int label = 1;
        for (auto& [t, h] : edge_list) edges_.push_back({t, h, label++});
        validate();
    }

    Graph(int vertex_count, std::vector<Edge> edges) : v_(vertex_count), edges_(std::move(edges)) { validate(); }

    static Graph zero_graph() {
        Graph g;
        g.zero_ = true;
        return g;
    }

    bool is_zero() const { return zero_; }
    int vertex_count() const { return v_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    const Edge& edge_by_label(int label) const {
        for (auto& e : edges_)
            if (e.label == label) return e;
        throw input_error("no edge with label " + std::to_string(label));
    }

    bool has_label(int label) const {
        for (auto& e : edges_)
            if (e.label == label) return true;
        return false;
    }

    std::vector<int> labels() const {
        std::vector<int> ls;
        ls.reserve(edges_.size());
        for (auto& e : edges_) ls.push_back(e.label);
        return ls;
    }

    int max_label() const {
        int m = 0;
        for (auto& e : edges_) m = std::max(m, e.label);
        return m;
    }

    int degree(int v) const {
        int d = 0;
        for (auto& e : edges_) {
            if (e.tail == v) ++d;
            if (e.head == v) ++d;
        }
        return d;
    }

    int components() const {
        if (v_ == 0) return 0;
        detail::UnionFind uf(v_);
        int c = v_;
        for (auto& e : edges_)
            if (uf.unite(e.tail, e.head)) --c;
        return c;
    }

    bool connected() const { return !zero_ && v_ > 0 && components() == 1; }

    // first Betti number N - V + C
    int h() const { return edge_count() - v_ + components(); }

    bool operator==(const Graph& o) const { return zero_ == o.zero_ && v_ == o.v_ && edges_ == o.edges_; }

    Graph delete_edge(int label) const {
        if (zero_) return *this;
        require_label(label);
        Graph g;
        g.v_ = v_;
        for (auto& e : edges_)
            if (e.label != label) g.edges_.push_back(e);
        return g;
    }

    Graph delete_edges(const std::vector<int>& labels) const {
        Graph g = *this;
        for (int l : labels) g = g.delete_edge(l);
        return g;
    }

    // Contracting a self-loop yields the zero graph (zero in the graph algebra).
    Graph contract_edge(int label) const {
        if (zero_) return *this;
        const Edge& e = edge_by_label(label);
        if (e.tail == e.head) return zero_graph();
        int keep = std::min(e.tail, e.head);
        int drop = std::max(e.tail, e.head);
        Graph g;
        g.v_ = v_ - 1;
        auto remap = [&](int v) {
            if (v == drop) return keep;
            return v > drop ? v - 1 : v;
        };
        for (auto& f : edges_) {
            if (f.label == label) continue;
            g.edges_.push_back({remap(f.tail), remap(f.head), f.label});
        }
        return g;
    }

    // Sequential edge contraction in the graph algebra: hitting a self-loop
    // yields the zero graph.
    Graph contract_edges(const std::vector<int>& labels) const {
        Graph cur = *this;
        for (int l : labels) {
            if (cur.is_zero()) break;
            cur = cur.contract_edge(l);
        }
        return cur;
    }

    // Topological contraction of a subgraph: delete its edges and identify
    // the vertices of each of its connected pieces (no self-loops are
    // created, matching G\H with attachment vertices identified).
    Graph contract_subgraph(const std::vector<int>& labels) const {
        if (zero_) return *this;
        detail::UnionFind uf(v_);
        std::set<int> drop(labels.begin(), labels.end());
        for (int l : drop) require_label(l);
        for (auto& e : edges_)
            if (drop.count(e.label)) uf.unite(e.tail, e.head);
        std::vector<int> newid(v_, -1);
        int next = 0;
        for (int v = 0; v < v_; ++v)
            if (uf.find(v) == v) newid[v] = next++;
        Graph g;
        g.v_ = next;
        for (auto& e : edges_) {
            if (drop.count(e.label)) continue;
            g.edges_.push_back({newid[uf.find(e.tail)], newid[uf.find(e.head)], e.label});
        }
        return g;
    }

    // Subgraph spanned by an edge subset, restricted to the touched vertices.
    Graph edge_subgraph(const std::vector<int>& labels) const {
        std::set<int> keep(labels.begin(), labels.end());
        std::vector<int> newid(v_, -1);
        int next = 0;
        Graph g;
        for (auto& e : edges_) {
            if (!keep.count(e.label)) continue;
            for (int v : {e.tail, e.head})
                if (newid[v] < 0) newid[v] = next++;
        }
        g.v_ = next;
        for (auto& e : edges_) {
            if (!keep.count(e.label)) continue;
            g.edges_.push_back({newid[e.tail], newid[e.head], e.label});
        }
        return g;
    }

private:
    int v_ = 0;
    std::vector<Edge> edges_;
    bool zero_ = false;

    void validate() const {
        for (auto& e : edges_)
            if (e.tail < 0 || e.tail >= v_ || e.head < 0 || e.head >= v_)
                throw input_error("edge endpoint out of range");
    }

    void require_label(int label) const { (void)edge_by_label(label); }
};

// ---------------------------------------------------------------------------
// Graph file format: '#' comments, one "v <count>" line, then "e <tail> <head>"
// lines; edge i is the i-th edge line (1-based labels).
// ---------------------------------------------------------------------------
inline Graph parse_graph(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    int vertex_count = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        auto fail = [&](const std::string& msg) {
            throw input_error("line " + std::to_string(lineno) + ": " + msg);
        };
        if (tag == "v") {
            if (vertex_count >= 0) fail("duplicate vertex-count line");
            long long n;
            if (!(ls >> n) || n < 0) fail("malformed vertex count");
            vertex_count = static_cast<int>(n);
        } else if (tag == "e") {
            if (vertex_count < 0) fail("edge before vertex-count line");
            long long t, h;
            if (!(ls >> t >> h)) fail("malformed edge line");
            if (t < 0 || t >= vertex_count || h < 0 || h >= vertex_count) fail("vertex index out of range");
            edges.push_back({static_cast<int>(t), static_cast<int>(h)});
        } else {
            fail("unknown line tag '" + tag + "'");
        }
        std::string rest;
        if (ls >> rest) fail("trailing tokens");
    }
    if (vertex_count < 0) throw input_error("missing vertex-count line");
    if (edges.empty()) throw input_error("graph has zero edges");
    return Graph(vertex_count, edges);
}

inline std::string serialize_graph(const Graph& g) {
    if (g.is_zero()) throw input_error("cannot serialize the zero graph");
    std::ostringstream os;
    os << "v " << g.vertex_count() << "\n";
    for (auto& e : g.edges()) os << "e " << e.tail << " " << e.head << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Spanning structures.
// ---------------------------------------------------------------------------

// All spanning trees, as sorted label lists. Empty for disconnected input.
inline std::vector<std::vector<int>> spanning_trees(const Graph& g) {
    std::vector<std::vector<int>> out;
    if (g.is_zero() || !g.connected()) return out;
    int need = g.vertex_count() - 1;
    const auto& es = g.edges();
    std::vector<int> chosen;
    // depth-first over edge positions; union-find rebuilt per branch (desk scale)
    auto count_components = [&](const std::vector<int>& picks) {
        detail::UnionFind uf(g.vertex_count());
        int c = g.vertex_count();
        for (int idx : picks)
            if (uf.unite(es[idx].tail, es[idx].head)) --c;
        return c;
    };
    (void)count_components;
    struct Rec {
        const Graph& g;
        const std::vector<Edge>& es;
        int need;
        std::vector<std::vector<int>>& out;
        std::vector<int> chosen;
        void run(int pos, detail::UnionFind uf, int picked) {
            if (picked == need) {
                std::vector<int> t;
                t.reserve(chosen.size());
                for (int i : chosen) t.push_back(es[i].label);
                out.push_back(std::move(t));
                return;
            }
            int remaining = static_cast<int>(es.size()) - pos;
            if (remaining < need - picked) return;
            // take es[pos] if it does not close a cycle
            detail::UnionFind with = uf;
            if (with.unite(es[pos].tail, es[pos].head)) {
                chosen.push_back(pos);
                run(pos + 1, with, picked + 1);
                chosen.pop_back();
            }
            run(pos + 1, uf, picked);
        }
    };
    Rec rec{g, es, need, out, {}};
    rec.run(0, detail::UnionFind(g.vertex_count()), 0);
    return out;
}

// Signed fundamental cycles of the lowest-label-first spanning tree. Each
// vector is aligned with the edge list; entries are -1, 0, +1.
inline std::vector<std::vector<int>> cycle_basis(const Graph& g) {
    if (g.is_zero() || !g.connected()) throw input_error("cycle_basis: graph must be connected");
    int n = g.edge_count();
    const auto& es = g.edges();
    detail::UnionFind uf(g.vertex_count());
    std::vector<char> in_tree(n, 0);
    for (int i = 0; i < n; ++i)
        if (es[i].tail != es[i].head && uf.unite(es[i].tail, es[i].head)) in_tree[i] = 1;
    // adjacency over tree edges
    std::vector<std::vector<std::pair<int, int>>> adj(g.vertex_count()); // (neighbor, edge pos)
    for (int i = 0; i < n; ++i) {
        if (!in_tree[i]) continue;
        adj[es[i].tail].push_back({es[i].head, i});
        adj[es[i].head].push_back({es[i].tail, i});
    }
    auto tree_path = [&](int from, int to) {
        // returns edge positions with direction sign along from -> to
        std::vector<int> prev_vertex(g.vertex_count(), -1), prev_edge(g.vertex_count(), -1);
        std::vector<int> stack{from};
        prev_vertex[from] = from;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == to) break;
            for (auto& [w, ei] : adj[v]) {
                if (prev_vertex[w] < 0) {
                    prev_vertex[w] = v;
                    prev_edge[w] = ei;
                    stack.push_back(w);
                }
            }
        }
        std::vector<std::pair<int, int>> path; // (edge pos, sign)
        int v = to;
        while (v != from) {
            int ei = prev_edge[v];
            int u = prev_vertex[v];
            path.push_back({ei, es[ei].tail == u && es[ei].head == v ? 1 : -1});
            v = u;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };
    std::vector<std::vector<int>> basis;
    for (int i = 0; i < n; ++i) {
        if (in_tree[i]) continue;
        std::vector<int> c(n, 0);
        c[i] = 1;
        if (es[i].tail != es[i].head)
            for (auto& [ei, sign] : tree_path(es[i].head, es[i].tail)) c[ei] = sign;
        basis.push_back(std::move(c));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Joins and vertex splits.
// ---------------------------------------------------------------------------

struct JoinSpec {
    Graph left;
    int left_vertex = 0;
    Graph right;
    int right_vertex = 0;
    // matching[i] = index of the right half-edge glued to left half-edge i
    std::vector<int> matching;
};

namespace detail {

// Half-edges at v in edge order; self-loops at the join vertex are rejected.
inline std::vector<int> star_positions(const Graph& g, int v) {
    std::vector<int> pos;
    const auto& es = g.edges();
    for (int i = 0; i < static_cast<int>(es.size()); ++i) {
        if (es[i].tail == v && es[i].head == v)
            throw input_error("join vertex has a self-loop");
        if (es[i].tail == v || es[i].head == v) pos.push_back(i);
    }
    return pos;
}

inline void check_join(const JoinSpec& s, std::vector<int>& lstar, std::vector<int>& rstar) {
    lstar = star_positions(s.left, s.left_vertex);
    rstar = star_positions(s.right, s.right_vertex);
    std::size_t k = lstar.size();
    if (k == 0 || rstar.size() != k)
        throw input_error("edge_join: vertex degrees differ or are zero");
    if (s.matching.size() != k) throw input_error("edge_join: matching size mismatch");
    std::vector<char> seen(k, 0);
    for (int m : s.matching) {
        if (m < 0 || m >= static_cast<int>(k) || seen[m]) throw input_error("edge_join: matching is not a permutation");
        seen[m] = 1;
    }
}

} // namespace detail

// k-edge join: glue left\v1 to right\v2 along matched half-edges. Join edges
// get labels 1..k, then the left-side edges, then the right-side edges.
inline Graph edge_join(const JoinSpec& s) {
    std::vector<int> lstar, rstar;
    detail::check_join(s, lstar, rstar);
    int k = static_cast<int>(lstar.size());
    const auto& le = s.left.edges();
    const auto& re = s.right.edges();
    int lv = s.left.vertex_count(), rv = s.right.vertex_count();
    auto lmap = [&](int v) { return v > s.left_vertex ? v - 1 : v; };
    auto rmap = [&](int v) { return (v > s.right_vertex ? v - 1 : v) + lv - 1; };
    std::vector<Edge> edges;
    int label = 1;
    for (int i = 0; i < k; ++i) {
        const Edge& a = le[lstar[i]];
        const Edge& b = re[rstar[s.matching[i]]];
        int lfar = a.tail == s.left_vertex ? a.head : a.tail;
        int rfar = b.tail == s.right_vertex ? b.head : b.tail;
        edges.push_back({lmap(lfar), rmap(rfar), label++});
    }
    for (int i = 0; i < static_cast<int>(le.size()); ++i) {
        if (std::find(lstar.begin(), lstar.end(), i) != lstar.end()) continue;
        edges.push_back({lmap(le[i].tail), lmap(le[i].head), label++});
    }
    for (int i = 0; i < static_cast<int>(re.size()); ++i) {
        if (std::find(rstar.begin(), rstar.end(), i) != rstar.end()) continue;
        edges.push_back({rmap(re[i].tail), rmap(re[i].head), label++});
    }
    return Graph(lv + rv - 2, std::move(edges));
}

// The two sides of a join, relabelled in the variable space of the join:
// star edges carry the join labels 1..k, other edges carry the labels they
// receive in edge_join(s).
inline std::pair<Graph, Graph> join_pieces(const JoinSpec& s) {
    std::vector<int> lstar, rstar;
    detail::check_join(s, lstar, rstar);
    int k = static_cast<int>(lstar.size());
    const auto& le = s.left.edges();
    const auto& re = s.right.edges();

    std::vector<Edge> ledges(le.size()), redges(re.size());
    for (int i = 0; i < k; ++i) {
        ledges[lstar[i]] = {le[lstar[i]].tail, le[lstar[i]].head, i + 1};
        int rpos = rstar[s.matching[i]];
        redges[rpos] = {re[rpos].tail, re[rpos].head, i + 1};
    }
    int label = k + 1;
    for (int i = 0; i < static_cast<int>(le.size()); ++i) {
        if (std::find(lstar.begin(), lstar.end(), i) != lstar.end()) continue;
        ledges[i] = {le[i].tail, le[i].head, label++};
    }
    for (int i = 0; i < static_cast<int>(re.size()); ++i) {
        if (std::find(rstar.begin(), rstar.end(), i) != rstar.end()) continue;
        redges[i] = {re[i].tail, re[i].head, label++};
    }
    return {Graph(s.left.vertex_count(), std::move(ledges)), Graph(s.right.vertex_count(), std::move(redges))};
}

enum class SplitPairing { p14_23, p13_24, p12_34 };

struct SplitResult {
    Graph graph;
    int e_label = 0;
    int f_label = 0;
};

// Resolve a 4-valent vertex: remove it with its star (edges s1<s2<s3<s4 to
// far endpoints w1..w4) and tie the far endpoints with two new edges e, f
// according to the pairing (14|23, 13|24 or 12|34).
inline SplitResult split_four_valent(const Graph& g, int v, SplitPairing pairing) {
    std::vector<int> star = detail::star_positions(g, v);
    if (star.size() != 4) throw input_error("split_four_valent: vertex is not 4-valent");
    const auto& es = g.edges();
    std::vector<int> w;
    std::vector<int> star_labels;
    for (int pos : star) {
        w.push_back(es[pos].tail == v ? es[pos].head : es[pos].tail);
        star_labels.push_back(es[pos].label);
    }
    auto vmap = [&](int x) { return x > v ? x - 1 : x; };
    std::vector<Edge> edges;
    for (int i = 0; i < static_cast<int>(es.size()); ++i) {
        if (std::find(star.begin(), star.end(), i) != star.end()) continue;
        edges.push_back({vmap(es[i].tail), vmap(es[i].head), es[i].label});
    }
    int e_label = g.max_label() + 1, f_label = g.max_label() + 2;
    int a, b, c, d; // e = (w_a, w_b), f = (w_c, w_d)
    switch (pairing) {
        case SplitPairing::p14_23: a = 0, b = 3, c = 1, d = 2; break;
        case SplitPairing::p13_24: a = 0, b = 2, c = 1, d = 3; break;
        default: a = 0, b = 1, c = 2, d = 3; break;
    }
    edges.push_back({vmap(w[a]), vmap(w[b]), e_label});
    edges.push_back({vmap(w[c]), vmap(w[d]), f_label});
    return {Graph(g.vertex_count() - 1, std::move(edges)), e_label, f_label};
}

// ---------------------------------------------------------------------------
// N = 2h with every strict connected subgraph logarithmically convergent.
// ---------------------------------------------------------------------------
inline bool is_primitive_log_divergent(const Graph& g, int cap = 16) {
    if (g.is_zero() || !g.connected()) throw input_error("is_primitive_log_divergent: graph must be connected");
    int n = g.edge_count();
    if (n > cap) throw work_cap_error("is_primitive_log_divergent: edge count exceeds cap");
    if (n != 2 * g.h()) return false;
    const auto& es = g.edges();
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        // connected subgraph check on touched vertices
        std::vector<int> verts;
        detail::UnionFind uf(g.vertex_count());
        int edges_in = 0, merges = 0;
        for (int i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            ++edges_in;
            for (int x : {es[i].tail, es[i].head}) verts.push_back(x);
            if (uf.unite(es[i].tail, es[i].head)) ++merges;
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        int vcount = static_cast<int>(verts.size());
        bool conn = (merges == vcount - 1);
        if (!conn) continue;
        int hsub = edges_in - vcount + 1;
        if (hsub >= 1 && edges_in <= 2 * hsub) return false;
    }
    return true;
}

} // namespace c2
