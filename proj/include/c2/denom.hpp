#pragma once

#include <array>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "c2/count.hpp"
#include "c2/graph.hpp"
#include "c2/kirchhoff.hpp"
#include "c2/multipoly.hpp"

namespace c2 {

// 5-invariant of five distinct edges: +-[Psi^{ij,kl}, Psi^{ik,jl}]_m,
// returned sign-normalized. Permuting the edges changes it by sign only.
inline MultiPoly five_invariant(const Graph& g, const std::array<int, 5>& e) {
    std::set<int> distinct(e.begin(), e.end());
    if (distinct.size() != 5) throw input_error("five_invariant: edges are not distinct");
    auto [i, j, k, l, m] = e;
    MultiPoly a = dodgson(g, {{i, j}, {k, l}, {}});
    MultiPoly b = dodgson(g, {{i, k}, {j, l}, {}});
    return resultant(a, b, m).sign_normalized();
}

enum class TraceStatus { reduced_to_constant, vanished, stuck, exhausted };

inline std::string to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::reduced_to_constant: return "reduced-to-constant";
        case TraceStatus::vanished: return "vanished";
        case TraceStatus::stuck: return "stuck";
        default: return "exhausted";
    }
}

// Rule for eliminating a variable in which D^n is linear. Factoring
// D = f g (a trivial factor 1 is allowed) and taking the resultant yields
// the leading coefficient up to sign; this is always arithmetically
// consistent. The product convention D^x * D_x carries more information but
// is only conditionally consistent; traces that use it are validated
// arithmetically step by step.
enum class LinearRule { product, leading };

struct TraceStep {
    int n = 0;                 // D^n, free of the first n order entries
    MultiPoly d;               // sign-normalized
    std::optional<std::pair<MultiPoly, MultiPoly>> factorization; // quadratic case
    bool linear_convention = false; // a linear-variable rule produced this step
    bool variable_absent = false;   // the eliminated variable did not occur
    bool convention_validated = true; // mod-q step invariance (product rule only)
};

struct DenomTrace {
    Graph graph;
    std::vector<int> order;
    std::vector<TraceStep> steps; // steps[0] is D^5
    TraceStatus status = TraceStatus::exhausted;
    std::string note;

    const TraceStep& last() const {
        if (steps.empty()) throw input_error("empty trace");
        return steps.back();
    }

    bool fully_validated() const {
        for (auto& s : steps)
            if (!s.convention_validated) return false;
        return true;
    }

    // largest n whose whole prefix is validated
    int last_validated_n() const {
        int n = 0;
        for (auto& s : steps) {
            if (!s.convention_validated) break;
            n = s.n;
        }
        return n;
    }
};

namespace detail {

struct StepOutcome {
    MultiPoly next;
    std::optional<std::pair<MultiPoly, MultiPoly>> factorization;
    bool linear_convention = false;
    bool variable_absent = false;
};

inline std::optional<StepOutcome> reduce_step_full(const MultiPoly& d, int var,
                                                   LinearRule rule = LinearRule::product) {
    StepOutcome out;
    if (d.is_zero()) {
        out.next = MultiPoly::zero();
        return out;
    }
    int deg = d.degree_in(var);
    if (deg > 2) return std::nullopt;
    if (deg == 0) {
        out.next = d;
        out.variable_absent = true;
        return out;
    }
    if (deg == 1) {
        LinearSplit s = split(d, var);
        out.next = rule == LinearRule::product ? (s.leading * s.constant).sign_normalized()
                                               : s.leading.sign_normalized();
        out.linear_convention = true;
        return out;
    }
    auto fact = factor_bilinear(d, var);
    if (!fact) return std::nullopt; // irreducible quadratic: stuck
    out.next = resultant(fact->first, fact->second, var).sign_normalized();
    out.factorization = fact;
    return out;
}

} // namespace detail

// One reduction step: resultant of the factors in the quadratic case, the
// product of the two coefficients in the linear case, unchanged when the
// variable is absent. nullopt = stuck.
inline std::optional<MultiPoly> reduce_step(const MultiPoly& d, int var) {
    auto out = detail::reduce_step_full(d, var);
    if (!out) return std::nullopt;
    return out->next;
}

// Iterated reduction along the given edge order (a prefix of E(G), length
// >= 5). Records every intermediate polynomial; a stuck trace is a result,
// not an error. Product-rule linear steps are validated by the mod-q step
// invariance (-1)^n [D^n]_q = (-1)^{n+1} [D^{n+1}]_q for q in {2,3,5};
// a failing step is marked, not hidden.
inline DenomTrace denominator_reduce(const Graph& g, const std::vector<int>& order,
                                     LinearRule rule = LinearRule::product) {
    if (order.size() < 5) throw input_error("denominator_reduce: order must list at least 5 edges");
    std::set<int> seen;
    for (int l : order) {
        (void)g.edge_by_label(l);
        if (!seen.insert(l).second) throw input_error("denominator_reduce: repeated edge in order");
    }
    DenomTrace tr;
    tr.graph = g;
    tr.order = order;
    MultiPoly d5 = five_invariant(g, {order[0], order[1], order[2], order[3], order[4]});
    tr.steps.push_back({5, d5, std::nullopt, false, false, true});
    if (d5.is_zero()) {
        tr.status = TraceStatus::vanished;
        return tr;
    }

    auto ambient_after = [&](int n) {
        std::vector<int> rem;
        for (int l : g.labels())
            if (std::find(order.begin(), order.begin() + n, l) == order.begin() + n) rem.push_back(l);
        std::sort(rem.begin(), rem.end());
        return rem;
    };
    auto validate_linear = [&](const MultiPoly& dn, const MultiPoly& dn1, int n) {
        std::vector<int> vars_n = ambient_after(n);
        std::vector<int> vars_n1 = ambient_after(n + 1);
        if (vars_n1.empty()) return true; // no arithmetic claim relates the final step
        for (int q : {2, 3, 5}) {
            Int a = count_points({dn}, vars_n, q).count;
            Int b = count_points({dn1}, vars_n1, q).count;
            Int lhs = (n % 2 == 0) ? a : -a;
            Int rhs = (n % 2 == 0) ? -b : b;
            if (((lhs - rhs) % q + q) % q != 0) return false;
        }
        return true;
    };

    MultiPoly d = d5;
    for (std::size_t idx = 5; idx < order.size(); ++idx) {
        auto out = detail::reduce_step_full(d, order[idx], rule);
        if (!out) {
            tr.status = TraceStatus::stuck;
            tr.note = "no admissible factorization at x" + std::to_string(order[idx]);
            return tr;
        }
        TraceStep step{static_cast<int>(idx) + 1, out->next, out->factorization, out->linear_convention,
                       out->variable_absent, true};
        if (rule == LinearRule::product && out->linear_convention) {
            step.convention_validated = validate_linear(d, out->next, static_cast<int>(idx));
            if (!step.convention_validated)
                tr.note += (tr.note.empty() ? "" : "; ") + std::string("unvalidated convention at x") +
                           std::to_string(order[idx]);
        }
        tr.steps.push_back(step);
        if (out->next.is_zero()) {
            tr.status = TraceStatus::vanished;
            return tr;
        }
        d = out->next;
    }
    tr.status = d.is_constant() ? TraceStatus::reduced_to_constant : TraceStatus::exhausted;
    return tr;
}

// Heuristic search for a vanishing D^n: seeded shuffles biased toward edges
// sharing a vertex with the already-chosen prefix. Budget counts attempted
// orders; nullopt is inconclusive, not a disproof.
inline std::optional<std::vector<int>> search_weight_drop(const Graph& g, long budget, unsigned seed = 0) {
    if (g.edge_count() < 5) throw input_error("search_weight_drop: graph has fewer than 5 edges");
    std::mt19937 rng(seed);
    const auto& es = g.edges();
    int n = g.edge_count();
    for (long attempt = 0; attempt < budget; ++attempt) {
        // grow an adjacency-biased order
        std::vector<int> rest(n);
        for (int i = 0; i < n; ++i) rest[i] = i;
        std::shuffle(rest.begin(), rest.end(), rng);
        std::vector<int> order;
        std::set<int> touched;
        while (!rest.empty()) {
            int pick = -1;
            for (std::size_t r = 0; r < rest.size(); ++r) {
                const Edge& e = es[rest[r]];
                if (order.empty() || touched.count(e.tail) || touched.count(e.head)) {
                    pick = static_cast<int>(r);
                    break;
                }
            }
            if (pick < 0) pick = 0;
            const Edge& e = es[rest[pick]];
            order.push_back(e.label);
            touched.insert(e.tail);
            touched.insert(e.head);
            rest.erase(rest.begin() + pick);
        }
        // only prefixes up to N-1 are meaningful for c2
        if (static_cast<int>(order.size()) == n) order.pop_back();
        if (order.size() < 5) continue;
        // the leading-coefficient rule keeps every vanishing a real weight drop
        DenomTrace tr = denominator_reduce(g, order, LinearRule::leading);
        if (tr.status == TraceStatus::vanished) return order;
    }
    return std::nullopt;
}

// Route B: c2(G)_q = (-1)^n [D^n]_q mod q, counted over the untouched edge
// variables (ambient N - n), for 5 <= n < N.
inline C2Report c2_via_denominator(const Graph& g, const std::vector<int>& order, const std::vector<int>& qs,
                                   const CountOptions& opts = {}) {
    if (2 * g.h() > g.edge_count())
        throw hypothesis_error("c2_via_denominator: requires 2h <= N");
    if (order.size() >= static_cast<std::size_t>(g.edge_count()))
        throw input_error("c2_via_denominator: order must leave at least one edge unreduced (n < N)");
    DenomTrace tr = denominator_reduce(g, order);
    if (tr.status == TraceStatus::stuck)
        throw hypothesis_error("c2_via_denominator: reduction is stuck (" + tr.note + ")");
    // use the deepest step whose whole prefix passed convention validation
    int n = tr.last_validated_n();
    if (n < 5) throw hypothesis_error("c2_via_denominator: no validated reduction step");
    const TraceStep* stepn = nullptr;
    for (auto& s : tr.steps)
        if (s.n == n) stepn = &s;
    std::vector<int> remaining;
    for (int l : g.labels())
        if (std::find(order.begin(), order.begin() + n, l) == order.begin() + n) remaining.push_back(l);
    std::sort(remaining.begin(), remaining.end());

    C2Report rep;
    rep.method = "denom";
    rep.warnings.push_back("n=" + std::to_string(n) + ", status=" + to_string(tr.status));
    if (!tr.note.empty()) rep.warnings.push_back(tr.note);
    for (int q : qs) {
        CountResult c = count_points({stepn->d}, remaining, q, opts);
        Int r = ((n % 2 == 0 ? c.count : -c.count) % q + q) % q;
        rep.entries.push_back({q, c.count, static_cast<int>(r.convert_to<long long>())});
    }
    return rep;
}

} // namespace c2
