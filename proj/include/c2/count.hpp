#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "c2/errors.hpp"
#include "c2/fq.hpp"
#include "c2/graph.hpp"
#include "c2/kirchhoff.hpp"
#include "c2/multipoly.hpp"

namespace c2 {

struct CountOptions {
    std::uint64_t work_cap = std::uint64_t(1) << 32; // evaluated assignments
    int threads = 1;
};

struct CountResult {
    int q = 0;
    Int count;
    int ambient = 0; // number of ambient variables N (the space is F_q^N)
};

namespace detail {

// One polynomial compiled against a fixed variable slate for fast evaluation.
struct CompiledPoly {
    struct Term {
        std::uint8_t coeff;
        std::vector<std::pair<int, int>> pows; // (variable slot, exponent)
    };
    std::vector<Term> terms;
    int max_exp = 1;
};

inline CompiledPoly compile_poly(const MultiPoly& f, const std::vector<int>& vars, const FieldTables& F) {
    CompiledPoly out;
    MultiPoly red = reduce_mod(f, F.p);
    for (auto& [m, c] : red.terms()) {
        CompiledPoly::Term t;
        t.coeff = F.from_int(c);
        for (auto& [v, e] : m.factors()) {
            auto it = std::find(vars.begin(), vars.end(), v);
            if (it == vars.end())
                throw input_error("count: polynomial variable x" + std::to_string(v) + " outside ambient slate");
            t.pows.push_back({static_cast<int>(it - vars.begin()), e});
            out.max_exp = std::max(out.max_exp, e);
        }
        out.terms.push_back(std::move(t));
    }
    return out;
}

// pow_table[v * (max_exp+1) + e] = v^e
inline std::vector<std::uint8_t> build_pow_table(const FieldTables& F, int max_exp) {
    std::vector<std::uint8_t> t(static_cast<std::size_t>(F.q) * (max_exp + 1));
    for (int v = 0; v < F.q; ++v)
        for (int e = 0; e <= max_exp; ++e) t[v * (max_exp + 1) + e] = F.pow(static_cast<std::uint8_t>(v), e);
    return t;
}

inline std::uint8_t eval_compiled(const CompiledPoly& cp, const FieldTables& F, const std::uint8_t* point,
                                  const std::uint8_t* pow_table, int stride) {
    std::uint8_t acc = 0;
    for (auto& t : cp.terms) {
        std::uint8_t val = t.coeff;
        for (auto& [slot, e] : t.pows) {
            val = F.mul(val, pow_table[point[slot] * stride + e]);
            if (val == 0) break;
        }
        acc = F.add(acc, val);
    }
    return acc;
}

inline std::uint64_t checked_pow(int q, int nvars, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (int i = 0; i < nvars; ++i) {
        if (total > cap / static_cast<std::uint64_t>(q))
            throw work_cap_error("enumeration of q^" + std::to_string(nvars) + " points exceeds the work cap");
        total *= static_cast<std::uint64_t>(q);
    }
    return total;
}

// Row-major enumeration of F_q^nvars; per_point must be a pure predicate.
// With several threads the leading coordinate is partitioned; the result is
// an exact sum and independent of the partitioning.
inline Int enumerate_count(int q, int nvars, const CountOptions& opts,
                           const std::function<bool(const std::uint8_t*)>& per_point) {
    checked_pow(q, nvars, opts.work_cap);
    if (nvars == 0) return per_point(nullptr) ? 1 : 0;

    auto count_block = [&](std::uint8_t first_lo, std::uint8_t first_hi) {
        std::uint64_t local = 0;
        std::vector<std::uint8_t> pt(nvars, 0);
        for (int v0 = first_lo; v0 < first_hi; ++v0) {
            std::fill(pt.begin(), pt.end(), 0);
            pt[0] = static_cast<std::uint8_t>(v0);
            while (true) {
                if (per_point(pt.data())) ++local;
                int i = nvars - 1;
                while (i >= 1) {
                    if (++pt[i] < q) break;
                    pt[i] = 0;
                    --i;
                }
                if (i == 0) break;
            }
        }
        return local;
    };

    int nthreads = std::max(1, std::min(opts.threads, q));
    if (nthreads == 1 || nvars == 1) return Int(count_block(0, static_cast<std::uint8_t>(q)));

    std::vector<std::uint64_t> partial(nthreads, 0);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
        int lo = q * t / nthreads, hi = q * (t + 1) / nthreads;
        pool.emplace_back([&, t, lo, hi] { partial[t] = count_block(static_cast<std::uint8_t>(lo), static_cast<std::uint8_t>(hi)); });
    }
    for (auto& th : pool) th.join();
    std::uint64_t total = 0;
    for (auto v : partial) total += v;
    return Int(total);
}

inline std::vector<int> union_vars(const std::vector<MultiPoly>& polys) {
    std::set<int> vs;
    for (auto& f : polys)
        for (int v : f.variables()) vs.insert(v);
    return std::vector<int>(vs.begin(), vs.end());
}

} // namespace detail

// ---------------------------------------------------------------------------
// Exact point count of the common zero locus by exhaustive enumeration.
// Evaluation stops at the first nonzero polynomial per assignment.
// ---------------------------------------------------------------------------
inline CountResult count_points(const std::vector<MultiPoly>& polys, const std::vector<int>& vars, int q,
                                const CountOptions& opts = {}) {
    const FieldTables& F = FieldTables::get(q);
    std::vector<detail::CompiledPoly> cps;
    int max_exp = 1;
    for (auto& f : polys) {
        cps.push_back(detail::compile_poly(f, vars, F));
        max_exp = std::max(max_exp, cps.back().max_exp);
    }
    auto pow_table = detail::build_pow_table(F, max_exp);
    int stride = max_exp + 1;
    Int count = detail::enumerate_count(q, static_cast<int>(vars.size()), opts, [&](const std::uint8_t* pt) {
        for (auto& cp : cps)
            if (detail::eval_compiled(cp, F, pt, pow_table.data(), stride) != 0) return false;
        return true;
    });
    return {q, count, static_cast<int>(vars.size())};
}

inline CountResult count_points(const std::vector<MultiPoly>& polys, int q, const CountOptions& opts = {}) {
    return count_points(polys, detail::union_vars(polys), q, opts);
}

// ---------------------------------------------------------------------------
// Elimination counting: recursively removes a variable in which every
// polynomial is linear, replacing the count by counts of coefficient and
// resultant systems (the point-count shadow of the simultaneous-reduction
// identity). Sub-systems are memoized; systems with no linear pivot fall
// back to enumeration. Agrees exactly with count_points.
// ---------------------------------------------------------------------------
namespace detail {

class ElimCounter {
public:
    ElimCounter(int q, const CountOptions& opts) : F_(FieldTables::get(q)), opts_(opts) {}

    Int count(std::vector<MultiPoly> polys, int ambient) {
        // reduce mod p and weed out trivial members
        std::vector<MultiPoly> sys;
        for (auto& f : polys) {
            MultiPoly r = reduce_mod(f, F_.p);
            if (r.is_zero()) continue;
            if (r.is_constant()) return 0; // nonzero constant: empty variety
            sys.push_back(std::move(r));
        }
        // dedupe
        std::sort(sys.begin(), sys.end(), [](const MultiPoly& a, const MultiPoly& b) { return a.to_string() < b.to_string(); });
        sys.erase(std::unique(sys.begin(), sys.end()), sys.end());
        if (sys.empty()) return q_pow(ambient);

        // drop unused ambient dimensions, densify variable names
        std::set<int> used;
        for (auto& f : sys)
            for (int v : f.variables()) used.insert(v);
        int unused = ambient - static_cast<int>(used.size());
        if (unused < 0) throw input_error("count_points_elim: ambient smaller than the variable support");
        std::vector<int> order(used.begin(), used.end());
        std::vector<MultiPoly> dense;
        for (auto& f : sys) dense.push_back(rename_dense(f, order));
        Int inner = counted(std::move(dense), static_cast<int>(order.size()));
        return inner * q_pow(unused);
    }

private:
    const FieldTables& F_;
    CountOptions opts_;
    std::unordered_map<std::string, Int> memo_;

    Int q_pow(int e) const {
        Int r = 1;
        for (int i = 0; i < e; ++i) r *= F_.q;
        return r;
    }

    static MultiPoly rename_dense(const MultiPoly& f, const std::vector<int>& order) {
        std::vector<MultiPoly::Term> ts;
        for (auto& [m, c] : f.terms()) {
            std::vector<Monomial::Factor> fs;
            for (auto& [v, e] : m.factors()) {
                auto it = std::lower_bound(order.begin(), order.end(), v);
                fs.push_back({static_cast<int>(it - order.begin()) + 1, e});
            }
            ts.push_back({Monomial(std::move(fs)), c});
        }
        return MultiPoly::from_terms(std::move(ts));
    }

    Int counted(std::vector<MultiPoly> sys, int m) {
        std::string key = std::to_string(m);
        for (auto& f : sys) {
            key += '|';
            key += f.to_string();
        }
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Int r = solve(std::move(sys), m);
        memo_.emplace(std::move(key), r);
        return r;
    }

    Int solve(std::vector<MultiPoly>&& sys, int m) {
        // pivot: variable linear in every polynomial, occurring most often
        int pivot = 0, best_occ = -1;
        for (int v = 1; v <= m; ++v) {
            int occ = 0;
            bool ok = true;
            for (auto& f : sys) {
                int d = f.degree_in(v);
                if (d > 1) {
                    ok = false;
                    break;
                }
                occ += d;
            }
            if (ok && occ > best_occ) {
                best_occ = occ;
                pivot = v;
            }
        }
        if (pivot == 0 || best_occ == 0) {
            // no linear pivot: enumerate this subsystem directly
            std::vector<int> vars(m);
            for (int i = 0; i < m; ++i) vars[i] = i + 1;
            return count_points(sys, vars, F_.q, opts_).count;
        }

        std::size_t n = sys.size();
        std::vector<MultiPoly> lead(n), con(n);
        for (std::size_t i = 0; i < n; ++i) {
            LinearSplit s = split(sys[i], pivot);
            lead[i] = reduce_mod(s.leading, F_.p);
            con[i] = reduce_mod(s.constant, F_.p);
        }
        auto res = [&](std::size_t i, std::size_t j) {
            return reduce_mod(lead[i] * con[j] - con[i] * lead[j], F_.p);
        };

        // [f_1..f_n] = L [f1^x,f1x,..,fn^x,fnx] + [[f1,f2]_x,..,[f1,fn]_x] - [f1^x,..,fn^x]
        //   + sum_k ( [f1^x,f1x,..,fk^x,fkx,[fk+1,fk+2]_x,..,[fk+1,fn]_x] - [f1^x,f1x,..,fk^x,fkx] )
        std::vector<MultiPoly> all_coeffs;
        for (std::size_t i = 0; i < n; ++i) {
            all_coeffs.push_back(lead[i]);
            all_coeffs.push_back(con[i]);
        }
        Int total = Int(F_.q) * count(all_coeffs, m - 1);

        std::vector<MultiPoly> res1;
        for (std::size_t j = 1; j < n; ++j) res1.push_back(res(0, j));
        total += count(res1, m - 1);

        total -= count(lead, m - 1);

        for (std::size_t k = 1; k + 2 <= n; ++k) {
            std::vector<MultiPoly> pre;
            for (std::size_t i = 0; i < k; ++i) {
                pre.push_back(lead[i]);
                pre.push_back(con[i]);
            }
            std::vector<MultiPoly> with_res = pre;
            for (std::size_t j = k + 1; j < n; ++j) with_res.push_back(res(k, j));
            total += count(with_res, m - 1);
            total -= count(pre, m - 1);
        }
        return total;
    }
};

} // namespace detail

inline CountResult count_points_elim(const std::vector<MultiPoly>& polys, const std::vector<int>& vars, int q,
                                     const CountOptions& opts = {}) {
    for (auto& f : polys)
        for (int v : f.variables())
            if (std::find(vars.begin(), vars.end(), v) == vars.end())
                throw input_error("count_points_elim: polynomial variable outside ambient slate");
    detail::ElimCounter ec(q, opts);
    return {q, ec.count(polys, static_cast<int>(vars.size())), static_cast<int>(vars.size())};
}

inline CountResult count_points_elim(const std::vector<MultiPoly>& polys, int q, const CountOptions& opts = {}) {
    return count_points_elim(polys, detail::union_vars(polys), q, opts);
}

// ---------------------------------------------------------------------------
// c_n extraction: q^n must divide every count; residues count/q^n mod q.
// ---------------------------------------------------------------------------
inline std::map<int, int> cn_invariant(const std::vector<CountResult>& counts, int n) {
    if (counts.empty()) throw input_error("cn_invariant: no counts");
    std::map<int, int> out;
    for (auto& c : counts) {
        Int qn = 1;
        for (int i = 0; i < n; ++i) qn *= c.q;
        if (c.count % qn != 0)
            throw divisibility_error("no c_" + std::to_string(n) + " invariant: q^" + std::to_string(n) +
                                     " does not divide the count at q=" + std::to_string(c.q));
        Int r = (c.count / qn) % c.q;
        out[c.q] = static_cast<int>(r.convert_to<long long>());
    }
    return out;
}

struct C2Entry {
    int q = 0;
    Int count;
    int residue = 0;
};

struct C2Report {
    std::string method;
    std::vector<C2Entry> entries;
    std::vector<std::string> warnings;
};

// Route A: direct count of the affine graph hypersurface, c2 = count/q^2 mod q.
// Large ambient spaces switch to elimination counting (exact, cross-checked
// against enumeration by the test suite).
inline C2Report c2_parametric(const Graph& g, const std::vector<int>& qs, const CountOptions& opts = {}) {
    C2Report rep;
    rep.method = "param";
    if (g.vertex_count() < 3)
        rep.warnings.push_back("graph has fewer than 3 vertices; the mod q^3 congruence is outside the theorem's hypothesis");
    MultiPoly p = psi(g);
    std::vector<int> vars = g.labels();
    std::sort(vars.begin(), vars.end());
    for (int q : qs) {
        const std::uint64_t direct_budget = std::uint64_t(1) << 24;
        std::uint64_t pts = 1;
        bool small = true;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (pts > direct_budget / q) {
                small = false;
                break;
            }
            pts *= q;
        }
        CountResult c = small ? count_points({p}, vars, q, opts) : count_points_elim({p}, vars, q, opts);
        Int q2 = Int(q) * q;
        if (c.count % q2 != 0)
            throw divisibility_error("c2_parametric: q^2 does not divide the count at q=" + std::to_string(q));
        Int r = (c.count / q2) % q;
        rep.entries.push_back({q, c.count, static_cast<int>(r.convert_to<long long>())});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Least-degree integer polynomial through the sample points, validated on
// held-out samples; nullopt when the counts are not polynomial in q.
// ---------------------------------------------------------------------------
inline std::optional<std::vector<Int>> fit_count_polynomial(const std::vector<std::pair<int, Int>>& samples) {
    using Rat = boost::multiprecision::cpp_rational;
    std::size_t npts = samples.size();
    if (npts < 2) return std::nullopt;
    for (std::size_t d = 0; d + 2 <= npts; ++d) {
        // Lagrange fit through the first d+1 points
        std::vector<Rat> coeff(d + 1, Rat(0));
        for (std::size_t i = 0; i <= d; ++i) {
            // basis polynomial for node i, expanded
            std::vector<Rat> basis{Rat(1)};
            Rat denom(1);
            for (std::size_t j = 0; j <= d; ++j) {
                if (j == i) continue;
                Int xj = samples[j].first;
                basis.push_back(Rat(0));
                for (std::size_t t = basis.size() - 1; t > 0; --t)
                    basis[t] = basis[t - 1] - Rat(xj) * basis[t];
                basis[0] = -Rat(xj) * basis[0];
                denom *= Rat(samples[i].first) - Rat(xj);
            }
            Rat scale = Rat(samples[i].second) / denom;
            for (std::size_t t = 0; t < basis.size(); ++t) coeff[t] += basis[t] * scale;
        }
        // integer coefficients required
        bool integral = true;
        std::vector<Int> icoeff;
        for (auto& c : coeff) {
            if (boost::multiprecision::denominator(c) != 1) {
                integral = false;
                break;
            }
            icoeff.push_back(boost::multiprecision::numerator(c));
        }
        if (!integral) continue;
        auto eval = [&](Int x) {
            Int acc = 0;
            for (std::size_t t = icoeff.size(); t-- > 0;) acc = acc * x + icoeff[t];
            return acc;
        };
        bool all_match = true;
        for (std::size_t j = d + 1; j < npts; ++j)
            if (eval(samples[j].first) != samples[j].second) {
                all_match = false;
                break;
            }
        if (all_match) return icoeff;
    }
    return std::nullopt;
}

} // namespace c2
