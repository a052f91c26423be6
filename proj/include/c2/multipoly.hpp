#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "c2/errors.hpp"

namespace c2 {

using Int = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Monomial: sparse exponent vector, factors sorted by variable index.
// Variables are positive integers ("x1", "x2", ...).
// ---------------------------------------------------------------------------
class Monomial {
public:
    using Factor = std::pair<int, int>; // (variable, exponent >= 1)

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors) : f_(std::move(factors)) {
        std::sort(f_.begin(), f_.end());
        for (std::size_t i = 0; i < f_.size(); ++i) {
            if (f_[i].first < 1 || f_[i].second < 1)
                throw input_error("monomial: bad variable or exponent");
            if (i > 0 && f_[i].first == f_[i - 1].first)
                throw input_error("monomial: duplicate variable");
        }
    }

    static Monomial var(int v, int exp = 1) { return Monomial({{v, exp}}); }
    static Monomial one() { return Monomial(); }

    const std::vector<Factor>& factors() const { return f_; }
    bool is_one() const { return f_.empty(); }

    int degree() const {
        int d = 0;
        for (auto& [v, e] : f_) d += e;
        return d;
    }

    int exponent(int var) const {
        for (auto& [v, e] : f_)
            if (v == var) return e;
        return 0;
    }

    bool contains(int var) const { return exponent(var) > 0; }

    Monomial times(const Monomial& o) const {
        Monomial r;
        r.f_.reserve(f_.size() + o.f_.size());
        std::size_t i = 0, j = 0;
        while (i < f_.size() || j < o.f_.size()) {
            if (j == o.f_.size() || (i < f_.size() && f_[i].first < o.f_[j].first))
                r.f_.push_back(f_[i++]);
            else if (i == f_.size() || o.f_[j].first < f_[i].first)
                r.f_.push_back(o.f_[j++]);
            else {
                r.f_.push_back({f_[i].first, f_[i].second + o.f_[j].second});
                ++i, ++j;
            }
        }
        return r;
    }

    // this / o, if o divides this.
    std::optional<Monomial> divide(const Monomial& o) const {
        Monomial r;
        std::size_t i = 0;
        for (auto& [v, e] : o.f_) {
            while (i < f_.size() && f_[i].first < v) r.f_.push_back(f_[i++]);
            if (i == f_.size() || f_[i].first != v || f_[i].second < e) return std::nullopt;
            if (f_[i].second > e) r.f_.push_back({v, f_[i].second - e});
            ++i;
        }
        while (i < f_.size()) r.f_.push_back(f_[i++]);
        return r;
    }

    // Remove a variable entirely.
    Monomial without(int var) const {
        Monomial r;
        for (auto& fac : f_)
            if (fac.first != var) r.f_.push_back(fac);
        return r;
    }

    bool operator==(const Monomial& o) const { return f_ == o.f_; }

private:
    std::vector<Factor> f_;
};

// Graded lexicographic comparison; +1 when a precedes b (a is "larger").
// Ties in total degree break lexicographically with x1 > x2 > ...
inline int monomial_cmp(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db ? 1 : -1;
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::size_t i = 0, j = 0;
    while (i < fa.size() && j < fb.size()) {
        if (fa[i].first < fb[j].first) return 1;  // a has the smaller variable
        if (fa[i].first > fb[j].first) return -1;
        if (fa[i].second != fb[j].second) return fa[i].second > fb[j].second ? 1 : -1;
        ++i, ++j;
    }
    if (i < fa.size()) return 1;
    if (j < fb.size()) return -1;
    return 0;
}

struct MonoGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return monomial_cmp(a, b) > 0; }
};

// ---------------------------------------------------------------------------
// MultiPoly: sparse multivariate polynomial with exact integer coefficients.
// Terms are kept in descending graded-lex order with no zero coefficients,
// so equality and rendering are canonical. Immutable in practice: all
// operations return fresh values.
// ---------------------------------------------------------------------------
class MultiPoly {
public:
    using Term = std::pair<Monomial, Int>;

    MultiPoly() = default;

    static MultiPoly zero() { return MultiPoly(); }

    static MultiPoly constant(Int c) {
        MultiPoly p;
        if (c != 0) p.terms_.push_back({Monomial::one(), std::move(c)});
        return p;
    }

    static MultiPoly var(int v, int exp = 1) {
        MultiPoly p;
        p.terms_.push_back({Monomial::var(v, exp), Int(1)});
        return p;
    }

    static MultiPoly term(Monomial m, Int c) {
        MultiPoly p;
        if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
        return p;
    }

    static MultiPoly from_terms(std::vector<Term> ts) {
        std::map<Monomial, Int, MonoGreater> acc;
        for (auto& [m, c] : ts) acc[m] += c;
        return from_map(acc);
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }

    Int constant_value() const {
        if (terms_.empty()) return 0;
        if (!is_constant()) throw input_error("constant_value: polynomial is not constant");
        return terms_[0].second;
    }

    const Term& leading_term() const {
        if (terms_.empty()) throw input_error("leading_term of zero polynomial");
        return terms_[0];
    }

    int degree() const { return terms_.empty() ? -1 : terms_[0].first.degree(); }

    int degree_in(int var) const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
        return d;
    }

    bool contains_var(int var) const {
        for (auto& [m, c] : terms_)
            if (m.contains(var)) return true;
        return false;
    }

    std::set<int> variables() const {
        std::set<int> vs;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.factors()) vs.insert(v);
        return vs;
    }

    int max_var() const {
        int mv = 0;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.factors()) mv = std::max(mv, v);
        return mv;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = terms_[0].first.degree();
        for (auto& [m, c] : terms_)
            if (m.degree() != d) return false;
        return true;
    }

    MultiPoly operator-() const {
        MultiPoly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    MultiPoly operator+(const MultiPoly& o) const {
        std::vector<Term> merged;
        merged.reserve(terms_.size() + o.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < o.terms_.size()) {
            if (j == o.terms_.size())
                merged.push_back(terms_[i++]);
            else if (i == terms_.size())
                merged.push_back(o.terms_[j++]);
            else {
                int c = monomial_cmp(terms_[i].first, o.terms_[j].first);
                if (c > 0)
                    merged.push_back(terms_[i++]);
                else if (c < 0)
                    merged.push_back(o.terms_[j++]);
                else {
                    Int s = terms_[i].second + o.terms_[j].second;
                    if (s != 0) merged.push_back({terms_[i].first, std::move(s)});
                    ++i, ++j;
                }
            }
        }
        MultiPoly r;
        r.terms_ = std::move(merged);
        return r;
    }

    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

    MultiPoly operator*(const MultiPoly& o) const {
        if (is_zero() || o.is_zero()) return MultiPoly();
        const MultiPoly& small = terms_.size() <= o.terms_.size() ? *this : o;
        const MultiPoly& big = terms_.size() <= o.terms_.size() ? o : *this;
        if (small.terms_.size() == 1) return big.scaled_by_term(small.terms_[0]);
        std::map<Monomial, Int, MonoGreater> acc;
        for (auto& [ma, ca] : small.terms_)
            for (auto& [mb, cb] : big.terms_) acc[ma.times(mb)] += ca * cb;
        return from_map(acc);
    }

    MultiPoly operator*(const Int& c) const {
        if (c == 0) return MultiPoly();
        MultiPoly r(*this);
        for (auto& [m, cc] : r.terms_) cc *= c;
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    // Substitute integers for a subset of variables.
    MultiPoly eval_partial(const std::map<int, Int>& assignment) const {
        std::map<Monomial, Int, MonoGreater> acc;
        for (auto& [m, c] : terms_) {
            Int coeff = c;
            Monomial rest;
            bool dead = false;
            std::vector<Monomial::Factor> keep;
            for (auto& [v, e] : m.factors()) {
                auto it = assignment.find(v);
                if (it == assignment.end()) {
                    keep.push_back({v, e});
                } else {
                    Int p = 1;
                    for (int k = 0; k < e; ++k) p *= it->second;
                    coeff *= p;
                    if (coeff == 0) {
                        dead = true;
                        break;
                    }
                }
            }
            if (dead) continue;
            acc[Monomial(std::move(keep))] += coeff;
        }
        return from_map(acc);
    }

    // Coefficient of var^k, with var removed from the surviving monomials.
    MultiPoly coefficient_of(int var, int k) const {
        MultiPoly r;
        for (auto& [m, c] : terms_)
            if (m.exponent(var) == k) r.terms_.push_back({m.without(var), c});
        // removing one variable preserves the relative graded-lex order only
        // within a fixed exponent; re-sort to stay canonical
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& a, const Term& b) { return monomial_cmp(a.first, b.first) > 0; });
        return r;
    }

    // gcd of all coefficients, non-negative; content(0) = 0.
    Int content() const {
        Int g = 0;
        for (auto& [m, c] : terms_) {
            g = boost::multiprecision::gcd(g, c);
            if (g == 1) break;
        }
        return g;
    }

    MultiPoly primitive_part() const {
        Int g = content();
        if (g == 0 || g == 1) return *this;
        MultiPoly r(*this);
        for (auto& [m, c] : r.terms_) c /= g;
        return r;
    }

    Int leading_coefficient() const { return terms_.empty() ? Int(0) : terms_[0].second; }

    // Flip the overall sign so the leading coefficient is positive.
    MultiPoly sign_normalized() const {
        if (!terms_.empty() && terms_[0].second < 0) return -*this;
        return *this;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [m, c] : terms_) {
            Int a = c < 0 ? Int(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            bool need_coeff = (a != 1) || m.is_one();
            if (need_coeff) os << a.str();
            bool need_star = need_coeff;
            for (auto& [v, e] : m.factors()) {
                if (need_star) os << "*";
                os << "x" << v;
                if (e > 1) os << "^" << e;
                need_star = true;
            }
        }
        return os.str();
    }

private:
    std::vector<Term> terms_;

    MultiPoly scaled_by_term(const Term& t) const {
        MultiPoly r;
        r.terms_.reserve(terms_.size());
        for (auto& [m, c] : terms_) r.terms_.push_back({m.times(t.first), c * t.second});
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& a, const Term& b) { return monomial_cmp(a.first, b.first) > 0; });
        return r;
    }

    template <class Map>
    static MultiPoly from_map(Map& acc) {
        MultiPoly r;
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) r.terms_.push_back({m, std::move(c)});
        return r;
    }
};

inline MultiPoly operator*(const Int& c, const MultiPoly& p) { return p * c; }

// ---------------------------------------------------------------------------
// Degree-one structure: f = leading * x + constant.
// ---------------------------------------------------------------------------
struct LinearSplit {
    MultiPoly leading;  // f^x
    MultiPoly constant; // f_x
    int var = 0;
};

inline LinearSplit split(const MultiPoly& f, int var) {
    if (f.degree_in(var) > 1)
        throw input_error("split: polynomial has degree >= 2 in x" + std::to_string(var));
    return LinearSplit{f.coefficient_of(var, 1), f.coefficient_of(var, 0), var};
}

// [f,g]_x = f^x g_x - f_x g^x for f, g of degree <= 1 in x.
inline MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, int var) {
    LinearSplit sf = split(f, var);
    LinearSplit sg = split(g, var);
    return sf.leading * sg.constant - sf.constant * sg.leading;
}

// Exact division; throws if g does not divide f.
inline MultiPoly divide_exact(const MultiPoly& f, const MultiPoly& g) {
    if (g.is_zero()) throw input_error("divide_exact: division by zero polynomial");
    MultiPoly q;
    MultiPoly r = f;
    const auto& glead = g.leading_term();
    std::vector<MultiPoly::Term> qterms;
    while (!r.is_zero()) {
        const auto& rlead = r.leading_term();
        auto m = rlead.first.divide(glead.first);
        if (!m) throw input_error("divide_exact: not divisible (monomial)");
        if (rlead.second % glead.second != 0) throw input_error("divide_exact: not divisible (coefficient)");
        MultiPoly t = MultiPoly::term(*m, rlead.second / glead.second);
        qterms.push_back(t.terms()[0]);
        r -= t * g;
    }
    return MultiPoly::from_terms(std::move(qterms));
}

inline bool divides(const MultiPoly& g, const MultiPoly& f) {
    if (g.is_zero()) return f.is_zero();
    try {
        divide_exact(f, g);
        return true;
    } catch (const input_error&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Exact square root over the rationals (result scaled to integers).
// Peels leading terms: if f = g^2, the leading term of g is the square root
// of the leading term of f and the remaining terms follow by division.
// ---------------------------------------------------------------------------
inline std::optional<MultiPoly> poly_sqrt(const MultiPoly& f) {
    if (f.is_zero()) return MultiPoly::zero();
    const auto& [lm, lc] = f.leading_term();
    if (lc < 0) return std::nullopt;
    Int s = boost::multiprecision::sqrt(lc);
    if (s * s != lc) return std::nullopt;
    std::vector<Monomial::Factor> half;
    for (auto& [v, e] : lm.factors()) {
        if (e % 2 != 0) return std::nullopt;
        half.push_back({v, e / 2});
    }
    MultiPoly g = MultiPoly::term(Monomial(std::move(half)), s);
    const Monomial gm = g.leading_term().first;
    const Int two_s = 2 * s;
    MultiPoly h = f - g * g;
    // each iteration adds one term to g with strictly decreasing monomial
    for (std::size_t guard = 0; !h.is_zero(); ++guard) {
        if (guard > 100000) return std::nullopt;
        const auto& [hm, hc] = h.leading_term();
        auto m = hm.divide(gm);
        if (!m) return std::nullopt;
        if (hc % two_s != 0) return std::nullopt;
        MultiPoly t = MultiPoly::term(*m, hc / two_s);
        if (monomial_cmp(t.leading_term().first, gm) >= 0) return std::nullopt;
        h -= (g * t) * Int(2) + t * t;
        g += t;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Polynomial gcd via primitive pseudo-remainder sequences. Inputs here stay
// small (coefficients of quadratics in one reduction variable).
// ---------------------------------------------------------------------------
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

namespace detail {

// content of f viewed in (R[others])[var]: gcd of the var-coefficients
inline MultiPoly content_in(const MultiPoly& f, int var) {
    MultiPoly g;
    for (int k = f.degree_in(var); k >= 0; --k) {
        MultiPoly c = f.coefficient_of(var, k);
        if (!c.is_zero()) g = poly_gcd(g, c);
    }
    return g;
}

} // namespace detail

inline MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return b.sign_normalized();
    if (b.is_zero()) return a.sign_normalized();
    if (a.is_constant() || b.is_constant()) {
        Int g = boost::multiprecision::gcd(a.content(), b.content());
        return MultiPoly::constant(g);
    }
    int var = std::max(a.max_var(), b.max_var());
    if (!a.contains_var(var)) return poly_gcd(a, detail::content_in(b, var));
    if (!b.contains_var(var)) return poly_gcd(detail::content_in(a, var), b);

    MultiPoly ca = detail::content_in(a, var);
    MultiPoly cb = detail::content_in(b, var);
    MultiPoly c = poly_gcd(ca, cb);
    MultiPoly f = divide_exact(a, ca);
    MultiPoly g = divide_exact(b, cb);
    if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
    while (true) {
        // pseudo-remainder of f by g in var
        int df = f.degree_in(var), dg = g.degree_in(var);
        MultiPoly lg = g.coefficient_of(var, dg);
        MultiPoly r = f;
        for (int k = 0; k < df - dg + 1; ++k) {
            int dr = r.degree_in(var);
            if (r.is_zero() || dr < dg) break;
            MultiPoly lr = r.coefficient_of(var, dr);
            MultiPoly shift = (dr - dg) > 0 ? lr * MultiPoly::var(var, dr - dg) : lr;
            r = r * lg - shift * g;
        }
        if (r.is_zero()) return (c * divide_exact(g, detail::content_in(g, var))).sign_normalized();
        if (r.degree_in(var) == 0) return c.sign_normalized();
        f = g;
        g = divide_exact(r, detail::content_in(r, var));
    }
}

// ---------------------------------------------------------------------------
// factor_bilinear: split f (degree <= 2 in x) into two factors of degree <= 1
// in x, if such a factorization exists over the rationals. Works through the
// discriminant: f = Ax^2 + Bx + C factors iff B^2 - 4AC is a polynomial
// square. Content lands on p and the leading coefficient of p is positive.
// ---------------------------------------------------------------------------
inline std::optional<std::pair<MultiPoly, MultiPoly>> factor_bilinear(const MultiPoly& f, int var) {
    int d = f.degree_in(var);
    if (d > 2) throw input_error("factor_bilinear: degree > 2 in x" + std::to_string(var));
    if (f.is_zero()) return std::make_pair(MultiPoly::zero(), MultiPoly::constant(1));
    if (d <= 1) return std::make_pair(f, MultiPoly::constant(1));

    MultiPoly A = f.coefficient_of(var, 2);
    MultiPoly B = f.coefficient_of(var, 1);
    MultiPoly C = f.coefficient_of(var, 0);
    MultiPoly disc = B * B - Int(4) * (A * C);
    auto s = poly_sqrt(disc);
    if (!s) return std::nullopt;

    // 4Af = (2Ax + B - s)(2Ax + B + s); the primitive part of either raw
    // factor divides f (it is irreducible of degree 1 in x).
    MultiPoly raw = Int(2) * A * MultiPoly::var(var) + (B - *s);
    if (raw.is_zero()) raw = Int(2) * A * MultiPoly::var(var) + (B + *s);
    MultiPoly g = poly_gcd(Int(2) * A, B - *s);
    MultiPoly p = divide_exact(raw, g);
    MultiPoly q;
    try {
        q = divide_exact(f, p);
    } catch (const input_error&) {
        return std::nullopt; // defensive: should not happen for true squares
    }
    // deterministic normalization: integer content on p, q primitive,
    // leading coefficient of p positive
    Int cq = q.content();
    if (cq > 1) {
        q = q.primitive_part();
        p = p * cq;
    }
    if (p.leading_coefficient() < 0) {
        p = -p;
        q = -q;
    }
    return std::make_pair(p, q);
}

// ---------------------------------------------------------------------------
// Reduction mod p: coefficients into [0, p).
// ---------------------------------------------------------------------------
inline bool is_prime_u(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline MultiPoly reduce_mod(const MultiPoly& f, int p) {
    if (!is_prime_u(p)) throw input_error("reduce_mod: modulus " + std::to_string(p) + " is not prime");
    std::vector<MultiPoly::Term> ts;
    for (auto& [m, c] : f.terms()) {
        Int r = c % p;
        if (r < 0) r += p;
        if (r != 0) ts.push_back({m, r});
    }
    return MultiPoly::from_terms(std::move(ts));
}

} // namespace c2
