#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "c2/errors.hpp"
#include "c2/multipoly.hpp"

namespace c2 {

// q = p^n. Prime fields for any prime p < 256; prime-power fields from a
// fixed table of irreducible polynomials.
struct FieldSpec {
    int q = 0, p = 0, n = 1;

    static FieldSpec parse(int q) {
        if (q < 2 || q > 255) throw input_error("unsupported field size " + std::to_string(q));
        int p = smallest_prime_factor(q);
        int n = 0, m = q;
        while (m > 1) {
            if (m % p != 0) throw input_error(std::to_string(q) + " is not a prime power");
            m /= p;
            ++n;
        }
        return {q, p, n};
    }

private:
    static int smallest_prime_factor(int q) {
        for (int d = 2; d * d <= q; ++d)
            if (q % d == 0) return d;
        return q;
    }
};

// Precomputed arithmetic tables. Elements are 0..q-1; for extension fields
// the base-p digits of an element are the coefficients of its polynomial
// representative.
class FieldTables {
public:
    int q, p, n;

    std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * q + b]; }
    std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add_[a * q + neg_[b]]; }
    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q + b]; }
    std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
    std::uint8_t inv(std::uint8_t a) const {
        if (a == 0) throw input_error("inverse of zero");
        return inv_[a];
    }
    std::uint8_t pow(std::uint8_t a, int e) const {
        std::uint8_t r = 1;
        for (int i = 0; i < e; ++i) r = mul(r, a);
        return r;
    }
    // canonical embedding of an integer residue
    std::uint8_t from_int(const Int& v) const {
        Int r = v % p;
        if (r < 0) r += p;
        return static_cast<std::uint8_t>(r.convert_to<int>());
    }

    const std::uint8_t* mul_row(std::uint8_t a) const { return &mul_[a * q]; }
    const std::uint8_t* add_row(std::uint8_t a) const { return &add_[a * q]; }

    static const FieldTables& get(int q);

private:
    std::vector<std::uint8_t> add_, mul_, neg_, inv_;

    explicit FieldTables(const FieldSpec& spec) : q(spec.q), p(spec.p), n(spec.n) {
        static const std::map<int, std::vector<int>> irreducibles = {
            // ascending coefficients, monic
            {4, {1, 1, 1}},       // t^2 + t + 1 over F_2
            {8, {1, 1, 0, 1}},    // t^3 + t + 1 over F_2
            {9, {1, 0, 1}},       // t^2 + 1 over F_3
            {16, {1, 1, 0, 0, 1}},// t^4 + t + 1 over F_2
            {25, {3, 0, 1}},      // t^2 + 3 over F_5
            {27, {1, 2, 0, 1}},   // t^3 + 2t + 1 over F_3
        };
        std::vector<int> irr;
        if (n > 1) {
            auto it = irreducibles.find(q);
            if (it == irreducibles.end())
                throw input_error("prime power " + std::to_string(q) + " not in the supported table");
            irr = it->second;
        }
        auto digits = [&](int v) {
            std::vector<int> d(n);
            for (int i = 0; i < n; ++i) {
                d[i] = v % p;
                v /= p;
            }
            return d;
        };
        auto undigits = [&](const std::vector<int>& d) {
            int v = 0;
            for (int i = n - 1; i >= 0; --i) v = v * p + d[i];
            return v;
        };
        add_.resize(q * q);
        mul_.resize(q * q);
        neg_.resize(q);
        inv_.assign(q, 0);
        for (int a = 0; a < q; ++a) {
            auto da = digits(a);
            std::vector<int> dn(n);
            for (int i = 0; i < n; ++i) dn[i] = (p - da[i]) % p;
            neg_[a] = static_cast<std::uint8_t>(undigits(dn));
            for (int b = 0; b < q; ++b) {
                auto db = digits(b);
                std::vector<int> ds(n);
                for (int i = 0; i < n; ++i) ds[i] = (da[i] + db[i]) % p;
                add_[a * q + b] = static_cast<std::uint8_t>(undigits(ds));
                // polynomial product reduced by the irreducible
                std::vector<int> prod(2 * n - 1, 0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                for (int d = 2 * n - 2; d >= n; --d) {
                    int c = prod[d];
                    if (c == 0) continue;
                    prod[d] = 0;
                    for (int i = 0; i < n; ++i)
                        prod[d - n + i] = ((prod[d - n + i] - c * irr[i]) % p + p * p) % p;
                }
                prod.resize(n);
                mul_[a * q + b] = static_cast<std::uint8_t>(undigits(prod));
            }
        }
        for (int a = 1; a < q; ++a)
            for (int b = 1; b < q; ++b)
                if (mul_[a * q + b] == 1) {
                    inv_[a] = static_cast<std::uint8_t>(b);
                    break;
                }
        for (int a = 1; a < q; ++a)
            if (inv_[a] == 0) throw input_error("field construction failed for q=" + std::to_string(q));
    }

    friend class FieldRegistry;
};

class FieldRegistry {
public:
    static const FieldTables& get(int q) {
        static FieldRegistry reg;
        std::lock_guard<std::mutex> lock(reg.mu_);
        auto it = reg.tables_.find(q);
        if (it == reg.tables_.end()) {
            FieldSpec spec = FieldSpec::parse(q);
            it = reg.tables_.emplace(q, std::unique_ptr<FieldTables>(new FieldTables(spec))).first;
        }
        return *it->second;
    }

private:
    std::mutex mu_;
    std::map<int, std::unique_ptr<FieldTables>> tables_;
};

inline const FieldTables& FieldTables::get(int q) { return FieldRegistry::get(q); }

// Value-semantics field element for tests and small computations.
class FqElem {
public:
    FqElem(int q, int value) : t_(&FieldTables::get(q)), v_(static_cast<std::uint8_t>(value % q)) {}

    int q() const { return t_->q; }
    int value() const { return v_; }

    FqElem operator+(const FqElem& o) const { return with(t_->add(v_, o.v_)); }
    FqElem operator-(const FqElem& o) const { return with(t_->sub(v_, o.v_)); }
    FqElem operator*(const FqElem& o) const { return with(t_->mul(v_, o.v_)); }
    FqElem operator-() const { return with(t_->neg(v_)); }
    FqElem inverse() const { return with(t_->inv(v_)); }
    FqElem pow(int e) const { return with(t_->pow(v_, e)); }
    bool operator==(const FqElem& o) const { return t_->q == o.t_->q && v_ == o.v_; }

private:
    const FieldTables* t_;
    std::uint8_t v_;
    FqElem with(std::uint8_t v) const {
        FqElem e = *this;
        e.v_ = v;
        return e;
    }
};

} // namespace c2
