#pragma once

#include "chaintr/algebra/ring.hpp"

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

namespace chaintr {

// Dense univariate polynomial, c[k] multiplies z^k. No trailing exact zeros.
template <class S>
class Poly {
public:
    using R = Ring<S>;

    Poly() = default;
    explicit Poly(std::vector<S> c) : c_(std::move(c)) { trim(); }
    Poly(std::initializer_list<S> c) : c_(c) { trim(); }
    static Poly constant(const S& a) { return Poly(std::vector<S>{a}); }
    static Poly monomial(const S& a, int k) {
        std::vector<S> c(k + 1, from_int<S>(0));
        c[k] = a;
        return Poly(std::move(c));
    }
    static Poly z() { return monomial(from_int<S>(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<S>& coeffs() const { return c_; }
    S operator[](int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : from_int<S>(0); }
    const S& lead() const { return c_.back(); }

    S eval(const S& x) const {
        S acc = from_int<S>(0);
        for (int k = degree(); k >= 0; --k) acc = acc * x + c_[k];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<S> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * from_int<S>(static_cast<long>(k));
        return Poly(std::move(d));
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), from_int<S>(0));
        for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<S> r(a.c_.size() + b.c_.size() - 1, from_int<S>(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const S& s, const Poly& a) {
        std::vector<S> r = a.c_;
        for (auto& x : r) x = s * x;
        return Poly(std::move(r));
    }
    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (size_t k = 0; k < a.c_.size(); ++k)
            if (!(a.c_[k] == b.c_[k])) return false;
        return true;
    }

    Poly pow(int e) const {
        Poly out = constant(from_int<S>(1)), b = *this;
        while (e > 0) {
            if (e & 1) out = out * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return out;
    }

    // p(q(z))
    Poly compose(const Poly& q) const {
        Poly acc;
        for (int k = degree(); k >= 0; --k) acc = acc * q + constant(c_[k]);
        return acc;
    }

    // Quotient and remainder; leading coefficient of d must be invertible.
    static std::pair<Poly, Poly> divmod(const Poly& n, const Poly& d) {
        if (d.is_zero()) throw RingError("polynomial division by zero");
        if (!R::is_invertible(d.lead())) throw RingError("leading coefficient not invertible");
        S li = R::inv(d.lead());
        std::vector<S> r = n.c_;
        int dn = n.degree(), dd = d.degree();
        if (dn < dd) return {Poly(), n};
        std::vector<S> q(dn - dd + 1, from_int<S>(0));
        for (int k = dn; k >= dd; --k) {
            S f = r[k] * li;
            q[k - dd] = f;
            for (int j = 0; j <= dd; ++j) r[k - dd + j] -= f * d.c_[j];
            r[k] = from_int<S>(0);
        }
        r.resize(dd);
        return {Poly(std::move(q)), Poly(std::move(r))};
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return R::inv(lead()) * *this;
    }

    // Euclid; exact rings only (tolerance trimming for floating is caller's job).
    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // Coefficients of p(a + u) as a polynomial in u.
    Poly shift(const S& a) const {
        std::vector<S> c = c_;
        int n = degree();
        for (int i = 0; i < n; ++i)
            for (int k = n - 1; k >= i; --k) c[k] += a * c[k + 1];
        return Poly(std::move(c));
    }

    // Drop near-zero coefficients (floating) relative to the largest one.
    Poly chop(double rel) const {
        double m = 0;
        for (const auto& x : c_) m = std::max(m, R::magnitude(x));
        std::vector<S> c = c_;
        for (auto& x : c)
            if (R::magnitude(x) <= rel * m) x = from_int<S>(0);
        return Poly(std::move(c));
    }

    static Poly from_roots(const std::vector<S>& roots) {
        Poly p = constant(from_int<S>(1));
        for (const auto& r : roots) p = p * Poly({-r, from_int<S>(1)});
        return p;
    }

private:
    void trim() {
        while (!c_.empty() && R::is_exact_zero(c_.back())) c_.pop_back();
    }
    std::vector<S> c_;
};

}  // namespace chaintr
