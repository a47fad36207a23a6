#pragma once

#include "chaintr/algebra/poly.hpp"

#include <map>

namespace chaintr {

template <class S>
class RationalFn;

// Finite Laurent polynomial sum_k c_k z^k; zero coefficients are never stored.
template <class S>
class LaurentPoly {
public:
    using R = Ring<S>;
    LaurentPoly() = default;
    explicit LaurentPoly(std::map<int, S> c) : c_(std::move(c)) { trim(); }
    static LaurentPoly monomial(const S& a, int k) { return LaurentPoly(std::map<int, S>{{k, a}}); }
    static LaurentPoly from_poly(const Poly<S>& p) {
        std::map<int, S> c;
        for (int k = 0; k <= p.degree(); ++k) c[k] = p[k];
        return LaurentPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int low() const { return c_.empty() ? 0 : c_.begin()->first; }
    int high() const { return c_.empty() ? 0 : c_.rbegin()->first; }
    const std::map<int, S>& terms() const { return c_; }
    S operator[](int k) const {
        auto it = c_.find(k);
        return it == c_.end() ? from_int<S>(0) : it->second;
    }

    S eval(const S& z) const {
        S acc = from_int<S>(0);
        for (const auto& [k, a] : c_) acc += a * ipow(z, k);
        return acc;
    }

    LaurentPoly derivative() const {
        std::map<int, S> d;
        for (const auto& [k, a] : c_)
            if (k != 0) d[k - 1] = a * from_int<S>(k);
        return LaurentPoly(std::move(d));
    }

    LaurentPoly operator-() const {
        LaurentPoly r = *this;
        for (auto& [k, a] : r.c_) a = -a;
        return r;
    }
    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [k, a] : o.c_) {
            auto it = c_.find(k);
            if (it == c_.end()) c_.emplace(k, a);
            else it->second += a;
        }
        trim();
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this += -o; }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        std::map<int, S> r;
        for (const auto& [i, x] : a.c_)
            for (const auto& [j, y] : b.c_) {
                auto it = r.find(i + j);
                if (it == r.end()) r.emplace(i + j, x * y);
                else it->second += x * y;
            }
        return LaurentPoly(std::move(r));
    }
    friend LaurentPoly operator*(const S& s, const LaurentPoly& a) {
        std::map<int, S> r;
        for (const auto& [k, x] : a.c_) r[k] = s * x;
        return LaurentPoly(std::move(r));
    }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (auto i = a.c_.begin(), j = b.c_.begin(); i != a.c_.end(); ++i, ++j)
            if (i->first != j->first || !(i->second == j->second)) return false;
        return true;
    }

    LaurentPoly pow(int e) const {
        LaurentPoly out = monomial(from_int<S>(1), 0), b = *this;
        while (e > 0) {
            if (e & 1) out = out * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return out;
    }

    // p(this(z)) for a polynomial p
    LaurentPoly compose_into(const Poly<S>& p) const {
        LaurentPoly acc;
        for (int k = p.degree(); k >= 0; --k) acc = acc * *this + monomial(p[k], 0);
        return acc;
    }

    // this(r(z)) for a rational r; negative powers need r nonzero
    RationalFn<S> compose_with(const RationalFn<S>& r) const;

    // z^{-low} * this as a polynomial, with the shift returned
    std::pair<Poly<S>, int> as_poly_over_monomial() const {
        int lo = std::min(0, low());
        std::vector<S> c(high() - lo + 1, from_int<S>(0));
        for (const auto& [k, a] : c_) c[k - lo] = a;
        return {Poly<S>(std::move(c)), -lo};
    }

private:
    void trim() {
        for (auto it = c_.begin(); it != c_.end();)
            it = R::is_exact_zero(it->second) ? c_.erase(it) : std::next(it);
    }
    std::map<int, S> c_;
};

}  // namespace chaintr
