#pragma once

#include "chaintr/algebra/laurent.hpp"
#include "chaintr/algebra/local_series.hpp"
#include "chaintr/algebra/roots.hpp"

#include <optional>
#include <vector>

namespace chaintr {

// Principal part sum_{j=1}^{m} c[j-1] / (z - at)^j.
template <class S>
struct PrincipalPart {
    S at;
    std::vector<S> coeffs;
};

template <class S>
struct PartialFractions {
    Poly<S> polynomial;
    std::vector<PrincipalPart<S>> parts;
};

// num/den. Exact rational ring: gcd-reduced with monic denominator.
template <class S>
class RationalFn {
public:
    using R = Ring<S>;
    RationalFn() : den_(Poly<S>::constant(from_int<S>(1))) {}
    RationalFn(Poly<S> num) : num_(std::move(num)), den_(Poly<S>::constant(from_int<S>(1))) {}  // NOLINT
    RationalFn(Poly<S> num, Poly<S> den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw RingError("rational function with zero denominator");
        reduce();
    }
    static RationalFn from_laurent(const LaurentPoly<S>& l) {
        auto [p, shift] = l.as_poly_over_monomial();
        return RationalFn(p, Poly<S>::monomial(from_int<S>(1), shift));
    }

    const Poly<S>& num() const { return num_; }
    const Poly<S>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    S eval(const S& z) const {
        S d = den_.eval(z);
        if (!R::is_invertible(d)) throw RingError("evaluation at a pole");
        return num_.eval(z) * R::inv(d);
    }

    RationalFn derivative() const {
        return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }
    RationalFn operator-() const { return RationalFn(-num_, den_); }
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
        return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
        if (b.is_zero()) throw RingError("division by the zero rational function");
        return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RationalFn& a, const RationalFn& b) {
        return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
    }

    // Zero/pole order at a finite point (positive: zero, negative: pole).
    int order_at(const S& a) const {
        if (num_.is_zero()) throw RingError("order of the zero function");
        return valuation(num_.shift(a)) - valuation(den_.shift(a));
    }
    int order_at_infinity() const { return den_.degree() - num_.degree(); }

    // Series in u = z - point (or w = 1/z at infinity), known through u^order.
    LocalSeries<S> local_expand(const std::optional<S>& point, int order) const {
        using L = LocalSeries<S>;
        Poly<S> n, d;
        int vn, vd;
        if (point) {
            n = num_.shift(*point);
            d = den_.shift(*point);
        } else {
            n = reversed(num_);
            d = reversed(den_);
        }
        vn = valuation(n);
        vd = valuation(d);
        // at infinity f = w^(deg den - deg num) rev(num)/rev(den)
        int v = vn - vd + (point ? 0 : den_.degree() - num_.degree());
        if (!num_.is_zero() && v < 0 && order < v) throw TruncationError("expansion order below the pole order");
        int rel = order - v;
        L ns = L::from_poly(drop_low(n, vn), std::max(rel, 0), point);
        L ds = L::from_poly(drop_low(d, vd), std::max(rel, 0), point);
        if (num_.is_zero()) return L::zero(order, point);
        L q = ns * ds.inverse();
        return q.shifted(v).truncated(order);
    }

    // Residue of f(z) dz; at infinity: minus the coefficient of z^-1.
    S residue(const std::optional<S>& point) const {
        if (num_.is_zero()) return from_int<S>(0);
        return local_expand(point, point ? -1 : 1).residue();
    }

    // Poles: exact ring needs rational poles; floating needs separated poles.
    std::vector<S> poles() const {
        Poly<S> sq = den_;
        if constexpr (R::kind == RingKind::rational) {
            auto g = Poly<S>::gcd(den_, den_.derivative());
            sq = Poly<S>::divmod(den_, g).first;
        }
        try {
            return poly_roots(sq);
        } catch (const MultipleRootError&) {
            throw RingError("clustered poles");
        }
    }

    PartialFractions<S> partial_fractions() const {
        PartialFractions<S> pf;
        pf.polynomial = Poly<S>::divmod(num_, den_).first;
        auto rem = RationalFn(Poly<S>::divmod(num_, den_).second, den_);
        for (const auto& p : poles()) {
            int m = -rem.order_at_tol(p);
            if (m <= 0) continue;
            auto ser = rem.local_expand(p, -1);
            PrincipalPart<S> part{p, {}};
            for (int j = 1; j <= m; ++j) part.coeffs.push_back(ser.coeff(-j));
            pf.parts.push_back(std::move(part));
        }
        return pf;
    }

    static RationalFn from_partial_fractions(const PartialFractions<S>& pf) {
        RationalFn out(pf.polynomial);
        // one fraction per pole over (z - a)^m: no common factor even without gcds
        for (const auto& part : pf.parts) {
            int m = static_cast<int>(part.coeffs.size());
            while (m > 0 && R::is_exact_zero(part.coeffs[m - 1])) --m;
            if (m == 0) continue;
            Poly<S> lin({-part.at, from_int<S>(1)});
            Poly<S> num;
            for (int j = 0; j < m; ++j) num += part.coeffs[j] * lin.pow(m - 1 - j);
            out = out + RationalFn(num, lin.pow(m));
        }
        return out;
    }

private:
    int order_at_tol(const S& a) const { return valuation(num_.shift(a)) - valuation(den_.shift(a)); }
    static int valuation(const Poly<S>& p) {
        for (int k = 0; k <= p.degree(); ++k)
            if (!R::is_zero(p[k])) return k;
        return p.degree() + 1;
    }
    static Poly<S> drop_low(const Poly<S>& p, int k) {
        std::vector<S> c;
        for (int j = k; j <= p.degree(); ++j) c.push_back(p[j]);
        return Poly<S>(std::move(c));
    }
    static Poly<S> reversed(const Poly<S>& p) {
        std::vector<S> c(p.coeffs().rbegin(), p.coeffs().rend());
        return Poly<S>(std::move(c));
    }
    void reduce() {
        if constexpr (R::kind == RingKind::rational) {
            if (num_.is_zero()) {
                den_ = Poly<S>::constant(from_int<S>(1));
                return;
            }
            auto g = Poly<S>::gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = Poly<S>::divmod(num_, g).first;
                den_ = Poly<S>::divmod(den_, g).first;
            }
        }
        if (R::is_invertible(den_.lead())) {
            S li = R::inv(den_.lead());
            num_ = li * num_;
            den_ = li * den_;
        }
    }

    Poly<S> num_, den_;
};

template <class S>
RationalFn<S> LaurentPoly<S>::compose_with(const RationalFn<S>& r) const {
    RationalFn<S> acc;
    for (const auto& [k, a] : c_) {
        RationalFn<S> term(Poly<S>::constant(a));
        if (k > 0)
            for (int j = 0; j < k; ++j) term = term * r;
        if (k < 0)
            for (int j = 0; j < -k; ++j) term = term / r;
        acc = acc + term;
    }
    return acc;
}

}  // namespace chaintr
