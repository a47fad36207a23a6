#pragma once

#include "chaintr/algebra/poly.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace chaintr {

// Truncated Laurent series sum_{k=val}^{prec} c_k u^k + O(u^(prec+1)) in a
// local coordinate: u = z - point, or w = 1/z when point is empty (infinity).
template <class S>
class LocalSeries {
public:
    using R = Ring<S>;
    static constexpr int kExact = 1 << 28;

    LocalSeries() = default;
    LocalSeries(std::vector<S> c, int val, int prec, std::optional<S> point = std::nullopt)
        : point_(std::move(point)), c_(std::move(c)), val_(val), prec_(prec) {
        normalize();
    }
    static LocalSeries constant(const S& a, int prec, std::optional<S> point = std::nullopt) {
        return LocalSeries({a}, 0, prec, std::move(point));
    }
    // u^k exactly
    static LocalSeries monomial(int k, int prec, std::optional<S> point = std::nullopt) {
        return LocalSeries({from_int<S>(1)}, k, prec, std::move(point));
    }
    static LocalSeries from_poly(const Poly<S>& p, int prec, std::optional<S> point = std::nullopt) {
        std::vector<S> c;
        for (int k = 0; k <= p.degree() && k <= prec; ++k) c.push_back(p[k]);
        return LocalSeries(std::move(c), 0, prec, std::move(point));
    }
    static LocalSeries zero(int prec, std::optional<S> point = std::nullopt) {
        return LocalSeries({}, prec + 1, prec, std::move(point));
    }

    const std::optional<S>& point() const { return point_; }
    bool at_infinity() const { return !point_.has_value(); }
    int val() const { return val_; }
    int prec() const { return prec_; }
    bool is_zero() const { return c_.empty(); }

    S coeff(int k) const {
        if (k > prec_)
            throw TruncationError("coefficient u^" + std::to_string(k) + " requested, series known to u^" +
                                  std::to_string(prec_));
        if (k < val_ || k - val_ >= static_cast<int>(c_.size())) return from_int<S>(0);
        return c_[k - val_];
    }
    S operator[](int k) const { return coeff(k); }

    // Residue of the density f(u) du; at infinity the convention is
    // Res = -(coefficient of z^-1), i.e. minus the w^1 coefficient.
    S residue() const { return at_infinity() ? -coeff(1) : coeff(-1); }

    LocalSeries truncated(int prec) const {
        LocalSeries r = *this;
        r.prec_ = std::min(prec_, prec);
        r.normalize();
        return r;
    }

    // Same coefficients, declared known through u^prec (missing terms are zero).
    // Used by Newton-type iterations that refine an approximation.
    LocalSeries with_prec(int prec) const {
        LocalSeries r = *this;
        r.prec_ = prec;
        r.normalize();
        return r;
    }

    LocalSeries operator-() const {
        LocalSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    LocalSeries& operator+=(const LocalSeries& o) {
        int prec = std::min(prec_, o.prec_);
        int lo = std::min(val_, o.val_);
        if (prec < lo) return *this = zero_like(prec);
        long top = std::max(static_cast<long>(val_) + static_cast<long>(c_.size()) - 1,
                            static_cast<long>(o.val_) + static_cast<long>(o.c_.size()) - 1);
        int hi = static_cast<int>(std::min<long>(prec, top));
        if (hi < lo) return *this = zero_like(prec);
        std::vector<S> c(hi - lo + 1, from_int<S>(0));
        for (int k = lo; k <= hi; ++k) {
            if (k >= val_ && k - val_ < static_cast<int>(c_.size())) c[k - lo] += c_[k - val_];
            if (k >= o.val_ && k - o.val_ < static_cast<int>(o.c_.size())) c[k - lo] += o.c_[k - o.val_];
        }
        c_ = std::move(c);
        val_ = lo;
        prec_ = prec;
        normalize();
        return *this;
    }
    LocalSeries& operator-=(const LocalSeries& o) { return *this += -o; }
    friend LocalSeries operator+(LocalSeries a, const LocalSeries& b) { return a += b; }
    friend LocalSeries operator-(LocalSeries a, const LocalSeries& b) { return a -= b; }

    friend LocalSeries operator*(const LocalSeries& a, const LocalSeries& b) {
        int prec = mul_prec(a, b);
        int val = a.val_ + b.val_;
        if (a.c_.empty() || b.c_.empty() || prec < val) return a.zero_like(prec);
        int n = prec - val + 1;
        std::vector<S> c(std::min<long>(n, static_cast<long>(a.c_.size() + b.c_.size()) - 1), from_int<S>(0));
        int m = static_cast<int>(c.size());
        for (int i = 0; i < static_cast<int>(a.c_.size()) && i < m; ++i) {
            if (R::is_exact_zero(a.c_[i])) continue;
            for (int j = 0; j < static_cast<int>(b.c_.size()) && i + j < m; ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return LocalSeries(std::move(c), val, prec, a.point_);
    }
    friend LocalSeries operator*(const S& s, const LocalSeries& a) {
        LocalSeries r = a;
        for (auto& x : r.c_) x = s * x;
        r.normalize();
        return r;
    }
    LocalSeries& operator*=(const LocalSeries& o) { return *this = *this * o; }

    // Multiplication by u^k.
    LocalSeries shifted(int k) const {
        LocalSeries r = *this;
        r.val_ += k;
        if (r.prec_ != kExact) r.prec_ += k;
        return r;
    }

    LocalSeries inverse() const {
        if (c_.empty()) throw RingError("inverse of a zero series");
        if (!R::is_invertible(c_[0])) throw RingError("leading series coefficient not invertible");
        if (prec_ == kExact && c_.size() > 1) throw RingError("inverse of an untruncated series");
        int rel = prec_ == kExact ? kExact : prec_ - val_;
        int n = rel == kExact ? 1 : rel + 1;
        std::vector<S> r(n, from_int<S>(0));
        S inv0 = R::inv(c_[0]);
        r[0] = inv0;
        for (int k = 1; k < n; ++k) {
            S s = from_int<S>(0);
            for (int j = 1; j <= k && j < static_cast<int>(c_.size()); ++j) s += c_[j] * r[k - j];
            r[k] = -(s * inv0);
        }
        return LocalSeries(std::move(r), -val_, rel == kExact ? kExact : rel - val_, point_);
    }
    friend LocalSeries operator/(const LocalSeries& a, const LocalSeries& b) { return a * b.inverse(); }

    LocalSeries pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        LocalSeries out = constant(from_int<S>(1), kExact, point_), b = *this;
        while (e > 0) {
            if (e & 1) out = out * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return out;
    }

    // d/du termwise.
    LocalSeries derivative() const {
        std::vector<S> c;
        for (size_t i = 0; i < c_.size(); ++i) {
            int k = val_ + static_cast<int>(i);
            c.push_back(c_[i] * from_int<S>(k));
        }
        return LocalSeries(std::move(c), val_ - 1, prec_ == kExact ? kExact : prec_ - 1, point_);
    }

    // Termwise primitive with zero constant; requires no u^-1 term.
    LocalSeries integral() const {
        if (!R::is_zero(coeff_or_zero(-1))) throw RingError("primitive of a series with a residue");
        std::vector<S> c;
        for (size_t i = 0; i < c_.size(); ++i) {
            int k = val_ + static_cast<int>(i);
            c.push_back(k == -1 ? from_int<S>(0) : c_[i] * R::inv(from_int<S>(k + 1)));
        }
        return LocalSeries(std::move(c), val_ + 1, prec_ == kExact ? kExact : prec_ + 1, point_);
    }

    // this(inner(u)); inner must have val >= 1. Result lives at inner's point.
    LocalSeries compose(const LocalSeries& inner) const {
        if (inner.val_ < 1) throw RingError("composition needs an inner series vanishing at 0");
        // this = u^val * g(u) with g regular; g known through u^gn
        int gn = prec_ == kExact ? static_cast<int>(c_.size()) - 1 : prec_ - val_;
        int cap = prec_ == kExact ? kExact : inner.val_ * (gn + 1) - 1;
        if (inner.prec_ != kExact) cap = std::min(cap, inner.prec_);
        LocalSeries acc({}, 0, kExact, inner.point_);
        for (int k = gn; k >= 0; --k) {
            acc = acc * inner + constant(coeff_or_zero(val_ + k), kExact, inner.point_);
            if (cap != kExact) acc = acc.truncated(cap);
        }
        if (val_ != 0) acc = acc * inner.pow(val_);
        return acc;
    }

    // Square root; leading coefficient must have a ring square root, even valuation.
    LocalSeries sqrt() const {
        if (c_.empty()) return *this;
        if (val_ % 2 != 0) throw RingError("square root of odd-valuation series");
        auto r0 = R::sqrt(c_[0]);
        if (!r0 || !R::is_invertible(*r0)) throw RingError("no square root of leading coefficient");
        int rel = prec_ == kExact ? static_cast<int>(c_.size()) * 4 : prec_ - val_;
        std::vector<S> s(rel + 1, from_int<S>(0));
        s[0] = *r0;
        S inv2 = R::inv(from_int<S>(2) * *r0);
        for (int k = 1; k <= rel; ++k) {
            S acc = k < static_cast<int>(c_.size()) ? c_[k] : from_int<S>(0);
            for (int j = 1; j < k; ++j) acc -= s[j] * s[k - j];
            s[k] = acc * inv2;
        }
        return LocalSeries(std::move(s), val_ / 2, val_ / 2 + rel, point_);
    }

    std::string str() const {
        std::string out;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (R::is_exact_zero(c_[i])) continue;
            if (!out.empty()) out += " + ";
            out += "(" + R::to_string(c_[i]) + ")u^" + std::to_string(val_ + static_cast<int>(i));
        }
        if (out.empty()) out = "0";
        if (prec_ != kExact) out += " + O(u^" + std::to_string(prec_ + 1) + ")";
        return out;
    }

private:
    static int mul_prec(const LocalSeries& a, const LocalSeries& b) {
        long pa = a.prec_ == kExact ? kExact : static_cast<long>(a.prec_) + b.val_;
        long pb = b.prec_ == kExact ? kExact : static_cast<long>(b.prec_) + a.val_;
        return static_cast<int>(std::min<long>({pa, pb, kExact}));
    }
    S coeff_or_zero(int k) const {
        if (k < val_ || k - val_ >= static_cast<int>(c_.size())) return from_int<S>(0);
        return c_[k - val_];
    }
    LocalSeries zero_like(int prec) const {
        LocalSeries r;
        r.point_ = point_;
        r.prec_ = prec;
        r.val_ = prec == kExact ? 0 : prec + 1;
        return r;
    }
    void normalize() {
        if (prec_ != kExact && static_cast<int>(c_.size()) > prec_ - val_ + 1)
            c_.resize(std::max(0, prec_ - val_ + 1));
        size_t lead = 0;
        while (lead < c_.size() && R::is_exact_zero(c_[lead])) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            val_ = prec_ == kExact ? 0 : prec_ + 1;
            return;
        }
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
            val_ += static_cast<int>(lead);
        }
        while (!c_.empty() && R::is_exact_zero(c_.back())) c_.pop_back();
    }

    std::optional<S> point_;
    std::vector<S> c_;
    int val_ = 0;
    int prec_ = kExact;
};

// Solve F(w(t), t) = 0 for a power series w(t) = seed + O(t), known through t^order.
// F receives w as a LocalSeries in t and returns F as a LocalSeries in t.
template <class S>
LocalSeries<S> series_solve(const std::function<LocalSeries<S>(const LocalSeries<S>&)>& F, const S& seed,
                            int order) {
    using R = Ring<S>;
    using L = LocalSeries<S>;
    L w0 = L::constant(seed, order);
    S f0 = F(w0).coeff(0);
    if (!R::is_zero(f0)) throw RingError("series_solve: seed is not a root");
    // F_w(seed, 0) = [t^1] F(seed + t) - [t^1] F(seed)
    L w1({seed, from_int<S>(1)}, 0, order);
    S d = F(w1).coeff(1) - F(w0).coeff(1);
    if (R::is_zero(d)) throw SingularCurveError("series_solve: zero derivative at seed (non-simple root)");
    S dinv = R::inv(d);
    std::vector<S> w{seed};
    for (int k = 1; k <= order; ++k) {
        w.push_back(from_int<S>(0));
        L cur(w, 0, order);
        S r = F(cur).coeff(k);
        w[k] = -(r * dinv);
    }
    return L(std::move(w), 0, order);
}

// Compositional inverse of f(u) = c1 u + ... (c1 invertible), through order.
// Newton iteration w <- w - (f(w) - t) / f'(w), doubling the precision.
template <class S>
LocalSeries<S> series_reversion(const LocalSeries<S>& f, int order) {
    using R = Ring<S>;
    using L = LocalSeries<S>;
    if (f.val() < 1) throw RingError("series_reversion: f(0) must vanish");
    S c1 = f.coeff(1);
    if (!R::is_invertible(c1)) throw SingularCurveError("series_reversion: zero linear coefficient");
    L df = f.derivative();
    L w({R::inv(c1)}, 1, 1);
    int p = 1;
    while (p < order) {
        p = std::min(2 * p + 1, order);
        L wt = w.with_prec(p);
        L num = f.compose(wt) - L::monomial(1, p);
        L den = df.compose(wt);
        w = (wt - (num * den.inverse()).truncated(p)).truncated(p);
    }
    return w.truncated(order);
}

}  // namespace chaintr
