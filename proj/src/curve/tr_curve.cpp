#include "chaintr/curve/tr_curve.hpp"

namespace chaintr {

namespace {

// x(a+u) with the linear coefficient forced to zero (a is a zero of x').
template <class S>
LocalSeries<S> x_at_branch(const MeroFn<S>& x, const S& a, int order) {
    LocalSeries<S> xs = x.expand_at(a, order);
    std::vector<S> c;
    for (int k = 0; k <= order; ++k) c.push_back(k == 1 ? from_int<S>(0) : xs.coeff(k));
    return LocalSeries<S>(std::move(c), 0, order, a);
}

template <class S>
LocalSeries<S> conj_from_x(const LocalSeries<S>& xs, int order) {
    using R = Ring<S>;
    using L = LocalSeries<S>;
    S c2 = xs.coeff(2);
    if (!R::is_invertible(c2) || R::is_zero(c2)) throw SingularCurveError("double zero of dx at a branch point");
    // X(u) = x(a+u) - x(a) = c2 u^2 (1 + ...);  s(u) = u sqrt(X / (c2 u^2))
    L X = xs - L::constant(xs.coeff(0), L::kExact);
    L q = R::inv(c2) * X.shifted(-2);
    L s = q.sqrt().shifted(1);
    L r = series_reversion(s, order);
    L delta = r.compose(-s);
    return delta.truncated(order);
}

}  // namespace

template <class S>
TRCurve<S>::TRCurve(MeroFn<S> x, MeroFn<S> y) : x_(std::move(x)), y_(std::move(y)) {
    Poly<S> p = branch_polynomial();
    try {
        branch_ = poly_roots(p);
    } catch (const MultipleRootError& e) {
        throw SingularCurveError(std::string("dx has a multiple zero (") + e.what() + ")");
    }
    for (const auto& a : branch_) {
        for (const auto& part : x_.parts)
            if (Ring<S>::is_zero(a - part.at)) throw SingularCurveError("branch point at a pole of x");
        LocalSeries<S> ys = y_.expand_at(a, 1);
        if (Ring<S>::is_zero(ys.coeff(1)) || !Ring<S>::is_invertible(ys.coeff(1)))
            throw SingularCurveError("dy vanishes at the branch point " + Ring<S>::to_string(a));
    }
}

template <class S>
Poly<S> TRCurve<S>::branch_polynomial() const {
    // prod over poles of (z - p)^(m+1)
    std::vector<Poly<S>> factors;
    for (size_t i = 0; i < x_.parts.size(); ++i) {
        int m = x_.order_at_part(i);
        factors.push_back(m > 0 ? Poly<S>({-x_.parts[i].at, from_int<S>(1)}).pow(m + 1)
                                : Poly<S>::constant(from_int<S>(1)));
    }
    auto all_but = [&](size_t skip) {
        Poly<S> p = Poly<S>::constant(from_int<S>(1));
        for (size_t i = 0; i < factors.size(); ++i)
            if (i != skip) p = p * factors[i];
        return p;
    };
    Poly<S> out = x_.poly.derivative() * all_but(factors.size());
    for (size_t i = 0; i < x_.parts.size(); ++i) {
        int m = x_.order_at_part(i);
        if (m == 0) continue;
        Poly<S> lin({-x_.parts[i].at, from_int<S>(1)});
        // derivative of c_j/(z-p)^j is -j c_j/(z-p)^(j+1); times (z-p)^(m+1)
        Poly<S> acc;
        for (int j = 1; j <= m; ++j) {
            S cj = x_.parts[i].coeffs[j - 1];
            acc = acc + (from_int<S>(-j) * cj) * lin.pow(m - j);
        }
        out = out + acc * all_but(i);
    }
    return out;
}

template <class S>
BranchPoint<S> TRCurve<S>::branch_point(size_t i, int order) const {
    BranchPoint<S> bp;
    bp.a = branch_.at(i);
    bp.order = order;
    bp.x = x_at_branch(x_, bp.a, order + 2);
    bp.y = y_.expand_at(bp.a, order + 1);
    bp.conj = conj_from_x(bp.x, order);
    LocalSeries<S> yx = bp.y * bp.x.derivative();
    bp.phi = yx.integral().truncated(order);
    bp.x = bp.x.truncated(order);
    bp.y = bp.y.truncated(order);
    return bp;
}

template <class S>
std::vector<BranchPoint<S>> branch_points(const TRCurve<S>& c, int order) {
    std::vector<BranchPoint<S>> out;
    for (size_t i = 0; i < c.branch_locations().size(); ++i) out.push_back(c.branch_point(i, order));
    return out;
}

template <class S>
LocalSeries<S> conjugate_local(const TRCurve<S>& c, const S& a, int order) {
    LocalSeries<S> d = conj_from_x(x_at_branch(c.x(), a, order + 2), order);
    return d + LocalSeries<S>::constant(a, LocalSeries<S>::kExact, a);
}

template <class S>
std::vector<LocalSeries<S>> kernel_coefficients(const BranchPoint<S>& bp, int lmax) {
    using L = LocalSeries<S>;
    const L& d = bp.conj;
    L ybar = bp.y.compose(d);
    L ydiff = bp.y - ybar;  // constant terms cancel exactly
    L den = from_int<S>(2) * (ydiff * bp.x.derivative());
    L inv = den.inverse();
    std::vector<L> out;
    L u = L::monomial(1, L::kExact, bp.a);
    L ul = L::constant(from_int<S>(1), L::kExact, bp.a), dl = L::constant(from_int<S>(1), L::kExact, bp.a);
    for (int l = 0; l <= lmax; ++l) {
        out.push_back((ul - dl) * inv);
        ul = ul * u;
        dl = (dl * d).truncated(bp.order + l + 1);
    }
    return out;
}

template <class S>
LocalSeries<S> recursion_kernel(const BranchPoint<S>& bp, const S& z0) {
    using L = LocalSeries<S>;
    S e = z0 - bp.a;
    L first = L({e, from_int<S>(-1)}, 0, bp.order, bp.a).inverse();
    L second = (L::constant(e, L::kExact, bp.a) - bp.conj).inverse();
    L ydiff = bp.y - bp.y.compose(bp.conj);
    L den = from_int<S>(2) * (ydiff * bp.x.derivative());
    return (first - second) * den.inverse();
}

template <class S>
LocalSeries<S> phi_local(const TRCurve<S>& c, const S& a, int order) {
    LocalSeries<S> y = c.y().expand_at(a, order);
    LocalSeries<S> dx = c.x().derivative().expand_at(a, order);
    return (y * dx).integral().truncated(order);
}

#define CHAINTR_INSTANTIATE(S)                                                                    \
    template class TRCurve<S>;                                                                    \
    template std::vector<BranchPoint<S>> branch_points(const TRCurve<S>&, int);                   \
    template LocalSeries<S> conjugate_local(const TRCurve<S>&, const S&, int);                    \
    template std::vector<LocalSeries<S>> kernel_coefficients(const BranchPoint<S>&, int);         \
    template LocalSeries<S> recursion_kernel(const BranchPoint<S>&, const S&);                    \
    template LocalSeries<S> phi_local(const TRCurve<S>&, const S&, int);

CHAINTR_INSTANTIATE(Rational)
CHAINTR_INSTANTIATE(Floating)
CHAINTR_INSTANTIATE(CouplingSeries)

}  // namespace chaintr
