#pragma once

#include "chaintr/algebra/mero_fn.hpp"

#include <optional>
#include <vector>

namespace chaintr {

// Local data at a simple branch point a of x, in u = z - a.
template <class S>
struct BranchPoint {
    S a;
    int order = 0;          // every series below is known through u^order
    LocalSeries<S> x;       // x(a+u), linear term exactly zero
    LocalSeries<S> y;       // y(a+u)
    LocalSeries<S> conj;    // delta(u) = zbar(a+u) - a
    LocalSeries<S> phi;     // primitive of y x' with phi(0) = 0
};

// A genus-zero curve read as the pair (x(z), y(z)) on the sphere.
// Branch points are the finite zeros of dx; they must be simple and dy must not vanish there.
template <class S>
class TRCurve {
public:
    TRCurve(MeroFn<S> x, MeroFn<S> y);

    const MeroFn<S>& x() const { return x_; }
    const MeroFn<S>& y() const { return y_; }

    // x'(z) times prod (z - p)^(m+1) over the finite poles p of order m.
    Poly<S> branch_polynomial() const;
    const std::vector<S>& branch_locations() const { return branch_; }
    BranchPoint<S> branch_point(size_t i, int order) const;

private:
    MeroFn<S> x_, y_;
    std::vector<S> branch_;
};

// All branch points with local data known through the given order.
template <class S>
std::vector<BranchPoint<S>> branch_points(const TRCurve<S>& c, int order);

// zbar(z) near a as a series in u = z - a: a + delta(u).
template <class S>
LocalSeries<S> conjugate_local(const TRCurve<S>& c, const S& a, int order);

// Genus-zero Bergman kernel density 1/(z1 - z2)^2.
template <class S>
S bergman(const S& z1, const S& z2) {
    S d = z1 - z2;
    return Ring<S>::inv(d * d);
}

// kappa[l](u) = (u^l - delta^l) / (2 (y(a+u) - y(a+delta)) x'(a+u)), l = 0..lmax.
// The recursion kernel is sum_l kappa[l](u) / (z0 - a)^(l+1).
template <class S>
std::vector<LocalSeries<S>> kernel_coefficients(const BranchPoint<S>& bp, int lmax);

// The recursion kernel at a fixed z0, as a series in u:
// (1/2)(1/(z0 - z) - 1/(z0 - zbar)) / ((y(z) - y(zbar)) x'(z)).
template <class S>
LocalSeries<S> recursion_kernel(const BranchPoint<S>& bp, const S& z0);

// Local primitive of y dx at a.
template <class S>
LocalSeries<S> phi_local(const TRCurve<S>& c, const S& a, int order);

}  // namespace chaintr
