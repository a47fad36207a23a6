#pragma once

#include "chaintr/curve/tr_curve.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace chaintr {

constexpr int kMaxArity = 12;

// One variable's pole: (branch index, order) packed as (b << 8) | k.
struct OmegaKey {
    std::uint8_t n = 0;
    std::array<std::uint16_t, kMaxArity> v{};

    static std::uint16_t pack(int b, int k) { return static_cast<std::uint16_t>((b << 8) | k); }
    int branch(int j) const { return v[j] >> 8; }
    int order(int j) const { return v[j] & 0xff; }
    friend bool operator<(const OmegaKey& a, const OmegaKey& b) {
        if (a.n != b.n) return a.n < b.n;
        return a.v < b.v;
    }
    friend bool operator==(const OmegaKey& a, const OmegaKey& b) { return a.n == b.n && a.v == b.v; }
};

// omega_{g,n}(z_1..z_n) = sum_key C_key prod_j dz_j / (z_j - a_{b_j})^{k_j}
// (2g - 2 + n > 0: every pole sits at a branch point and has order >= 2).
template <class S>
struct OmegaForm {
    int g = 0, n = 0;
    std::map<OmegaKey, S> terms;

    S eval(const std::vector<S>& z, const std::vector<S>& branch) const;
    int max_order() const;
};

struct SymmetryReport {
    int g = 0, n = 0;
    size_t terms = 0;
    bool symmetric = true;        // exact rings: coefficient equality on every orbit
    double max_asymmetry = 0.0;   // float ring: largest relative spread, before averaging
    bool residue_free = true;     // no simple poles in any variable
    int max_order = 0;            // largest pole order over all variables
    bool order_bound = true;      // max_order <= 6g - 4 + 2n
};

// The table of correlators omega_{g,n} for one curve (x, y), built by the
// residue recursion at the branch points of x
//   omega_{g,n+1}(z0, J) = - sum_a Res_{z->a} K(z0, z) [ omega_{g-1,n+2}(z, zbar, J)
//                          + sum' omega_{h,|I|+1}(z, I) omega_{g-h,|J\I|+1}(zbar, J\I) ]
//   K(z0, z) = (1/2) (1/(z0 - z) - 1/(z0 - zbar)) / ((y(z) - y(zbar)) dx(z)),
// the primed sum skipping the two terms that contain omega_{0,1}.
// Every entry is symmetrized and checked when it is built.
template <class S>
class CorrelatorTable {
public:
    // Local series are carried to an order sized for genus <= gmax, arity <= nmax.
    CorrelatorTable(TRCurve<S> curve, int gmax, int nmax);

    const TRCurve<S>& curve() const { return curve_; }
    const std::vector<BranchPoint<S>>& branch_points() const { return bps_; }
    std::vector<S> branch_locations() const;
    int order() const { return order_; }

    // 2g - 2 + n > 0
    const OmegaForm<S>& omega(int g, int n);
    const std::vector<SymmetryReport>& reports() const { return reports_; }

    struct Impl;

private:
    TRCurve<S> curve_;
    int gmax_, nmax_, order_;
    std::vector<BranchPoint<S>> bps_;
    std::map<std::pair<int, int>, OmegaForm<S>> cache_;
    std::vector<SymmetryReport> reports_;
    std::shared_ptr<Impl> impl_;
};

}  // namespace chaintr
