#pragma once

#include "chaintr/curve/spectral_curve.hpp"
#include "chaintr/recursion/correlators.hpp"

#include <functional>
#include <string>
#include <vector>

namespace chaintr {

// F_g = 1/(2 - 2g) sum_a Res_a omega_{g,1} Phi,  dPhi = -y dx  (g >= 2).
template <class S>
S free_energy(CorrelatorTable<S>& table, int g);

// Connected moments m = (-1)^n Res_inf ... Res_inf prod_j x(z_j)^{p_j} omega_{g,n}.
//  (0,1): omega_{0,1} = W_0 dx with W_0 = V_1'(x) - y; needs vprime.
//  (0,2): the Bergman kernel with its x-plane double pole removed.
template <class S>
S moment(CorrelatorTable<S>& table, int g, const std::vector<int>& powers, const Poly<S>* vprime = nullptr);

// The same extraction for any form with poles at the given branch points.
template <class S>
S form_moment(const OmegaForm<S>& w, const MeroFn<S>& x, const std::vector<S>& branch, const std::vector<int>& powers);

// A parameter of the model to differentiate by:
//   "g<j>_<k>" g_j^(k), "c_<k>" c_{k,k+1}, "lambda_<i>", "T",
//   "t_<a>-t_<b>" with a, b in {inf, 1, 2, ...} (difference of pole residues).
struct VariationParam {
    enum class Kind { g, c, lambda, T, tdiff };
    Kind kind = Kind::g;
    int matrix = 1, power = 1, index = 1;
    int from = 0, to = 0;  // tdiff: 0 = infinity, i = marked point i
    std::string name;
};

VariationParam parse_variation(const std::string& name);

// The variation as a linear functional on dq/(q - a_b)^k (k >= 2), given by branch index and order.
template <class S>
using PoleFunctional = std::function<S(int b, int k)>;

template <class S>
PoleFunctional<S> variation_functional(const SpectralCurve<S>& curve, const std::vector<S>& branch,
                                       const VariationParam& p);

// dF_g: the functional applied to omega_{g,1}.
template <class S>
S vary_free_energy(CorrelatorTable<S>& table, int g, const PoleFunctional<S>& f);

// d omega_{g,n}: the functional applied to the last variable of omega_{g,n+1}.
template <class S>
OmegaForm<S> vary_omega(CorrelatorTable<S>& table, int g, int n, const PoleFunctional<S>& f);

struct SheetSumSample {
    double x = 0;
    std::vector<Floating> preimages;
    Floating sum;
    double scale = 0;  // largest single-sheet magnitude
    bool pass = false;
};

// sum over the D2 + 1 preimages z of x of omega_{h,1}(z)/dx(z); each must vanish (h >= 1).
// Throws ChainError for samples on the cut.
std::vector<SheetSumSample> sheet_sum_check(CorrelatorTable<Floating>& table, int h, const std::vector<double>& xs,
                                            double rel_tol = 1e-8);

}  // namespace chaintr
