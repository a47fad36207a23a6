#pragma once

#include "chaintr/curve/spectral_curve.hpp"

#include <string>
#include <vector>

namespace chaintr {

template <class S>
struct ModuliEntry {
    std::string name;  // e.g. "T", "t_1", "g3^(2)@inf"
    S expected, actual;
    bool pass = false;
};

template <class S>
struct ModuliReport {
    std::vector<ModuliEntry<S>> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    const ModuliEntry<S>* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

// Recompute the model data from residues on the curve:
//   T         = Res_inf c12 x2 dx1
//   t_i       = Res_{zeta_i} c12 x2 dx1 = -T l_i, and T + sum t_i = 0
//   g_j^(1)   = -c12 Res_inf x1^-j x2 dx1
//   g_j^(k)   = -(1/r_k) c_{k,k+1} Res_inf x_k^-j x_{k+1} dx_k
//             = -(1/s_k) c_{k-1,k} Res_{zeta_i} x_k^-j x_{k-1} dx_k   (k >= 2, j >= 3)
//   lambda_i  = x_{n+1}(zeta_i),  Res_{zeta_i} x_n dx_{n+1} = T l_i
// plus the constraint equations at sample points and the pole orders.
// Exact rings compare exactly; floats to 1e-10 relative.
template <class S>
ModuliReport<S> validate_moduli(const SpectralCurve<S>& curve);

// Points where the chain constraints are sampled (away from the marked points).
template <class S>
std::vector<S> sample_points(const SpectralCurve<S>& curve, int count);

// Bivariate polynomial sum c[a][b] x1^a x2^b.
template <class S>
struct Bivariate {
    std::vector<std::vector<S>> c;
    int deg_x1() const;
    int deg_x2() const;
    S eval(const S& x1, const S& x2) const;
    std::string str(const std::string& v1 = "x1", const std::string& v2 = "x2") const;
};

// The algebraic equation E(x1, x2) = 0 satisfied by the curve, with
// deg_x1 = d1 + D1 and deg_x2 = 1 + D2, normalized so the x2^(1+D2)
// coefficient is 1. Rational and float rings only.
template <class S>
Bivariate<S> compute_E0(const SpectralCurve<S>& curve);

}  // namespace chaintr
