#pragma once

#include "chaintr/curve/tr_curve.hpp"
#include "chaintr/model/chain_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chaintr {

enum class Gauge { symmetric, monic };

std::string gauge_name(Gauge g);
Gauge parse_gauge(const std::string& s);

// Genus-zero parametrization of the chain: x_1..x_{n+1} as meromorphic
// functions of z with poles at infinity and at the marked points zeta_i.
template <class S>
struct SpectralCurve {
    ChainModel model;                  // degree layout used for the solve
    ModelScalars<S> scalars;           // coefficients in the ring
    std::optional<SeriesParam> param;  // series ring only
    DivisorProfile profile;
    Gauge gauge = Gauge::monic;
    std::vector<MeroFn<S>> x;          // x[k-1] = x_k, k = 1..n+1
    std::vector<S> zeta;               // marked points, zeta[0] = 0

    const MeroFn<S>& xk(int k) const { return x.at(k - 1); }
    // y = c_{1,2} x_2
    MeroFn<S> y() const { return scalars.c[1] * x.at(1); }
    // The pair (x_1, y) used by the recursion, and the role-swapped pair (x_2, c_{1,2} x_1).
    TRCurve<S> tr_curve() const { return TRCurve<S>(x.at(0), y()); }
    TRCurve<S> swapped_curve() const { return TRCurve<S>(x.at(1), scalars.c[1] * x.at(0)); }
};

}  // namespace chaintr
