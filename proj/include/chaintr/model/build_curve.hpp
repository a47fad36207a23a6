#pragma once

#include "chaintr/curve/spectral_curve.hpp"

#include <optional>

namespace chaintr {

struct BuildOptions {
    std::optional<Gauge> gauge;          // default: symmetric (float), monic (exact rings)
    std::optional<SeriesParam> param;    // series ring only
    int max_newton = 60;
};

// Solve the constraint system for the genus-zero parametrization.
//  float:    Newton from the closed-form Gaussian seed with a homotopy in the
//            non-quadratic couplings; SolverError when no real solution is reached.
//  rational: quadratic chains in closed form; otherwise a float solve followed
//            by rational reconstruction and exact verification.
//  series:   exact solution at t = 0, then Newton iteration in the series ring.
template <class S>
SpectralCurve<S> build_curve(const ChainModel& model, const BuildOptions& opts = {});

// Residuals of the constraint system at the curve's own coefficients
// (zero for an exact solution); exposed for diagnostics and tests.
template <class S>
std::vector<S> curve_equation_residuals(const SpectralCurve<S>& c);

}  // namespace chaintr
