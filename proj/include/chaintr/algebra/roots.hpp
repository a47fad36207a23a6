#pragma once

#include "chaintr/algebra/poly.hpp"

#include <vector>

namespace chaintr {

// All complex roots of a floating polynomial (Laguerre with deflation, then
// polishing against the undeflated polynomial). No multiplicity checks.
std::vector<Floating> complex_roots(const Poly<Floating>& p);

// Smallest pairwise distance between roots relative to their scale.
double root_separation(const std::vector<Floating>& roots);

// Simple roots of p.
//  float: Laguerre; MultipleRootError when two roots are closer than sqrt(eps)*scale.
//  rational: exact rational roots; IrrationalRootError if some root is not rational.
//  series: exact roots of the t = 0 polynomial, lifted by Newton iteration.
// Roots are ordered by decreasing real part, then decreasing imaginary part.
template <class S>
std::vector<S> poly_roots(const Poly<S>& p);

// Roots of p(z) = 0 in the floating ring even if p has exact coefficients.
template <class S>
std::vector<Floating> approx_roots(const Poly<S>& p);

}  // namespace chaintr
