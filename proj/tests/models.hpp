#pragma once

#include "chaintr/model/chain_model.hpp"

// Small models shared by the test binaries.
namespace testmodels {

using chaintr::ChainModel;
using chaintr::Rational;

inline ChainModel gaussian(Rational T = Rational(1)) {
    ChainModel m;
    m.n = 1;
    m.potentials = {{Rational(0), Rational(1)}};
    m.T = T;
    return m;
}

// V = x^2/2 + g4 x^4/4
inline ChainModel quartic(Rational g4, Rational T = Rational(1)) {
    ChainModel m = gaussian(T);
    m.potentials = {{Rational(0), Rational(1), Rational(0), g4}};
    return m;
}

// V = x^2/2 + g3 x^3/3
inline ChainModel cubic(Rational g3, Rational T = Rational(1)) {
    ChainModel m = gaussian(T);
    m.potentials = {{Rational(0), Rational(1), g3}};
    return m;
}

inline ChainModel chain2(Rational c, Rational T = Rational(1)) {
    ChainModel m;
    m.n = 2;
    m.potentials = {{Rational(0), Rational(1)}, {Rational(0), Rational(1)}};
    m.couplings = {c};
    m.T = T;
    return m;
}

}  // namespace testmodels
