#pragma once

#include "chaintr/algebra/mpoly.hpp"
#include "chaintr/algebra/poly.hpp"
#include "chaintr/algebra/ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chaintr {

struct ExternalEigenvalue {
    Rational lambda;
    Rational fraction;  // l_i / N
};

// Chain of n matrices, V_i(x) = sum_k g_k^(i) x^k / k, couplings c_{i,i+1},
// temperature T and an optional external field on the last matrix.
struct ChainModel {
    int n = 1;
    std::vector<std::vector<Rational>> potentials;  // potentials[i-1] = {g_1, ..., g_{d_i+1}}
    std::vector<Rational> couplings;                // c_{i,i+1}, i = 1..n-1
    Rational T{1};
    std::vector<ExternalEigenvalue> external;       // empty: Lambda = 0

    int degree(int i) const;               // d_i
    Rational g(int i, int k) const;        // g_k^(i), zero past the degree
    Rational c(int i) const;               // c_{i,i+1}; c_{0,1} = c_{n,n+1} = 1
    Poly<Rational> vprime(int i) const;    // V_i'(x)
    std::vector<ExternalEigenvalue> eigenvalues() const;  // {(0, 1)} when empty
    int s() const { return static_cast<int>(eigenvalues().size()); }
    bool quadratic() const;                // every d_i == 1

    // Throws SchemaError on a violated invariant. allow_zero_top lets the
    // top coefficient vanish (series layouts that perturb it away from 0).
    void validate(bool allow_zero_top = false) const;
};

// Pole orders of x_k at infinity (r) and at each marked point (s), k = 1..n+1.
struct DivisorProfile {
    int n = 1;
    int sheets = 1;      // number of marked points
    std::vector<int> r;  // r[k], index 0 unused
    std::vector<int> s;  // s[k], index 0 unused
    int D1 = 0, D2 = 0;
};

DivisorProfile divisor_profile(const ChainModel& m);

// f_{i,j}(x_i..x_j) in variables x_1..x_n (MPoly variable k-1 is x_k).
MPoly f_poly(int i, int j, const ChainModel& m);

// x-hat_3..x-hat_{n+1} as polynomials of the given x1, x2 expressions.
std::vector<MPoly> hat_x_sequence(const MPoly& x1, const MPoly& x2, const ChainModel& m);

// A coupling promoted to base + t in the series ring.
struct SeriesParam {
    enum class Kind { g, c, T, lambda, fraction };
    Kind kind = Kind::g;
    int matrix = 1;  // g: matrix index i; c: i of c_{i,i+1}; lambda/fraction: eigenvalue index
    int power = 1;   // g: k of g_k
    int order = 4;   // truncation: known through t^order
    std::string name;
};

// Names: "g<k>_<i>" (g_k^(i)), "c_<i>" (c_{i,i+1}), "T", "lambda_<i>".
SeriesParam parse_series_param(const std::string& name, int order);

// The model with the degree layout extended so the perturbed coefficient exists.
ChainModel series_layout(const ChainModel& m, const SeriesParam& p);

// Model coefficients lifted into a ring.
template <class S>
struct ModelScalars {
    int n = 1;
    std::vector<std::vector<S>> g;  // g[i-1][k-1]
    std::vector<S> c;               // c[i] = c_{i,i+1}, i = 0..n (c[0] = c[n] = 1)
    S T;
    std::vector<S> lambda, fraction;

    int degree(int i) const { return static_cast<int>(g[i - 1].size()) - 1; }
    S gk(int i, int k) const { return k <= static_cast<int>(g[i - 1].size()) ? g[i - 1][k - 1] : from_int<S>(0); }
    Poly<S> vprime(int i) const {
        std::vector<S> p;
        for (const auto& x : g[i - 1]) p.push_back(x);
        return Poly<S>(std::move(p));
    }
    template <class T2, class F>
    ModelScalars<T2> map(F f) const {
        ModelScalars<T2> r;
        r.n = n;
        for (const auto& row : g) {
            r.g.emplace_back();
            for (const auto& x : row) r.g.back().push_back(f(x));
        }
        for (const auto& x : c) r.c.push_back(f(x));
        r.T = f(T);
        for (const auto& x : lambda) r.lambda.push_back(f(x));
        for (const auto& x : fraction) r.fraction.push_back(f(x));
        return r;
    }
};

template <class S>
ModelScalars<S> model_scalars(const ChainModel& m, const std::optional<SeriesParam>& p = std::nullopt);

}  // namespace chaintr
