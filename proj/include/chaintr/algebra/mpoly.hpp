#pragma once

#include "chaintr/algebra/poly.hpp"
#include "chaintr/algebra/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace chaintr {

// Sparse multivariate polynomial with exact coefficients in nvars variables.
class MPoly {
public:
    using Exponents = std::vector<int>;

    explicit MPoly(int nvars = 0) : nvars_(nvars) {}
    static MPoly constant(int nvars, const Rational& c);
    static MPoly variable(int nvars, int index);  // 0-based

    int nvars() const { return nvars_; }
    const std::map<Exponents, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Rational coeff(const Exponents& e) const;
    int degree_in(int var) const;

    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o) { return *this += -o; }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    friend MPoly operator*(const Rational& s, const MPoly& a);
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.nvars_ == b.nvars_ && a.t_ == b.t_; }

    // p(this) for a univariate polynomial p
    MPoly compose_into(const Poly<Rational>& p) const;
    Rational eval(const std::vector<Rational>& x) const;
    std::string str(const std::vector<std::string>& names) const;

private:
    void add_term(const Exponents& e, const Rational& c);
    int nvars_;
    std::map<Exponents, Rational> t_;
};

}  // namespace chaintr
