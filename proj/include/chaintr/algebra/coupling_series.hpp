#pragma once

#include "chaintr/algebra/rational.hpp"

#include <string>
#include <vector>

namespace chaintr {

// Truncated power series in one formal coupling t with exact coefficients.
// Known through t^prec; O(t^(prec+1)). Exact constants carry prec = kExact.
class CouplingSeries {
public:
    static constexpr int kExact = 1 << 28;

    CouplingSeries() = default;
    CouplingSeries(const Rational& c) : c_{c} { trim(); }  // NOLINT
    CouplingSeries(long c) : CouplingSeries(Rational(c)) {}  // NOLINT
    CouplingSeries(std::vector<Rational> coeffs, int prec);

    // base + t with truncation prec.
    static CouplingSeries parameter(const Rational& base, int prec);

    int prec() const { return prec_; }
    const Rational& operator[](int k) const;  // throws past prec
    Rational coeff(int k) const;               // same, by value
    const std::vector<Rational>& coeffs() const { return c_; }
    int valuation() const;  // kExact when zero

    CouplingSeries operator-() const;
    CouplingSeries& operator+=(const CouplingSeries& o);
    CouplingSeries& operator-=(const CouplingSeries& o);
    CouplingSeries& operator*=(const CouplingSeries& o);
    CouplingSeries& operator/=(const CouplingSeries& o) { return *this *= o.inverse(); }
    friend CouplingSeries operator+(CouplingSeries a, const CouplingSeries& b) { return a += b; }
    friend CouplingSeries operator-(CouplingSeries a, const CouplingSeries& b) { return a -= b; }
    friend CouplingSeries operator*(CouplingSeries a, const CouplingSeries& b) { return a *= b; }
    friend CouplingSeries operator/(CouplingSeries a, const CouplingSeries& b) { return a /= b; }
    // equality on the commonly known coefficients
    friend bool operator==(const CouplingSeries& a, const CouplingSeries& b);

    CouplingSeries inverse() const;
    bool is_zero() const;
    bool sqrt(CouplingSeries& out) const;
    double magnitude() const;
    std::string str(const std::string& var = "t") const;

private:
    void trim();
    std::vector<Rational> c_;
    int prec_ = kExact;
};

}  // namespace chaintr
