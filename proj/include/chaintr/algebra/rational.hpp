#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>

namespace chaintr {

// Reduced arbitrary-precision rational with positive denominator.
// Thin wrapper over mpq_class so expression templates never leak out.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT: implicit on purpose
    Rational(int v) : q_(static_cast<long>(v)) {}
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rational(const mpz_class& z) : q_(z) {}

    // "p/q", "p", or a decimal such as "-0.125" or "1e-3"; exact.
    static Rational parse(const std::string& s);
    // Exact value of a finite double.
    static Rational from_double(double d);

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    double to_double() const { return q_.get_d(); }
    std::string str() const;  // "p/q" or "p"

    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }
    bool is_integer() const { return q_.get_den() == 1; }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    Rational inverse() const;
    Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    Rational pow(int e) const;

    // Square root when both numerator and denominator are perfect squares.
    bool exact_sqrt(Rational& out) const;

private:
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Continued-fraction reconstruction of x with denominator at most max_den.
// Returns false when no convergent reproduces x within tol.
bool reconstruct_rational(double x, long max_den, double tol, Rational& out);

}  // namespace chaintr
