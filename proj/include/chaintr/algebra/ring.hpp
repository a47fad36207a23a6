#pragma once

#include "chaintr/algebra/coupling_series.hpp"
#include "chaintr/algebra/rational.hpp"
#include "chaintr/errors.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>

namespace chaintr {

// Floating ring. Complex so that complex branch points are representable.
using Floating = std::complex<double>;

// Global zero tolerance of the floating ring.
double& floating_eps();

enum class RingKind { rational, floating, series };

// Forward-mode dual number, used for exact Newton Jacobians.
template <class S>
struct Dual {
    S v{}, d{};
    Dual() = default;
    Dual(const S& value) : v(value) {}  // NOLINT
    Dual(const S& value, const S& deriv) : v(value), d(deriv) {}
    Dual operator-() const { return {-v, -d}; }
    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) {
        S inv = S(1) / o.v;
        d = (d - v * o.d * inv) * inv;
        v *= inv;
        return *this;
    }
    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
    friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
};

template <class S>
struct Ring;

template <>
struct Ring<Rational> {
    static constexpr RingKind kind = RingKind::rational;
    static constexpr bool exact = true;
    static std::string name() { return "rational"; }
    static Rational from_rational(const Rational& r) { return r; }
    static bool is_exact_zero(const Rational& a) { return a.is_zero(); }
    static bool is_zero(const Rational& a) { return a.is_zero(); }
    static bool is_invertible(const Rational& a) { return !a.is_zero(); }
    static double magnitude(const Rational& a) { return std::fabs(a.to_double()); }
    static Rational inv(const Rational& a) { return a.inverse(); }
    static std::optional<Rational> sqrt(const Rational& a) {
        Rational r;
        if (a.exact_sqrt(r)) return r;
        return std::nullopt;
    }
    static std::string to_string(const Rational& a) { return a.str(); }
    static Floating approx(const Rational& a) { return {a.to_double(), 0.0}; }
    static Rational real_part(const Rational& a) { return a; }
    // leading (t^0) value as an exact rational
    static Rational base(const Rational& a) { return a; }
};

template <>
struct Ring<Floating> {
    static constexpr RingKind kind = RingKind::floating;
    static constexpr bool exact = false;
    static std::string name() { return "float"; }
    static Floating from_rational(const Rational& r) { return {r.to_double(), 0.0}; }
    static bool is_exact_zero(const Floating& a) { return a == Floating(0.0); }
    static bool is_zero(const Floating& a) { return std::abs(a) <= floating_eps(); }
    static bool is_invertible(const Floating& a) { return a != Floating(0.0); }
    static double magnitude(const Floating& a) { return std::abs(a); }
    static Floating inv(const Floating& a) {
        if (a == Floating(0.0)) throw RingError("inverse of zero");
        return 1.0 / a;
    }
    static std::optional<Floating> sqrt(const Floating& a) { return std::sqrt(a); }
    static std::string to_string(const Floating& a) {
        std::ostringstream os;
        os.precision(17);
        if (a.imag() == 0.0) os << a.real();
        else os << a.real() << (a.imag() < 0 ? "-" : "+") << std::fabs(a.imag()) << "i";
        return os.str();
    }
    static Floating approx(const Floating& a) { return a; }
    static Floating real_part(const Floating& a) { return {a.real(), 0.0}; }
    static Rational base(const Floating& a) { return Rational::from_double(a.real()); }
};

template <>
struct Ring<CouplingSeries> {
    static constexpr RingKind kind = RingKind::series;
    static constexpr bool exact = true;
    static std::string name() { return "series"; }
    static CouplingSeries from_rational(const Rational& r) { return CouplingSeries(r); }
    static bool is_exact_zero(const CouplingSeries& a) { return a.is_zero(); }
    static bool is_zero(const CouplingSeries& a) { return a.is_zero(); }
    static bool is_invertible(const CouplingSeries& a) { return !a.coeffs().empty() && !a.coeffs()[0].is_zero(); }
    static double magnitude(const CouplingSeries& a) { return a.magnitude(); }
    static CouplingSeries inv(const CouplingSeries& a) { return a.inverse(); }
    static std::optional<CouplingSeries> sqrt(const CouplingSeries& a) {
        CouplingSeries r;
        if (a.sqrt(r)) return r;
        return std::nullopt;
    }
    static std::string to_string(const CouplingSeries& a) { return a.str(); }
    static Floating approx(const CouplingSeries& a) { return {a.coeff(0).to_double(), 0.0}; }
    static CouplingSeries real_part(const CouplingSeries& a) { return a; }
    static Rational base(const CouplingSeries& a) { return a.coeff(0); }
};

template <class S>
struct Ring<Dual<S>> {
    using B = Ring<S>;
    static constexpr RingKind kind = B::kind;
    static constexpr bool exact = B::exact;
    static std::string name() { return "dual-" + B::name(); }
    static Dual<S> from_rational(const Rational& r) { return Dual<S>(B::from_rational(r)); }
    static bool is_exact_zero(const Dual<S>& a) { return B::is_exact_zero(a.v) && B::is_exact_zero(a.d); }
    static bool is_zero(const Dual<S>& a) { return B::is_zero(a.v) && B::is_zero(a.d); }
    static bool is_invertible(const Dual<S>& a) { return B::is_invertible(a.v); }
    static double magnitude(const Dual<S>& a) { return B::magnitude(a.v); }
    static Dual<S> inv(const Dual<S>& a) { return Dual<S>(B::from_rational(Rational(1))) / a; }
    static std::optional<Dual<S>> sqrt(const Dual<S>& a) {
        auto r = B::sqrt(a.v);
        if (!r || !B::is_invertible(*r)) return std::nullopt;
        return Dual<S>(*r, a.d / (B::from_rational(Rational(2)) * *r));
    }
    static std::string to_string(const Dual<S>& a) { return B::to_string(a.v) + " + eps*" + B::to_string(a.d); }
    static Floating approx(const Dual<S>& a) { return B::approx(a.v); }
    static Dual<S> real_part(const Dual<S>& a) { return Dual<S>(B::real_part(a.v), B::real_part(a.d)); }
    static Rational base(const Dual<S>& a) { return B::base(a.v); }
};

template <class S>
S from_int(long k) {
    return Ring<S>::from_rational(Rational(k));
}

template <class S>
S from_q(const Rational& q) {
    return Ring<S>::from_rational(q);
}

// integer power by repeated squaring
template <class S>
S ipow(S base, int e) {
    if (e < 0) return ipow(Ring<S>::inv(base), -e);
    S out = from_int<S>(1);
    while (e) {
        if (e & 1) out = out * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return out;
}

}  // namespace chaintr
