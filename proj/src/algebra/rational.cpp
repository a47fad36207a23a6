#include "chaintr/algebra/rational.hpp"

#include "chaintr/errors.hpp"

#include <cmath>
#include <ostream>

namespace chaintr {

Rational::Rational(long num, long den) {
    if (den == 0) throw RingError("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw RingError("division by zero rational");
    q_ /= o.q_;
    return *this;
}

Rational Rational::inverse() const {
    if (is_zero()) throw RingError("inverse of zero");
    return Rational(mpq_class(1 / q_));
}

Rational Rational::pow(int e) const {
    Rational base = e < 0 ? inverse() : *this;
    unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
    Rational out(1);
    while (n) {
        if (n & 1u) out *= base;
        base *= base;
        n >>= 1u;
    }
    return out;
}

bool Rational::exact_sqrt(Rational& out) const {
    if (sign() < 0) return false;
    mpz_class n = num(), d = den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    out = Rational(mpq_class(rn, rd));
    return true;
}

std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

namespace {

mpz_class pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

bool parse_integer(const std::string& s, mpz_class& out) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') return false;
    out = mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
    return true;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class n, d;
        if (!parse_integer(s.substr(0, slash), n) || !parse_integer(s.substr(slash + 1), d) || d == 0)
            throw RingError("bad rational literal '" + text + "'");
        mpq_class q(n, d);
        q.canonicalize();
        return Rational(q);
    }
    // decimal with optional exponent
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    std::string mant = s;
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        try {
            exp10 = std::stol(s.substr(epos + 1));
        } catch (...) {
            throw RingError("bad rational literal '" + text + "'");
        }
    }
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        std::string frac = mant.substr(dot + 1);
        mant = mant.substr(0, dot) + frac;
        exp10 -= static_cast<long>(frac.size());
        if (mant == "-" || mant == "+" || mant.empty()) throw RingError("bad rational literal '" + text + "'");
    }
    mpz_class n;
    if (!parse_integer(mant, n)) throw RingError("bad rational literal '" + text + "'");
    mpq_class q(n);
    if (exp10 > 0) q *= pow10(static_cast<unsigned long>(exp10));
    if (exp10 < 0) q /= pow10(static_cast<unsigned long>(-exp10));
    q.canonicalize();
    return Rational(q);
}

Rational Rational::from_double(double d) {
    if (!std::isfinite(d)) throw RingError("non-finite double");
    mpq_class q(d);
    q.canonicalize();
    return Rational(q);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

bool reconstruct_rational(double x, long max_den, double tol, Rational& out) {
    if (!std::isfinite(x)) return false;
    // convergents h/k of the continued fraction of x
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        if (std::fabs(a) > 1e15) break;
        mpz_class ai(static_cast<long>(a));
        mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        mpq_class cand(h1, k1);
        cand.canonicalize();
        if (std::fabs(cand.get_d() - x) <= tol * std::max(1.0, std::fabs(x))) {
            out = Rational(cand);
            return true;
        }
        double f = r - a;
        if (f == 0.0) break;
        r = 1.0 / f;
    }
    return false;
}

}  // namespace chaintr
