#include "chaintr/algebra/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chaintr {

namespace {

// One Laguerre root of a (coefficients low to high), starting from x.
Floating laguerre(const std::vector<Floating>& a, Floating x) {
    const int m = static_cast<int>(a.size()) - 1;
    static const double frac[] = {0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
    const int mt = 10, maxit = mt * 8;
    for (int iter = 1; iter <= maxit; ++iter) {
        Floating b = a[m], d = 0.0, f = 0.0;
        double err = std::abs(b), abx = std::abs(x);
        for (int j = m - 1; j >= 0; --j) {
            f = x * f + d;
            d = x * d + b;
            b = x * b + a[j];
            err = std::abs(b) + abx * err;
        }
        err *= std::numeric_limits<double>::epsilon();
        if (std::abs(b) <= err) return x;
        Floating g = d / b, g2 = g * g, h = g2 - 2.0 * f / b;
        Floating sq = std::sqrt(static_cast<double>(m - 1) * (static_cast<double>(m) * h - g2));
        Floating gp = g + sq, gm = g - sq;
        double abp = std::abs(gp), abm = std::abs(gm);
        if (abp < abm) gp = gm;
        Floating dx = std::max(abp, abm) > 0.0 ? static_cast<double>(m) / gp
                                                : std::polar(1.0 + abx, static_cast<double>(iter));
        Floating x1 = x - dx;
        if (x == x1) return x;
        if (iter % mt != 0) x = x1;
        else x -= frac[iter / mt] * dx;
    }
    return x;
}

bool root_order(const Floating& a, const Floating& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

}  // namespace

std::vector<Floating> complex_roots(const Poly<Floating>& p) {
    int n = p.degree();
    if (n < 1) return {};
    std::vector<Floating> a = p.coeffs(), ad = a, roots;
    for (int j = n; j >= 1; --j) {
        Floating x = laguerre(ad, Floating(0.0));
        // deflate
        Floating b = ad[j];
        std::vector<Floating> nd(j);
        for (int jj = j - 1; jj >= 0; --jj) {
            nd[jj] = b;
            b = x * b + ad[jj];
        }
        ad = std::move(nd);
        roots.push_back(x);
    }
    for (auto& r : roots) r = laguerre(a, r);
    // snap tiny imaginary parts for real polynomials
    bool real_poly = std::all_of(a.begin(), a.end(), [](const Floating& c) { return c.imag() == 0.0; });
    if (real_poly)
        for (auto& r : roots)
            if (std::fabs(r.imag()) <= 1e-14 * std::max(1.0, std::abs(r))) r = {r.real(), 0.0};
    std::sort(roots.begin(), roots.end(), root_order);
    return roots;
}

double root_separation(const std::vector<Floating>& roots) {
    double sep = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j) {
            double scale = std::max({1.0, std::abs(roots[i]), std::abs(roots[j])});
            sep = std::min(sep, std::abs(roots[i] - roots[j]) / scale);
        }
    return sep;
}

template <class S>
std::vector<Floating> approx_roots(const Poly<S>& p) {
    std::vector<Floating> c;
    for (const auto& x : p.coeffs()) c.push_back(Ring<S>::approx(x));
    return complex_roots(Poly<Floating>(std::move(c)));
}

template <>
std::vector<Floating> poly_roots(const Poly<Floating>& p) {
    auto roots = complex_roots(p);
    if (roots.size() > 1 && root_separation(roots) < std::sqrt(floating_eps()))
        throw MultipleRootError("roots closer than sqrt(eps)");
    return roots;
}

template <>
std::vector<Rational> poly_roots(const Poly<Rational>& p) {
    if (p.degree() < 1) return {};
    auto g = Poly<Rational>::gcd(p, p.derivative());
    if (g.degree() > 0) throw MultipleRootError("repeated rational factor");
    // denominators of rational roots divide the leading coefficient of the integer form
    mpz_class lcm_den = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.den().get_mpz_t());
    mpz_class lead = abs((p.lead() * Rational(mpz_class(lcm_den))).num());
    long max_den = lead.fits_slong_p() ? std::max(1L, lead.get_si()) : std::numeric_limits<long>::max();
    auto approx = approx_roots(p);
    std::vector<Rational> out;
    Poly<Rational> rest = p;
    for (const auto& a : approx) {
        if (std::fabs(a.imag()) > 1e-6 * std::max(1.0, std::abs(a))) continue;
        Rational r;
        if (!reconstruct_rational(a.real(), max_den, 1e-9, r)) continue;
        if (!rest.eval(r).is_zero()) continue;
        out.push_back(r);
        rest = Poly<Rational>::divmod(rest, Poly<Rational>({-r, Rational(1)})).first;
    }
    if (rest.degree() > 0) throw IrrationalRootError("polynomial has non-rational roots");
    std::sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) { return a > b; });
    return out;
}

template <>
std::vector<CouplingSeries> poly_roots(const Poly<CouplingSeries>& p) {
    if (p.degree() < 1) return {};
    std::vector<Rational> base;
    for (const auto& c : p.coeffs()) base.push_back(c.coeff(0));
    Poly<Rational> p0(base);
    if (p0.degree() != p.degree())
        throw RingError("root count changes at the expansion point of the series ring");
    int prec = CouplingSeries::kExact;
    for (const auto& c : p.coeffs()) prec = std::min(prec, c.prec());
    auto r0 = poly_roots(p0);
    auto dp = p.derivative();
    std::vector<CouplingSeries> out;
    for (const auto& r : r0) {
        CouplingSeries x(r);
        // Newton doubles the number of correct orders each step
        int steps = 2;
        for (int known = 1; known <= prec && known < CouplingSeries::kExact; known *= 2) ++steps;
        for (int it = 0; it < steps; ++it) x = x - p.eval(x) / dp.eval(x);
        out.push_back(x);
    }
    return out;
}

template std::vector<Floating> approx_roots(const Poly<Rational>&);
template std::vector<Floating> approx_roots(const Poly<Floating>&);
template std::vector<Floating> approx_roots(const Poly<CouplingSeries>&);

}  // namespace chaintr
