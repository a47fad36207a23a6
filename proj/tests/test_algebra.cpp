#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chaintr/algebra/linalg.hpp"
#include "chaintr/algebra/mero_fn.hpp"

#include <random>

using namespace chaintr;
using Q = Rational;
using LQ = LaurentPoly<Q>;
using RQ = RationalFn<Q>;
using PQ = Poly<Q>;
using LS = LocalSeries<Q>;

namespace {

Q q(long a, long b = 1) { return Q(a, b); }

LQ lp(std::map<int, Q> m) { return LQ(std::move(m)); }

Q random_q(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    return Q(num(rng), den(rng));
}

}  // namespace

TEST_CASE("rational basics and parsing") {
    CHECK(Q::parse("6/-4").str() == "-3/2");
    CHECK(Q::parse("-0.125") == q(-1, 8));
    CHECK(Q::parse("1e-3") == q(1, 1000));
    CHECK(Q::parse("2.5e1") == q(25));
    CHECK_THROWS_AS(Q::parse("1/0"), RingError);
    CHECK_THROWS_AS(Q::parse("abc"), RingError);
    Q r;
    CHECK(q(25, 16).exact_sqrt(r));
    CHECK(r == q(5, 4));
    CHECK_FALSE(q(2).exact_sqrt(r));
    CHECK(reconstruct_rational(0.3125, 100, 1e-12, r));
    CHECK(r == q(5, 16));
}

TEST_CASE("ring axioms on random samples") {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        Q a = random_q(rng), b = random_q(rng), c = random_q(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inverse() == q(1));
    }
    // coupling series ring
    CouplingSeries t = CouplingSeries::parameter(q(0), 4);
    CouplingSeries one_plus_t = CouplingSeries(q(1)) + t;
    CouplingSeries inv = one_plus_t.inverse();
    CHECK(inv * one_plus_t == CouplingSeries(q(1)));
    CHECK(inv.coeff(3) == q(-1));
    CHECK_THROWS_AS(inv.coeff(5), TruncationError);
    // dual numbers carry derivatives
    Dual<Q> x(q(3), q(1));
    Dual<Q> f = x * x * x - Dual<Q>(q(2)) / x;
    CHECK(f.v == q(27) - q(2, 3));
    CHECK(f.d == q(27) + q(2, 9));
}

TEST_CASE("laurent arithmetic") {
    LQ x = lp({{1, q(1)}, {-1, q(1)}});
    CHECK(x.derivative() == lp({{0, q(1)}, {-2, q(-1)}}));
    CHECK(x * x == lp({{2, q(1)}, {0, q(2)}, {-2, q(1)}}));
    LQ x54 = q(5, 4) * x;
    CHECK(x54.compose_into(PQ({q(0), q(1)})) == lp({{1, q(5, 4)}, {-1, q(5, 4)}}));
    // Leibniz on random Laurent polynomials
    std::mt19937 rng(11);
    for (int it = 0; it < 30; ++it) {
        std::map<int, Q> a, b;
        for (int k = -3; k <= 3; ++k) {
            a[k] = random_q(rng);
            b[k] = random_q(rng);
        }
        LQ f(a), g(b);
        CHECK((f * g).derivative() == f * g.derivative() + g * f.derivative());
    }
    // composition with a rational function
    RQ r = RQ::from_laurent(lp({{1, q(1)}}));
    CHECK(x.compose_with(r) == RQ::from_laurent(x));
}

TEST_CASE("local expansions") {
    RQ f(PQ({q(1)}), PQ({q(1), q(-1)}));
    LS s = f.local_expand(Q(0), 3);
    for (int k = 0; k <= 3; ++k) CHECK(s.coeff(k) == q(1));
    CHECK_THROWS_AS(s.coeff(4), TruncationError);

    RQ x = RQ::from_laurent(lp({{1, q(1)}, {-1, q(1)}}));
    LS sx = x.local_expand(Q(1), 3);
    CHECK(sx.coeff(0) == q(2));
    CHECK(sx.coeff(1) == q(0));
    CHECK(sx.coeff(2) == q(1));
    CHECK(sx.coeff(3) == q(-1));

    RQ invz = RQ::from_laurent(lp({{-1, q(1)}}));
    LS si = invz.local_expand(std::nullopt, 2);
    CHECK(si.val() == 1);
    CHECK(si.coeff(1) == q(1));
    CHECK(si.coeff(2) == q(0));

    // pole order recorded as the minimal exponent
    LS sp = RQ(PQ({q(1)}), PQ({q(0), q(0), q(1)})).local_expand(Q(0), 0);
    CHECK(sp.val() == -2);
    CHECK_THROWS_AS(RQ(PQ({q(1)}), PQ({q(0), q(0), q(1)})).local_expand(Q(0), -3), TruncationError);
}

TEST_CASE("residues") {
    RQ f(PQ({q(1)}), PQ({q(-1), q(0), q(1)}));
    CHECK(f.residue(Q(1)) == q(1, 2));
    RQ g(PQ({q(0), q(1)}), PQ({q(4), q(-4), q(1)}));
    CHECK(g.residue(Q(2)) == q(1));
    RQ h = RQ::from_laurent(lp({{1, q(1)}, {-1, q(-1)}}));
    CHECK(h.residue(std::nullopt) == q(1));
    // residue theorem, exact
    std::mt19937 rng(3);
    for (int it = 0; it < 20; ++it) {
        PQ num({random_q(rng), random_q(rng), random_q(rng), random_q(rng)});
        PQ den = PQ::from_roots({q(1), q(-2), q(1, 3)}) * PQ::from_roots({q(1)});
        RQ r(num, den);
        Q total = r.residue(std::nullopt);
        for (const auto& p : r.poles()) total += r.residue(p);
        CHECK(total.is_zero());
    }
}

TEST_CASE("residue theorem in the floating ring") {
    using PF = Poly<Floating>;
    RationalFn<Floating> r(PF({1.0, 2.0, -0.5, 0.25}), PF::from_roots({Floating(1.3), Floating(-0.7), Floating(0.2, 0.9)}));
    Floating total = r.residue(std::nullopt);
    double scale = std::abs(r.residue(std::nullopt));
    for (const auto& p : r.poles()) {
        total += r.residue(p);
        scale = std::max(scale, std::abs(r.residue(p)));
    }
    CHECK(std::abs(total) <= 1e-10 * scale);
}

TEST_CASE("partial fractions") {
    RQ f(PQ({q(1)}), PQ({q(-1), q(0), q(1)}));
    auto pf = f.partial_fractions();
    CHECK(pf.polynomial.is_zero());
    REQUIRE(pf.parts.size() == 2);
    CHECK(pf.parts[0].at == q(1));
    CHECK(pf.parts[0].coeffs[0] == q(1, 2));
    CHECK(pf.parts[1].at == q(-1));
    CHECK(pf.parts[1].coeffs[0] == q(-1, 2));

    RQ g(PQ({q(1), q(0), q(1)}), PQ({q(0), q(1)}));
    auto pg = g.partial_fractions();
    CHECK(pg.polynomial == PQ({q(0), q(1)}));
    REQUIRE(pg.parts.size() == 1);
    CHECK(pg.parts[0].coeffs[0] == q(1));

    RQ h(PQ({q(1)}), PQ::from_roots({q(1), q(1), q(-2)}));
    auto ph = h.partial_fractions();
    CHECK(RQ::from_partial_fractions(ph) == h);
    // 1/((z-1)^2 (z+2)) = (1/9)/(z+2) - (1/9)/(z-1) + (1/3)/(z-1)^2
    for (const auto& part : ph.parts) {
        if (part.at == q(1)) {
            CHECK(part.coeffs[0] == q(-1, 9));
            CHECK(part.coeffs[1] == q(1, 3));
        } else {
            CHECK(part.coeffs[0] == q(1, 9));
        }
    }
    // clustered poles in floating ring
    using PF = Poly<Floating>;
    RationalFn<Floating> c(PF({1.0}), PF::from_roots({Floating(1.0), Floating(1.0 + 1e-9)}));
    CHECK_THROWS_AS(c.partial_fractions(), RingError);
}

TEST_CASE("series solve and reversion") {
    // w^2 = 1 + t
    std::function<LS(const LS&)> F = [](const LS& w) { return w * w - LS({q(1), q(1)}, 0, w.prec()); };
    LS w = series_solve<Q>(F, q(1), 2);
    CHECK(w.coeff(0) == q(1));
    CHECK(w.coeff(1) == q(1, 2));
    CHECK(w.coeff(2) == q(-1, 8));

    LS f({q(1), q(1)}, 1, 10);  // z + z^2
    LS inv = series_reversion(f, 4);
    CHECK(inv.coeff(1) == q(1));
    CHECK(inv.coeff(2) == q(-1));
    CHECK(inv.coeff(3) == q(2));
    CHECK(inv.coeff(4) == q(-5));
    // round trip
    LS inv8 = series_reversion(f, 8);
    LS id = f.compose(inv8);
    CHECK(id.prec() >= 8);
    for (int k = 0; k <= 8; ++k) CHECK(id.coeff(k) == (k == 1 ? q(1) : q(0)));

    std::function<LS(const LS&)> G = [](const LS& w) { return w - LS::constant(q(3), w.prec()); };
    LS c = series_solve<Q>(G, q(3), 5);
    CHECK(c.coeff(0) == q(3));
    for (int k = 1; k <= 5; ++k) CHECK(c.coeff(k) == q(0));

    std::function<LS(const LS&)> H = [](const LS& w) { return w * w; };
    CHECK_THROWS_AS(series_solve<Q>(H, q(0), 3), SingularCurveError);
}

TEST_CASE("polynomial roots") {
    auto r = poly_roots(PQ({q(-1), q(0), q(1)}));
    REQUIRE(r.size() == 2);
    CHECK(r[0] == q(1));
    CHECK(r[1] == q(-1));

    auto s = poly_roots(PQ({q(-25, 16), q(0), q(1)}));
    CHECK(s == std::vector<Q>{q(5, 4), q(-5, 4)});

    CHECK_THROWS_AS(poly_roots(PQ({q(-2), q(0), q(1)})), IrrationalRootError);
    CHECK_THROWS_AS(poly_roots(PQ::from_roots({q(1), q(1)})), MultipleRootError);

    using PF = Poly<Floating>;
    auto f = poly_roots(PF({-0.2, -1.0, 0.0, 1.0}));
    REQUIRE(f.size() == 3);
    // bisection oracle on sign changes of z^3 - z - 1/5
    auto cubic = [](double z) { return z * z * z - z - 0.2; };
    auto bisect = [&](double lo, double hi) {
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            ((cubic(lo) < 0) == (cubic(mid) < 0) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    CHECK(std::abs(f[0] - bisect(1.0, 1.5)) < 1e-12);
    CHECK(std::abs(f[1] - bisect(-0.5, 0.0)) < 1e-12);
    CHECK(std::abs(f[2] - bisect(-1.0, -0.5)) < 1e-12);
    CHECK(f[0].real() == doctest::Approx(1.0878).epsilon(5e-4));
    CHECK(f[1].real() == doctest::Approx(-0.2091).epsilon(5e-4));
    CHECK(f[2].real() == doctest::Approx(-0.8787).epsilon(5e-4));
    CHECK(std::abs(f[0] + f[1] + f[2]) < 1e-12);
    CHECK_THROWS_AS(poly_roots(PF::from_roots({Floating(0.5), Floating(0.5 + 1e-10)})), MultipleRootError);

    // series ring: roots of z^2 - (1 + t) lift the roots at t = 0
    CouplingSeries t = CouplingSeries::parameter(q(1), 3);
    Poly<CouplingSeries> ps({-t, CouplingSeries(0), CouplingSeries(1)});
    auto rs = poly_roots(ps);
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].coeff(0) == q(1));
    CHECK(rs[0].coeff(1) == q(1, 2));
    CHECK(rs[0].coeff(2) == q(-1, 8));
    CHECK(rs[0] * rs[0] == t);
}

TEST_CASE("meromorphic functions expand consistently") {
    MeroFn<Q> x;
    x.poly = PQ({q(1), q(2)});
    x.parts.push_back({q(0), {q(3), q(1, 2)}});
    x.parts.push_back({q(2), {q(-1)}});
    RQ xr = x.to_rational_fn();
    for (Q p : {q(1), q(-3, 2), q(5)}) {
        CHECK(x.eval(p) == xr.eval(p));
        LS a = x.expand_at(p, 6), b = xr.local_expand(p, 6);
        for (int k = 0; k <= 6; ++k) CHECK(a.coeff(k) == b.coeff(k));
    }
    LS ai = x.expand_at_infinity(5), bi = xr.local_expand(std::nullopt, 5);
    for (int k = -1; k <= 5; ++k) CHECK(ai.coeff(k) == bi.coeff(k));
    LS a0 = x.expand_at_part(0, 4), b0 = xr.local_expand(q(0), 4);
    for (int k = -2; k <= 4; ++k) CHECK(a0.coeff(k) == b0.coeff(k));
    CHECK(x.derivative().to_rational_fn() == xr.derivative());
}

TEST_CASE("exact nullspace") {
    Matrix<Q> A{{q(1), q(2), q(3)}, {q(2), q(4), q(6)}};
    auto ns = nullspace_exact(A, 3);
    CHECK(ns.size() == 2);
    for (const auto& v : ns) CHECK(v[0] + q(2) * v[1] + q(3) * v[2] == q(0));
}
