#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chaintr/model/build_curve.hpp"
#include "models.hpp"

using namespace chaintr;
using namespace testmodels;
using Q = Rational;
using LQ = LocalSeries<Q>;

namespace {

Q q(long a, long b = 1) { return Q(a, b); }

MeroFn<Q> joukowski() {
    MeroFn<Q> x;
    x.poly = Poly<Q>({q(0), q(1)});
    x.parts = {{q(0), {q(1)}}};
    return x;
}

MeroFn<Q> ident() {
    MeroFn<Q> y;
    y.poly = Poly<Q>({q(0), q(1)});
    return y;
}

// z^3 - z - 1/5 on [lo, hi] by bisection
double bisect(double lo, double hi) {
    auto f = [](double z) { return z * z * z - z - 0.2; };
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (lo + hi);
        if ((f(lo) < 0) == (f(m) < 0)) lo = m;
        else hi = m;
    }
    return 0.5 * (lo + hi);
}

double eval_series(const LQ& s, double u) {
    double acc = 0;
    for (int k = s.val(); k <= s.prec(); ++k) acc += s.coeff(k).to_double() * std::pow(u, k);
    return acc;
}

}  // namespace

TEST_CASE("branch points") {
    TRCurve<Q> c(joukowski(), ident());
    REQUIRE(c.branch_locations().size() == 2);
    CHECK(c.branch_locations()[0] == q(1));
    CHECK(c.branch_locations()[1] == q(-1));

    auto scaled = q(5, 4) * joukowski();
    TRCurve<Q> c2(scaled, ident());
    CHECK(c2.branch_locations() == std::vector<Q>{q(1), q(-1)});

    MeroFn<Floating> x;
    x.poly = Poly<Floating>({0.0, 1.0});
    x.parts = {{0.0, {1.0, 0.1}}};
    MeroFn<Floating> y;
    y.poly = Poly<Floating>({0.0, 1.0});
    TRCurve<Floating> c3(x, y);
    auto b = c3.branch_locations();
    REQUIRE(b.size() == 3);
    double want[3] = {bisect(1, 2), bisect(-0.5, -0.1), bisect(-1, -0.5)};
    std::sort(want, want + 3, std::greater<>());
    for (int i = 0; i < 3; ++i) CHECK(std::abs(b[i] - want[i]) < 1e-12);
    CHECK(std::abs(b[0] - 1.0878) < 5e-4);
    CHECK(std::abs(b[1] + 0.2091) < 5e-4);
    CHECK(std::abs(b[2] + 0.8787) < 5e-4);
    CHECK(std::abs(b[0] + b[1] + b[2]) < 1e-12);
}

TEST_CASE("branch point count on built curves") {
    auto g = build_curve<Floating>(gaussian());
    CHECK(g.tr_curve().branch_locations().size() == 2);
    BuildOptions o;
    o.gauge = Gauge::symmetric;
    auto c = build_curve<Q>(chain2(q(3, 5)), o);
    CHECK(c.tr_curve().branch_locations() == std::vector<Q>{q(1), q(-1)});
    // two marked points, s_1 = 1: x_1 has degree 3, four simple branch points
    ChainModel m = gaussian();
    m.external = {{q(3), q(1, 2)}, {q(-3), q(1, 2)}};
    auto e = build_curve<Floating>(m);
    CHECK(e.tr_curve().branch_locations().size() == 4);
    // eigenvalues at +-1 sit exactly at the merging point of the two cuts
    m.external = {{q(1), q(1, 2)}, {q(-1), q(1, 2)}};
    CHECK_THROWS_AS(build_curve<Floating>(m).tr_curve(), SingularCurveError);
}

TEST_CASE("singular curves are rejected") {
    MeroFn<Q> x;  // x = z^3/3 - z^2/2 has dx = z (z - 1): fine; z^3 has a double zero
    x.poly = Poly<Q>({q(0), q(0), q(0), q(1)});
    CHECK_THROWS_AS(TRCurve<Q>(x, ident()), SingularCurveError);
    // dy vanishing at a branch point
    MeroFn<Q> y;
    y.poly = Poly<Q>({q(0), q(-2), q(1)});  // y' = 2z - 2 vanishes at z = 1
    CHECK_THROWS_AS(TRCurve<Q>(joukowski(), y), SingularCurveError);
}

TEST_CASE("conjugation") {
    TRCurve<Q> c(joukowski(), ident());
    auto zb = conjugate_local(c, q(1), 6);
    for (int k = 0; k <= 6; ++k) CHECK(zb.coeff(k) == q(k % 2 ? -1 : 1));
    auto zm = conjugate_local(c, q(-1), 6);
    // 1/z about -1: -1 - u - u^2 - ...
    for (int k = 0; k <= 6; ++k) CHECK(zm.coeff(k) == q(-1));

    MeroFn<Floating> xf;
    xf.poly = Poly<Floating>({0.0, 1.0});
    xf.parts = {{0.0, {1.0, 0.1}}};
    MeroFn<Floating> yf;
    yf.poly = Poly<Floating>({0.0, 1.0});
    TRCurve<Floating> cf(xf, yf);
    for (const auto& bp : branch_points(cf, 10)) {
        const auto& d = bp.conj;
        CHECK(std::abs(d.coeff(0)) == 0.0);
        CHECK(std::abs(d.coeff(1) + 1.0) < 1e-12);
        CHECK(std::abs(d.coeff(2) + bp.x.coeff(3) / bp.x.coeff(2)) < 1e-12);
        // x(zbar) = x(z)
        // coefficients grow like R^-k (R: distance to the nearest singularity), so compare relatively
        auto diff = bp.x.compose(d) - bp.x;
        double scale = 1;
        for (int k = 0; k <= 10; ++k) {
            scale = std::max({scale, std::abs(bp.x.coeff(k)), std::abs(d.coeff(k))});
            CHECK(std::abs(diff.coeff(k)) < 1e-12 * scale);
        }
        // involution
        auto dd = d.compose(d);
        CHECK(std::abs(dd.coeff(1) - 1.0) < 1e-12);
        for (int k = 2; k <= 10; ++k) CHECK(std::abs(dd.coeff(k)) < 1e-12 * scale);
    }
}

TEST_CASE("bergman kernel") {
    CHECK(bergman(q(2), q(3)) == q(1));
    CHECK(bergman(q(5), q(7)) == bergman(q(7), q(5)));
    // no residue: Laurent expansion in z2 about z1 has only the double pole
    MeroFn<Q> b;
    b.parts = {{q(3), {q(0), q(1)}}};
    CHECK(b.expand_at_part(0, 3).residue() == q(0));
}

TEST_CASE("recursion kernel on the gaussian curve") {
    TRCurve<Q> c(joukowski(), ident());
    auto bp = c.branch_point(0, 10);
    Q z0 = q(3);
    auto K = recursion_kernel(bp, z0);
    // direct: (1/2)(1/(z0-z) - 1/(z0-1/z)) / ((z - 1/z)(1 - 1/z^2)) at z = 1 + u
    for (Q u : {q(1, 50), q(-1, 70)}) {
        Q z = q(1) + u;
        Q direct = q(1, 2) * ((z0 - z).inverse() - (z0 - z.inverse()).inverse()) /
                   ((z - z.inverse()) * (q(1) - (z * z).inverse()));
        Q series = q(0), pw = u.pow(K.val());
        for (int k = K.val(); k <= K.prec(); ++k) {
            series += K.coeff(k) * pw;
            pw *= u;
        }
        CHECK(std::abs((series - direct).to_double()) < 1e-12);
    }
    // sum over l of kappa_l / (z0 - a)^(l+1) reproduces the kernel
    auto kap = kernel_coefficients(bp, 14);
    for (int k = K.val(); k <= 3; ++k) {
        Q acc = q(0);
        for (int l = 0; l <= 14; ++l) acc += kap[l].coeff(k) * (z0 - bp.a).inverse().pow(l + 1);
        CHECK(std::abs((acc - K.coeff(k)).to_double()) < 1e-6);
    }
    // as a 1/dz density the kernel is invariant under z <-> zbar: K(zbar) = K(z) zbar'(z)
    for (double u : {0.02, -0.015}) {
        double ub = eval_series(bp.conj, u), dub = eval_series(bp.conj.derivative(), u);
        CHECK(std::abs(eval_series(K, ub) - eval_series(K, u) * dub) < 1e-9);
    }
}

TEST_CASE("local primitive") {
    TRCurve<Q> c(joukowski(), ident());
    auto phi = phi_local(c, q(1), 6);
    CHECK(phi.coeff(0) == q(0));
    CHECK(phi.coeff(1) == q(0));
    CHECK(phi.coeff(2) == q(1));
    CHECK(phi.coeff(3) == q(-1, 3));
    CHECK(phi.coeff(4) == q(1, 4));
    auto dphi = phi.derivative();
    auto ydx = c.y().expand_at(q(1), 6) * c.x().derivative().expand_at(q(1), 6);
    for (int k = 0; k <= 5; ++k) CHECK(dphi.coeff(k) == ydx.coeff(k));
}
