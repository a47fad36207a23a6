#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chaintr/model/build_curve.hpp"
#include "chaintr/model/moduli.hpp"
#include "models.hpp"

using namespace chaintr;
using namespace testmodels;
using Q = Rational;

namespace {

Q q(long a, long b = 1) { return Q(a, b); }

double max_residual_f(const SpectralCurve<Floating>& c) {
    double m = 0;
    for (auto& r : curve_equation_residuals(c)) m = std::max(m, std::abs(r));
    return m;
}

}  // namespace

TEST_CASE("divisor profile") {
    auto p = divisor_profile(chain2(q(3, 5)));
    CHECK(p.r[1] == 1);
    CHECK(p.r[3] == 1);
    CHECK(p.s[1] == 1);
    CHECK(p.s[2] == 1);
}

TEST_CASE("gaussian curve") {
    auto c = build_curve<Q>(gaussian());
    CHECK(c.xk(1).poly == Poly<Q>({q(0), q(1)}));
    REQUIRE(c.xk(1).parts.size() == 1);
    CHECK(c.xk(1).parts[0].coeffs[0] == q(1));
    CHECK(c.xk(2).poly == Poly<Q>({q(0), q(1)}));
    for (auto& r : curve_equation_residuals(c)) CHECK(r.is_zero());

    auto f = build_curve<Floating>(gaussian());
    CHECK(std::abs(f.xk(1).poly[1] - 1.0) < 1e-13);
    CHECK(std::abs(f.xk(1).parts[0].coeffs[0] - 1.0) < 1e-13);
    CHECK(max_residual_f(f) < 1e-13);
}

TEST_CASE("quadratic two-matrix chain, symmetric gauge") {
    BuildOptions o;
    o.gauge = Gauge::symmetric;
    auto c = build_curve<Q>(chain2(q(3, 5)), o);
    CHECK(c.xk(1).poly[1] == q(5, 4));
    CHECK(c.xk(1).parts[0].coeffs[0] == q(5, 4));
    CHECK(c.xk(2).poly[1] == q(25, 12));
    CHECK(c.xk(2).parts[0].coeffs[0] == q(3, 4));
    CHECK(c.xk(3).poly == Poly<Q>({q(0), q(4, 3)}));
}

TEST_CASE("exact reconstruction of a quartic curve") {
    // gamma^2 + 3 g4 gamma^4 = T has gamma = 1 at g4 = 1, T = 4
    BuildOptions o;
    o.gauge = Gauge::symmetric;
    auto c = build_curve<Q>(quartic(q(1), q(4)), o);
    CHECK(c.xk(1).poly[1] == q(1));
    for (auto& r : curve_equation_residuals(c)) CHECK(r.is_zero());

    auto f = build_curve<Floating>(quartic(q(1, 10)));
    CHECK(max_residual_f(f) < 1e-12);
    // gamma^2 + 3 g4 gamma^4 = 1
    double g2 = std::norm(f.xk(1).parts[0].coeffs[0]);
    CHECK(std::abs(g2 + 0.3 * g2 * g2 - 1.0) < 1e-12);
}

TEST_CASE("cubic curve has a real solution") {
    auto f = build_curve<Floating>(cubic(q(1, 10)));
    CHECK(max_residual_f(f) < 1e-12);
    for (auto& x : f.xk(1).poly.coeffs()) CHECK(x.imag() == 0.0);
}

TEST_CASE("series ring in T") {
    BuildOptions o;
    o.param = parse_series_param("T", 3);
    auto c = build_curve<CouplingSeries>(gaussian(), o);
    // monic gauge: x_1 = z + T/z
    auto a = c.xk(1).parts[0].coeffs[0];
    CHECK(a.coeff(0) == q(1));
    CHECK(a.coeff(1) == q(1));
    CHECK(a.coeff(2) == q(0));
    CHECK(a.coeff(3) == q(0));
}

TEST_CASE("series ring in a quartic coupling") {
    BuildOptions o;
    o.param = parse_series_param("g4_1", 6);
    auto c = build_curve<CouplingSeries>(gaussian(), o);
    for (auto& r : curve_equation_residuals(c)) CHECK(r.is_zero());
    // float build at small g4 agrees with the truncated series
    auto f = build_curve<Floating>(quartic(q(1, 1000)), BuildOptions{Gauge::monic, std::nullopt, 60});
    auto a = c.xk(1).parts[0].coeffs[0];
    double sum = 0, t = 1e-3;
    for (int k = 0; k <= 6; ++k) sum += a.coeff(k).to_double() * std::pow(t, k);
    CHECK(std::abs(sum - f.xk(1).parts[0].coeffs[0].real()) < 1e-13);
}

TEST_CASE("multi-cut regime fails to converge") {
    ChainModel m = gaussian();
    m.potentials = {{q(0), q(1), q(0), q(-1, 6)}};
    CHECK_THROWS_AS(build_curve<Floating>(m), SolverError);
}

TEST_CASE("external field with two marked points") {
    ChainModel m = gaussian();
    m.external = {{q(1), q(1, 2)}, {q(-1), q(1, 2)}};
    auto f = build_curve<Floating>(m);
    CHECK(max_residual_f(f) < 1e-12);
    CHECK(f.zeta.size() == 2);
}

TEST_CASE("moduli residues, gaussian") {
    auto c = build_curve<Q>(gaussian());
    auto rep = validate_moduli(c);
    for (auto& e : rep.entries) CHECK_MESSAGE(e.pass, e.name);
    CHECK(rep.find("T")->actual == q(1));
    CHECK(rep.find("t_1")->actual == q(-1));
}

TEST_CASE("moduli residues, two-matrix chain") {
    BuildOptions o;
    o.gauge = Gauge::symmetric;
    auto rep = validate_moduli(build_curve<Q>(chain2(q(3, 5)), o));
    for (auto& e : rep.entries) CHECK_MESSAGE(e.pass, e.name);
    CHECK(rep.find("T")->actual == q(1));
    CHECK(rep.find("t_1")->actual == q(-1));
}

TEST_CASE("moduli residues, non-quadratic chains") {
    ChainModel m;
    m.n = 3;
    m.potentials = {{q(0), q(1), q(1, 20)}, {q(1, 10), q(2), q(0), q(1, 30)}, {q(0), q(3, 2), q(-1, 25)}};
    m.couplings = {q(1, 2), q(2, 5)};
    m.external = {{q(1, 3), q(1, 2)}, {q(-1, 2), q(1, 2)}};
    auto f = build_curve<Floating>(m);
    auto rep = validate_moduli(f);
    for (auto& e : rep.entries) CHECK_MESSAGE(e.pass, e.name << " " << e.actual << " vs " << e.expected);
    CHECK(rep.find("g4^(2)@inf") != nullptr);
    CHECK(rep.find("g4^(2)@zeta_2") != nullptr);

    BuildOptions o;
    o.param = parse_series_param("g3_1", 3);
    auto rs = validate_moduli(build_curve<CouplingSeries>(chain2(q(1, 2)), o));
    for (auto& e : rs.entries) CHECK_MESSAGE(e.pass, e.name);
}

TEST_CASE("algebraic equation of the curve") {
    auto E = compute_E0(build_curve<Q>(gaussian()));
    CHECK(E.str("x", "y") == "(1)*y^2 + (-1)*x*y + (1)");
    CHECK(E.deg_x1() == 1);
    CHECK(E.deg_x2() == 2);

    auto c2 = build_curve<Q>(chain2(q(3, 5)));
    auto E2 = compute_E0(c2);
    CHECK(E2.deg_x1() == 2);
    CHECK(E2.deg_x2() == 2);
    for (auto& z : sample_points(c2, 20)) CHECK(E2.eval(c2.xk(1).eval(z), c2.xk(2).eval(z)).is_zero());

    auto f = build_curve<Floating>(quartic(q(1, 10)));
    auto Ef = compute_E0(f);
    CHECK(Ef.deg_x1() == 3);
    CHECK(Ef.deg_x2() == 2);
    for (auto& z : sample_points(f, 20)) CHECK(std::abs(Ef.eval(f.xk(1).eval(z), f.xk(2).eval(z))) < 1e-9);

    BuildOptions o;
    o.param = parse_series_param("T", 2);
    CHECK_THROWS_AS(compute_E0(build_curve<CouplingSeries>(gaussian(), o)), UnsupportedError);
}
