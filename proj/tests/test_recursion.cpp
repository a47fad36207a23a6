#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chaintr/model/build_curve.hpp"
#include "chaintr/recursion/observables.hpp"
#include "models.hpp"

#include <cmath>

using namespace chaintr;
using namespace testmodels;
using Q = Rational;

namespace {

Q q(long a, long b = 1) { return Q(a, b); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double F2(const ChainModel& m) {
    auto c = build_curve<Floating>(m);
    CorrelatorTable<Floating> t(c.tr_curve(), 2, 1);
    return free_energy(t, 2).real();
}

// x = z + 7/z - 3/z^2: dx vanishes at z = 1, 2, -3.
TRCurve<Q> three_branch_curve() {
    MeroFn<Q> x, y;
    x.poly = Poly<Q>({q(0), q(1)});
    x.parts = {{q(0), {q(7), q(-3)}}};
    y.poly = Poly<Q>({q(0), q(1)});
    return TRCurve<Q>(x, y);
}

}  // namespace

TEST_CASE("Gaussian moments, all genera") {
    auto c = build_curve<Q>(gaussian());
    CorrelatorTable<Q> t(c.tr_curve(), 2, 3);
    auto vp = c.scalars.vprime(1);
    const long planar[] = {1, 2, 5, 14, 42};
    for (int i = 0; i < 5; ++i) CHECK(moment(t, 0, {2 * i + 2}, &vp) == q(planar[i]));
    CHECK(moment(t, 1, {4}) == q(1));
    CHECK(moment(t, 1, {6}) == q(10));
    CHECK(moment(t, 1, {8}) == q(70));
    CHECK(moment(t, 2, {8}) == q(21));
    CHECK(moment(t, 0, {1, 1}) == q(1));
    CHECK(moment(t, 0, {2, 2}) == q(2));
    CHECK(moment(t, 0, {2, 2, 2}) == q(8));
    CHECK(moment(t, 1, {2, 2}) == q(0));
    CHECK_THROWS_AS(moment(t, 0, {2}), UnsupportedError);
}

TEST_CASE("Gaussian free energies and homogeneity") {
    auto c = build_curve<Q>(gaussian());
    CorrelatorTable<Q> t(c.tr_curve(), 3, 1);
    CHECK(free_energy(t, 2) == q(-1, 240));
    CHECK(free_energy(t, 3) == q(1, 1008));

    // F_g scales as T^(2 - 2g)
    auto c4 = build_curve<Q>(gaussian(q(4)));
    CorrelatorTable<Q> t4(c4.tr_curve(), 3, 1);
    CHECK(free_energy(t4, 2) == q(-1, 240 * 16));
    CHECK(free_energy(t4, 3) == q(1, 1008 * 256));
    CHECK_THROWS_AS(build_curve<Q>(gaussian(q(2))).tr_curve(), IrrationalRootError);

    auto f = build_curve<Floating>(gaussian());
    CorrelatorTable<Floating> tf(f.tr_curve(), 2, 1);
    CHECK(std::abs(free_energy(tf, 2) + 1.0 / 240) < 1e-14);
    auto f2 = build_curve<Floating>(gaussian(q(2)));
    CorrelatorTable<Floating> tf2(f2.tr_curve(), 2, 1);
    CHECK(std::abs(free_energy(tf2, 2) + 1.0 / 960) < 1e-14);
}

TEST_CASE("symmetry, residues and pole orders") {
    auto check_all = [](const auto& reports) {
        for (const auto& r : reports) {
            INFO("(g,n) = (" << r.g << "," << r.n << ")");
            CHECK(r.symmetric);
            CHECK(r.residue_free);
            CHECK(r.order_bound);
        }
    };
    SUBCASE("Gaussian") {
        CorrelatorTable<Q> t(build_curve<Q>(gaussian()).tr_curve(), 2, 6);
        for (int g = 0; g <= 2; ++g)
            for (int n = 1; 2 * g - 2 + n <= 4; ++n)
                if (2 * g - 2 + n > 0) t.omega(g, n);
        check_all(t.reports());
        CHECK(t.reports().size() == 10);
    }
    SUBCASE("three branch points") {
        CorrelatorTable<Q> t(three_branch_curve(), 2, 4);
        CHECK(t.branch_points().size() == 3);
        t.omega(2, 1);
        t.omega(1, 3);
        t.omega(0, 5);
        check_all(t.reports());
        CHECK(t.omega(0, 3).max_order() == 2);
    }
    SUBCASE("floating chain") {
        ChainModel ch = chain2(q(1, 2), q(1, 2));
        ch.potentials = {{q(0), q(1), q(0), q(1, 20)}, {q(0), q(1), q(1, 30), q(1, 25)}};
        CorrelatorTable<Floating> t(build_curve<Floating>(ch).tr_curve(), 1, 3);
        t.omega(1, 2);
        t.omega(0, 4);
        for (const auto& r : t.reports()) CHECK(r.max_asymmetry < 1e-10);
        check_all(t.reports());
    }
}

TEST_CASE("quadratic chain has the Gaussian F2; role swap") {
    auto c = build_curve<Q>(chain2(q(3, 5)));
    CorrelatorTable<Q> t(c.tr_curve(), 2, 1);
    CHECK(free_energy(t, 2) == q(-1, 240));

    ChainModel ch = chain2(q(1, 2));
    ch.potentials = {{q(0), q(1), q(0), q(1, 10)}, {q(0), q(1), q(0), q(1, 15)}};
    auto f = build_curve<Floating>(ch);
    CorrelatorTable<Floating> a(f.tr_curve(), 2, 1);
    CorrelatorTable<Floating> b(f.swapped_curve(), 2, 1);
    double fa = free_energy(a, 2).real(), fb = free_energy(b, 2).real();
    CHECK(rel(fb, fa) < 1e-10);
}

TEST_CASE("parse_variation") {
    auto p = parse_variation("g6_1");
    CHECK(p.kind == VariationParam::Kind::g);
    CHECK(p.power == 6);
    CHECK(p.matrix == 1);
    CHECK(parse_variation("c_2").kind == VariationParam::Kind::c);
    CHECK(parse_variation("lambda_3").index == 3);
    CHECK(parse_variation("T").kind == VariationParam::Kind::T);
    auto d = parse_variation("t_inf-t_2");
    CHECK(d.kind == VariationParam::Kind::tdiff);
    CHECK(d.from == 0);
    CHECK(d.to == 2);
    CHECK_THROWS_AS(parse_variation("g_1"), SchemaError);
    CHECK_THROWS_AS(parse_variation("x"), SchemaError);
}

TEST_CASE("exact variations at the Gaussian point") {
    auto c = build_curve<Q>(gaussian());
    CorrelatorTable<Q> t(c.tr_curve(), 2, 2);
    auto br = t.branch_locations();
    // dF_g/dg_j = -<tr M^j>_g / j
    CHECK(vary_free_energy(t, 2, variation_functional(c, br, parse_variation("g4_1"))) == q(0));
    CHECK(vary_free_energy(t, 2, variation_functional(c, br, parse_variation("g8_1"))) == q(-21, 8));
    // F_2 = -1/(240 T^2)
    CHECK(vary_free_energy(t, 2, variation_functional(c, br, parse_variation("T"))) == q(1, 120));
}

TEST_CASE("variations against finite differences") {
    const double h = 1e-3;
    auto compare = [&](const ChainModel& m, const std::string& name, auto bump, double tol) {
        auto c = build_curve<Floating>(m);
        CorrelatorTable<Floating> t(c.tr_curve(), 2, 2);
        double res = vary_free_energy(t, 2, variation_functional(c, t.branch_locations(), parse_variation(name))).real();
        auto shifted = [&](double s) {
            ChainModel mm = m;
            bump(mm, Q::from_double(s));
            return F2(mm);
        };
        // five-point stencil
        double fd = (8 * (shifted(h) - shifted(-h)) - (shifted(2 * h) - shifted(-2 * h))) / (12 * h);
        INFO(name << ": residue " << res << " finite difference " << fd);
        // F_2 carries ~1e-13 of round-off, i.e. ~1e-10 in the difference quotient
        CHECK(std::abs(res - fd) < tol * std::abs(fd) + 1e-9);
    };
    ChainModel m = quartic(q(1, 20), q(1, 2));
    m.external = {{q(3), q(1, 3)}, {q(-2), q(2, 3)}};
    compare(m, "T", [](ChainModel& mm, Q s) { mm.T += s; }, 1e-6);
    compare(m, "lambda_1", [](ChainModel& mm, Q s) { mm.external[0].lambda += s; }, 1e-6);
    compare(m, "g4_1", [](ChainModel& mm, Q s) { mm.potentials[0][3] += s; }, 1e-6);

    ChainModel ch = chain2(q(1, 2), q(1, 2));
    ch.potentials = {{q(0), q(1), q(0), q(1, 20)}, {q(0), q(1), q(1, 30), q(1, 25)}};
    ch.external = {{q(1, 2), q(1, 2)}, {q(-3, 2), q(1, 2)}};
    compare(ch, "c_1", [](ChainModel& mm, Q s) { mm.couplings[0] += s; }, 1e-6);
    compare(ch, "g4_2", [](ChainModel& mm, Q s) { mm.potentials[1][3] += s; }, 1e-6);
    compare(ch, "g3_2", [](ChainModel& mm, Q s) { mm.potentials[1][2] += s; }, 1e-6);
    // t_i = -T l_i: moving weight from point 2 to point 1
    compare(ch, "t_1-t_2", [](ChainModel& mm, Q s) {
        mm.external[0].fraction -= s / mm.T;
        mm.external[1].fraction += s / mm.T;
    }, 1e-6);
}

TEST_CASE("loop insertion on omega_{1,1}") {
    const double h = 1e-4;
    ChainModel m = quartic(q(1, 20), q(1, 5));
    auto m1 = [&](const ChainModel& mm) {
        auto c = build_curve<Floating>(mm);
        CorrelatorTable<Floating> t(c.tr_curve(), 1, 1);
        return moment(t, 1, {4}).real();
    };
    auto c = build_curve<Floating>(m);
    CorrelatorTable<Floating> t(c.tr_curve(), 1, 2);
    auto br = t.branch_locations();
    auto dw = vary_omega(t, 1, 1, variation_functional(c, br, parse_variation("g4_1")));
    CHECK(dw.g == 1);
    CHECK(dw.n == 1);
    double res = form_moment(dw, t.curve().x(), br, {4}).real();
    ChainModel up = m, dn = m;
    up.potentials[0][3] += Q::from_double(h);
    dn.potentials[0][3] -= Q::from_double(h);
    double fd = (m1(up) - m1(dn)) / (2 * h);
    INFO("residue " << res << " finite difference " << fd);
    CHECK(rel(res, fd) < 1e-6);
}

TEST_CASE("sheet sums") {
    auto c = build_curve<Floating>(gaussian());
    CorrelatorTable<Floating> t(c.tr_curve(), 2, 1);
    const std::vector<double> xs = {2.5, -3.0, 4.0, 7.5, -11.0};
    for (int h : {1, 2}) {
        auto samples = sheet_sum_check(t, h, xs);
        REQUIRE(samples.size() == xs.size());
        for (const auto& s : samples) {
            CHECK(s.preimages.size() == 2);
            CHECK(s.pass);
            CHECK(std::abs(s.sum) <= 1e-8 * s.scale);
        }
    }
    CHECK_THROWS_AS(sheet_sum_check(t, 1, {0.5}), ChainError);
    CHECK_THROWS_AS(sheet_sum_check(t, 0, {3.0}), ChainError);

    ChainModel ch = chain2(q(1, 2));
    ch.potentials = {{q(0), q(1), q(0), q(1, 10)}, {q(0), q(1), q(0), q(1, 15)}};
    auto f = build_curve<Floating>(ch);
    CorrelatorTable<Floating> tc(f.tr_curve(), 1, 1);
    for (const auto& s : sheet_sum_check(tc, 1, {5.0, -6.0, 9.0})) {
        CHECK(s.preimages.size() == static_cast<size_t>(f.profile.D2 + 1));
        CHECK(s.pass);
    }
}

TEST_CASE("series ring in T") {
    BuildOptions o;
    o.param = parse_series_param("T", 4);
    auto c = build_curve<CouplingSeries>(gaussian(), o);
    CorrelatorTable<CouplingSeries> t(c.tr_curve(), 2, 1);
    auto f = free_energy(t, 2);
    // -1 / (240 (1 + t)^2)
    CHECK(f.coeff(0) == q(-1, 240));
    CHECK(f.coeff(1) == q(1, 120));
    CHECK(f.coeff(2) == q(-1, 80));
    CHECK(f.coeff(3) == q(1, 60));
}
