#include "chaintr/model/moduli.hpp"

#include "chaintr/algebra/linalg.hpp"

#include <sstream>

namespace chaintr {

namespace {

template <class S>
bool matches(const S& expected, const S& actual) {
    if constexpr (Ring<S>::kind == RingKind::floating) {
        return std::abs(expected - actual) <= 1e-10 * std::max(1.0, std::abs(expected));
    } else {
        return (expected - actual) == from_int<S>(0);
    }
}

template <class S>
struct Checker {
    ModuliReport<S> report;
    void add(const std::string& name, const S& expected, const S& actual) {
        report.entries.push_back({name, expected, actual, matches(expected, actual)});
    }
};

template <class S>
LocalSeries<S> near(const SpectralCurve<S>& c, const MeroFn<S>& f, size_t i, int order) {
    if (i < f.parts.size()) return f.expand_at_part(i, order);
    return f.expand_at(c.zeta[i], order);
}

template <class S>
LocalSeries<S> compose_poly(const Poly<S>& p, const LocalSeries<S>& x) {
    using L = LocalSeries<S>;
    L acc({}, 0, L::kExact, x.point());
    for (int k = p.degree(); k >= 0; --k) acc = acc * x + L::constant(p[k], L::kExact, x.point());
    return acc;
}

}  // namespace

template <class S>
std::vector<S> sample_points(const SpectralCurve<S>& curve, int count) {
    std::vector<S> pts;
    for (int k = 0; static_cast<int>(pts.size()) < count; ++k) {
        // spread over several radii and both half planes; a fixed sequence keeps reports reproducible
        Rational re((k % 7) - 3, 2), im(((k * 5) % 11) - 5, 3);
        S z = from_q<S>(re + Rational(1, 7));
        if constexpr (Ring<S>::kind == RingKind::floating) z += Floating(0.0, im.to_double());
        bool ok = true;
        for (const auto& zeta : curve.zeta) ok = ok && Ring<S>::magnitude(z - zeta) > 1e-3;
        if (ok) pts.push_back(z);
    }
    return pts;
}

template <class S>
ModuliReport<S> validate_moduli(const SpectralCurve<S>& curve) {
    using R = Ring<S>;
    const auto& M = curve.scalars;
    const auto& P = curve.profile;
    const int n = M.n;
    Checker<S> ck;

    int maxd = 1, maxr = 1, maxs = 1;
    for (int k = 1; k <= n; ++k) maxd = std::max(maxd, M.degree(k));
    for (int k = 1; k <= n + 1; ++k) {
        maxr = std::max(maxr, P.r[k]);
        maxs = std::max(maxs, P.s[k]);
    }
    const int pinf = (maxd + 3) * maxr * (maxd + 2) + 8;
    const int pz = (maxd + 3) * maxs * (maxd + 2) + 8;

    std::vector<LocalSeries<S>> xi, dxi;
    for (int k = 1; k <= n + 1; ++k) {
        xi.push_back(curve.xk(k).expand_at_infinity(pinf));
        dxi.push_back(curve.xk(k).derivative().expand_at_infinity(pinf));
    }
    const S c12 = M.c[1];

    S T = (c12 * xi[1] * dxi[0]).residue();
    ck.add("T", M.T, T);
    S total = T;
    for (int i = 0; i < P.sheets; ++i) {
        auto x2 = near(curve, curve.xk(2), i, pz);
        auto dx1 = near(curve, curve.xk(1).derivative(), i, pz);
        S t = (c12 * x2 * dx1).residue();
        total += t;
        ck.add("t_" + std::to_string(i + 1), -(M.T * M.fraction[i]), t);
    }
    ck.add("sum_t", from_int<S>(0), total);

    // -T/x1 leading term of c12 x2 - V1'(x1)
    auto w = (c12 * xi[1] - compose_poly(M.vprime(1), xi[0])) * xi[0];
    ck.add("W0_leading", -M.T, w.coeff(0));

    for (int j = 1; j <= M.degree(1) + 1; ++j) {
        S v = -(c12 * (xi[0].inverse().pow(j) * xi[1] * dxi[0]).residue());
        ck.add("g" + std::to_string(j) + "^(1)", M.gk(1, j), v);
    }
    for (int k = 2; k <= n; ++k) {
        S inv_r = R::inv(from_int<S>(P.r[k])), inv_s = R::inv(from_int<S>(P.s[k]));
        for (int j = 3; j <= M.degree(k) + 1; ++j) {
            std::string tag = "g" + std::to_string(j) + "^(" + std::to_string(k) + ")";
            S v = -(inv_r * M.c[k] * (xi[k - 1].inverse().pow(j) * xi[k] * dxi[k - 1]).residue());
            ck.add(tag + "@inf", M.gk(k, j), v);
            for (int i = 0; i < P.sheets; ++i) {
                auto xk = near(curve, curve.xk(k), i, pz);
                auto xkm = near(curve, curve.xk(k - 1), i, pz);
                auto dxk = near(curve, curve.xk(k).derivative(), i, pz);
                S u = -(inv_s * M.c[k - 1] * (xk.inverse().pow(j) * xkm * dxk).residue());
                ck.add(tag + "@zeta_" + std::to_string(i + 1), M.gk(k, j), u);
            }
        }
    }
    for (int i = 0; i < P.sheets; ++i) {
        std::string id = std::to_string(i + 1);
        ck.add("lambda_" + id, M.lambda[i], curve.xk(n + 1).eval(curve.zeta[i]));
        auto xn = near(curve, curve.xk(n), i, pz);
        auto xn1 = curve.xk(n + 1).expand_at(curve.zeta[i], pz);
        auto dxn1 = curve.xk(n + 1).derivative().expand_at(curve.zeta[i], pz);
        ck.add("Tl_" + id, M.T * M.fraction[i], (xn * dxn1).residue());
        ck.add("lambdaTl_" + id, M.lambda[i] * M.T * M.fraction[i], (xn1 * xn * dxn1).residue());
    }

    // constraints at sample points
    auto pts = sample_points(curve, 20);
    for (int k = 2; k <= n; ++k) {
        S worst = from_int<S>(0);
        double wm = -1;
        for (const auto& z : pts) {
            S e = M.vprime(k).eval(curve.xk(k).eval(z)) - M.c[k - 1] * curve.xk(k - 1).eval(z) -
                  M.c[k] * curve.xk(k + 1).eval(z);
            if (R::magnitude(e) > wm) {
                wm = R::magnitude(e);
                worst = e;
            }
        }
        ck.add("constraint_" + std::to_string(k), from_int<S>(0), worst);
    }

    // pole orders against the divisor profile
    for (int k = 1; k <= n + 1; ++k) {
        bool ok = curve.xk(k).order_at_infinity() == P.r[k] && !R::is_zero(curve.xk(k).poly[P.r[k]]);
        for (int i = 0; i < P.sheets; ++i) {
            int o = i < static_cast<int>(curve.xk(k).parts.size()) ? curve.xk(k).order_at_part(i) : 0;
            ok = ok && o == P.s[k];
            if (ok && o > 0) ok = !R::is_zero(curve.xk(k).parts[i].coeffs[o - 1]);
        }
        S one = from_int<S>(1);
        ck.add("poles_x" + std::to_string(k), one, ok ? one : from_int<S>(0));
    }
    return ck.report;
}

template <class S>
int Bivariate<S>::deg_x1() const {
    int d = -1;
    for (size_t a = 0; a < c.size(); ++a)
        for (const auto& v : c[a])
            if (!Ring<S>::is_zero(v)) d = std::max(d, static_cast<int>(a));
    return d;
}

template <class S>
int Bivariate<S>::deg_x2() const {
    int d = -1;
    for (const auto& row : c)
        for (size_t b = 0; b < row.size(); ++b)
            if (!Ring<S>::is_zero(row[b])) d = std::max(d, static_cast<int>(b));
    return d;
}

template <class S>
S Bivariate<S>::eval(const S& x1, const S& x2) const {
    S acc = from_int<S>(0), p1 = from_int<S>(1);
    for (const auto& row : c) {
        S inner = from_int<S>(0);
        for (size_t b = row.size(); b-- > 0;) inner = inner * x2 + row[b];
        acc += p1 * inner;
        p1 = p1 * x1;
    }
    return acc;
}

template <class S>
std::string Bivariate<S>::str(const std::string& v1, const std::string& v2) const {
    std::ostringstream os;
    bool first = true;
    for (size_t b = c.empty() ? 0 : c[0].size(); b-- > 0;)
        for (size_t a = c.size(); a-- > 0;) {
            if (Ring<S>::is_zero(c[a][b])) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << Ring<S>::to_string(c[a][b]) << ")";
            if (a) os << "*" << v1 << (a > 1 ? "^" + std::to_string(a) : "");
            if (b) os << "*" << v2 << (b > 1 ? "^" + std::to_string(b) : "");
        }
    return first ? "0" : os.str();
}

template <class S>
Bivariate<S> compute_E0(const SpectralCurve<S>& curve) {
    using R = Ring<S>;
    if constexpr (R::kind == RingKind::series) {
        throw UnsupportedError("compute_E0 needs the rational or float ring");
    } else {
        const auto& P = curve.profile;
        const int da = curve.scalars.degree(1) + P.D1, db = 1 + P.D2;
        const int ncols = (da + 1) * (db + 1);
        // E(x1(z), x2(z)) has at most 2 da db poles in total; more zeros than that force it to vanish.
        const int nrows = R::exact ? 4 * da * db + 2 * ncols + 1 : 3 * ncols;
        std::vector<S> pts;
        for (int k = 0; static_cast<int>(pts.size()) < nrows; ++k) {
            S z;
            if constexpr (R::exact) {
                z = from_q<S>(Rational(k + 2, 3 + (k % 5)) * Rational((k % 2) ? -1 : 1));
            } else {
                double th = 2.399963229728653 * k, rad = 0.6 + 0.9 * ((k * 37) % 17) / 17.0;
                z = std::polar(rad, th);
            }
            bool ok = true;
            for (const auto& zeta : curve.zeta) ok = ok && R::magnitude(z - zeta) > 1e-2;
            for (const auto& p : pts) ok = ok && !(R::is_exact_zero(p - z));
            if (ok) pts.push_back(z);
        }
        Matrix<S> A;
        double scale = 1;
        for (const auto& z : pts) {
            S x1 = curve.xk(1).eval(z), x2 = curve.xk(2).eval(z);
            std::vector<S> row;
            S p1 = from_int<S>(1);
            for (int a = 0; a <= da; ++a) {
                S p2 = p1;
                for (int b = 0; b <= db; ++b) {
                    row.push_back(p2);
                    p2 = p2 * x2;
                }
                p1 = p1 * x1;
            }
            if constexpr (!R::exact) {
                // row scaling keeps the SVD well conditioned
                double m = 0;
                for (auto& v : row) m = std::max(m, std::abs(v));
                for (auto& v : row) v /= m;
                scale = std::max(scale, m);
            }
            A.push_back(std::move(row));
        }
        std::vector<std::vector<S>> basis;
        if constexpr (R::exact) basis = nullspace_exact(A, ncols);
        else basis = nullspace_svd(A, ncols, 1e-9);
        if (basis.size() != 1)
            throw SingularCurveError("spectral curve interpolation has nullity " + std::to_string(basis.size()) +
                                     " (degenerate curve)");
        const auto& v = basis[0];
        S lead = v[db];  // x1^0 x2^db
        if (R::is_zero(lead)) throw SingularCurveError("spectral curve lacks its top x2 power");
        S inv = R::inv(lead);
        Bivariate<S> E;
        E.c.assign(da + 1, std::vector<S>(db + 1, from_int<S>(0)));
        for (int a = 0; a <= da; ++a)
            for (int b = 0; b <= db; ++b) {
                S x = v[a * (db + 1) + b] * inv;
                if constexpr (!R::exact)
                    if (std::abs(x) < 1e-12) x = 0;
                E.c[a][b] = x;
            }
        (void)scale;
        return E;
    }
}

#define CHAINTR_INSTANTIATE(S)                                                        \
    template ModuliReport<S> validate_moduli(const SpectralCurve<S>&);                \
    template std::vector<S> sample_points(const SpectralCurve<S>&, int);              \
    template struct Bivariate<S>;                                                     \
    template Bivariate<S> compute_E0(const SpectralCurve<S>&);

CHAINTR_INSTANTIATE(Rational)
CHAINTR_INSTANTIATE(Floating)
CHAINTR_INSTANTIATE(CouplingSeries)

}  // namespace chaintr
