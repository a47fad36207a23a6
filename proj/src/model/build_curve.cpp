#include "chaintr/model/build_curve.hpp"

#include "chaintr/algebra/linalg.hpp"

#include <cmath>

namespace chaintr {

std::string gauge_name(Gauge g) { return g == Gauge::symmetric ? "symmetric" : "monic"; }

Gauge parse_gauge(const std::string& s) {
    if (s == "symmetric") return Gauge::symmetric;
    if (s == "monic") return Gauge::monic;
    throw SchemaError("unknown gauge '" + s + "'");
}

namespace {

// Position of every unknown in the flat vector.
struct Layout {
    int n = 1, s = 1;
    std::vector<int> r, sk;
    std::vector<int> a_off;               // a_off[k]: z^0 coefficient of x_k
    std::vector<std::vector<int>> c_off;  // c_off[k][i]: 1/(z-zeta_i) coefficient of x_k
    int zeta_off = 0;                     // zeta_2..zeta_s
    int size = 0;

    explicit Layout(const DivisorProfile& p) : n(p.n), s(p.sheets), r(p.r), sk(p.s) {
        a_off.assign(n + 2, 0);
        c_off.assign(n + 2, std::vector<int>(s, 0));
        int off = 0;
        for (int k = 1; k <= n + 1; ++k) {
            a_off[k] = off;
            off += r[k] + 1;
        }
        for (int k = 1; k <= n; ++k)
            for (int i = 0; i < s; ++i) {
                c_off[k][i] = off;
                off += sk[k];
            }
        zeta_off = off;
        off += s - 1;
        size = off;
    }
};

template <class T>
struct Unpacked {
    std::vector<MeroFn<T>> x;  // index k-1
    std::vector<T> zeta;
};

template <class T>
Unpacked<T> unpack(const std::vector<T>& v, const Layout& L) {
    Unpacked<T> u;
    u.zeta.push_back(from_int<T>(0));
    for (int i = 1; i < L.s; ++i) u.zeta.push_back(v[L.zeta_off + i - 1]);
    for (int k = 1; k <= L.n + 1; ++k) {
        MeroFn<T> f;
        std::vector<T> a(v.begin() + L.a_off[k], v.begin() + L.a_off[k] + L.r[k] + 1);
        f.poly = Poly<T>(std::move(a));
        if (k <= L.n)
            for (int i = 0; i < L.s; ++i) {
                std::vector<T> c(v.begin() + L.c_off[k][i], v.begin() + L.c_off[k][i] + L.sk[k]);
                f.parts.push_back({u.zeta[i], std::move(c)});
            }
        u.x.push_back(std::move(f));
    }
    return u;
}

template <class T>
std::vector<T> pack(const Unpacked<T>& u, const Layout& L) {
    std::vector<T> v(L.size, from_int<T>(0));
    for (int k = 1; k <= L.n + 1; ++k) {
        const auto& f = u.x[k - 1];
        for (int e = 0; e <= L.r[k]; ++e) v[L.a_off[k] + e] = f.poly[e];
        if (k <= L.n)
            for (int i = 0; i < L.s; ++i)
                for (int m = 0; m < L.sk[k]; ++m)
                    v[L.c_off[k][i] + m] = m < static_cast<int>(f.parts[i].coeffs.size()) ? f.parts[i].coeffs[m]
                                                                                          : from_int<T>(0);
    }
    for (int i = 1; i < L.s; ++i) v[L.zeta_off + i - 1] = u.zeta[i];
    return v;
}

template <class T>
LocalSeries<T> expand_near(const MeroFn<T>& f, const std::vector<T>& zeta, size_t i, int order) {
    if (i < f.parts.size()) return f.expand_at_part(i, order);
    return f.expand_at(zeta[i], order);
}

template <class T>
LocalSeries<T> apply_poly(const Poly<T>& p, const LocalSeries<T>& x) {
    using L = LocalSeries<T>;
    L acc({}, 0, L::kExact, x.point());
    for (int k = p.degree(); k >= 0; --k) acc = acc * x + L::constant(p[k], L::kExact, x.point());
    return acc;
}

template <class T>
std::vector<T> residual(const std::vector<T>& v, const Layout& L, const ModelScalars<T>& M, Gauge gauge) {
    auto u = unpack(v, L);
    const int n = L.n;
    int pinf = 4, pz = 4;
    for (int k = 1; k <= n + 1; ++k) {
        pinf = std::max(pinf, L.r[k] * (k <= n ? M.degree(k) : 1) + 4);
        pz = std::max(pz, L.sk[k] * (k <= n ? M.degree(k) : 1) + 4);
    }
    std::vector<LocalSeries<T>> at_inf;
    for (int k = 1; k <= n + 1; ++k) at_inf.push_back(u.x[k - 1].expand_at_infinity(pinf));
    std::vector<std::vector<LocalSeries<T>>> at_z(L.s);
    for (int i = 0; i < L.s; ++i)
        for (int k = 1; k <= n + 1; ++k) at_z[i].push_back(expand_near(u.x[k - 1], u.zeta, i, pz));

    std::vector<T> out;
    // constraints V_k'(x_k) = c_{k-1,k} x_{k-1} + c_{k,k+1} x_{k+1}, k = 2..n
    for (int k = 2; k <= n; ++k) {
        auto Ek = [&](const std::vector<LocalSeries<T>>& xs) {
            return apply_poly(M.vprime(k), xs[k - 1]) - M.c[k - 1] * xs[k - 2] - M.c[k] * xs[k];
        };
        auto e_inf = Ek(at_inf);
        for (int j = 0; j <= L.r[k + 1]; ++j) out.push_back(e_inf.coeff(-j));
        for (int i = 0; i < L.s; ++i) {
            auto e = Ek(at_z[i]);
            for (int m = 1; m <= L.sk[k - 1]; ++m) out.push_back(e.coeff(-m));
        }
    }
    // c_{1,2} x_2 - V_1'(x_1) = O(1/z) at infinity
    auto w = M.c[1] * at_inf[1] - apply_poly(M.vprime(1), at_inf[0]);
    for (int j = 0; j <= L.r[2]; ++j) out.push_back(w.coeff(-j));
    // Res_inf c_{1,2} x_2 dx_1 = T
    auto dx1 = u.x[0].derivative().expand_at_infinity(pinf);
    out.push_back((M.c[1] * at_inf[1] * dx1).residue() - M.T);
    // x_{n+1}(zeta_i) = lambda_i
    for (int i = 0; i < L.s; ++i) out.push_back(u.x[n].eval(u.zeta[i]) - M.lambda[i]);
    // Res_{zeta_i} x_n dx_{n+1} = T l_i, i >= 2 (i = 1 follows from the others)
    auto dxn1 = u.x[n].derivative();
    for (int i = 1; i < L.s; ++i) {
        auto loc = at_z[i][n - 1] * dxn1.expand_at(u.zeta[i], pz);
        out.push_back(loc.residue() - M.T * M.fraction[i]);
    }
    // gauge
    T a11 = v[L.a_off[1] + 1];
    if (gauge == Gauge::symmetric) out.push_back(a11 - v[L.c_off[1][0]]);
    else out.push_back(a11 - from_int<T>(1));
    return out;
}

template <class S>
double max_norm(const std::vector<S>& r) {
    double m = 0;
    for (const auto& x : r) m = std::max(m, Ring<S>::magnitude(x));
    return m;
}

bool effectively_quadratic(const ChainModel& m) {
    for (int i = 1; i <= m.n; ++i)
        for (int k = 3; k <= m.degree(i) + 1; ++k)
            if (!m.g(i, k).is_zero()) return false;
    return true;
}

// Closed-form curve for the linear and quadratic parts of the potentials,
// placed in the full layout. Before fixing the gauge, x_{n+1} = z + lambda_1.
template <class S>
std::vector<S> gaussian_seed(const Layout& L, const ModelScalars<S>& M, Gauge gauge) {
    using R = Ring<S>;
    const int n = L.n, s = L.s;
    std::vector<S> zeta;
    for (int i = 0; i < s; ++i) zeta.push_back(M.lambda[i] - M.lambda[0]);
    // Each x_k = A z + B + sum_i P_i/(z - zeta_i) with A affine in alpha, B affine in beta.
    struct Affine {
        S c0, c1;  // c0 + c1 * unknown
    };
    struct Lin {
        Affine A, B;
        std::vector<S> P;
    };
    auto zero = from_int<S>(0), one = from_int<S>(1);
    std::vector<Lin> x(n + 2);
    x[n + 1] = {{one, zero}, {M.lambda[0], zero}, std::vector<S>(s, zero)};
    std::vector<S> P(s);
    for (int i = 0; i < s; ++i) P[i] = M.T * M.fraction[i];
    x[n] = {{zero, one}, {zero, one}, P};
    for (int k = n; k >= 2; --k) {
        // c_{k-1,k} x_{k-1} = g1 + g2 x_k - c_{k,k+1} x_{k+1}
        S g1 = M.gk(k, 1), g2 = M.gk(k, 2), inv = R::inv(M.c[k - 1]);
        Lin& a = x[k];
        Lin& b = x[k + 1];
        Lin out;
        out.A = {(g2 * a.A.c0 - M.c[k] * b.A.c0) * inv, (g2 * a.A.c1 - M.c[k] * b.A.c1) * inv};
        out.B = {(g1 + g2 * a.B.c0 - M.c[k] * b.B.c0) * inv, (g2 * a.B.c1 - M.c[k] * b.B.c1) * inv};
        for (int i = 0; i < s; ++i) out.P.push_back((g2 * a.P[i] - M.c[k] * b.P[i]) * inv);
        x[k - 1] = out;
    }
    // c_{1,2} x_2 - V_1'(x_1) = O(1/z): z and constant coefficients
    S g1 = M.gk(1, 1), g2 = M.gk(1, 2);
    S ea1 = M.c[1] * x[2].A.c1 - g2 * x[1].A.c1, ea0 = M.c[1] * x[2].A.c0 - g2 * x[1].A.c0;
    S eb1 = M.c[1] * x[2].B.c1 - g2 * x[1].B.c1, eb0 = M.c[1] * x[2].B.c0 - g2 * x[1].B.c0 - g1;
    if (!R::is_invertible(ea1) || R::is_zero(ea1) || !R::is_invertible(eb1) || R::is_zero(eb1))
        throw SolverError("degenerate quadratic part: no Gaussian starting point");
    S alpha = -ea0 * R::inv(ea1), beta = -eb0 * R::inv(eb1);

    Unpacked<S> u;
    u.zeta = zeta;
    for (int k = 1; k <= n + 1; ++k) {
        MeroFn<S> f;
        f.poly = Poly<S>({x[k].B.c0 + x[k].B.c1 * beta, x[k].A.c0 + x[k].A.c1 * alpha});
        if (k <= n)
            for (int i = 0; i < s; ++i) {
                std::vector<S> c(L.sk[k], zero);
                c[0] = x[k].P[i];
                f.parts.push_back({zeta[i], c});
            }
        u.x.push_back(std::move(f));
    }
    // z -> kappa z fixes the gauge
    S A = u.x[0].poly[1], C = u.x[0].parts[0].coeffs[0];
    S kappa;
    if (gauge == Gauge::monic) {
        kappa = R::inv(A);
    } else {
        if constexpr (R::kind == RingKind::floating) {
            Floating ratio = C / A;
            if (ratio.real() <= 0) throw SolverError("symmetric gauge needs a positive ratio of x_1 coefficients");
            kappa = std::sqrt(ratio);
        } else {
            auto k2 = R::sqrt(C * R::inv(A));
            if (!k2) throw RingError("symmetric gauge needs an irrational square root; use the monic gauge or the float ring");
            kappa = *k2;
        }
    }
    S kinv = R::inv(kappa);
    for (auto& f : u.x) {
        std::vector<S> pc;
        S pw = one;
        for (int e = 0; e <= f.poly.degree(); ++e) {
            pc.push_back(f.poly[e] * pw);
            pw = pw * kappa;
        }
        f.poly = Poly<S>(std::move(pc));
        for (auto& part : f.parts) {
            part.at = part.at * kinv;
            S q = kinv;
            for (auto& c : part.coeffs) {
                c = c * q;
                q = q * kinv;
            }
        }
    }
    for (auto& z : u.zeta) z = z * kinv;
    return pack(u, L);
}

ModelScalars<Floating> scaled(const ModelScalars<Floating>& M, double tau) {
    ModelScalars<Floating> r = M;
    for (auto& row : r.g)
        for (size_t k = 2; k < row.size(); ++k) row[k] *= tau;
    return r;
}

template <class S>
Matrix<S> jacobian(const std::vector<S>& v, const Layout& L, const ModelScalars<S>& M, Gauge gauge) {
    using D = Dual<S>;
    auto MD = M.template map<D>([](const S& x) { return D(x); });
    Matrix<S> J(v.size(), std::vector<S>(v.size(), from_int<S>(0)));
    for (size_t j = 0; j < v.size(); ++j) {
        std::vector<D> vd;
        for (size_t k = 0; k < v.size(); ++k) vd.emplace_back(v[k], k == j ? from_int<S>(1) : from_int<S>(0));
        auto r = residual(vd, L, MD, gauge);
        if (r.size() != v.size()) throw SolverError("constraint system is not square");
        for (size_t i = 0; i < r.size(); ++i) J[i][j] = r[i].d;
    }
    return J;
}

std::vector<Floating> newton_float(std::vector<Floating> v, const Layout& L, const ModelScalars<Floating>& M,
                                   Gauge gauge, int max_iter, double scale) {
    auto project = [](std::vector<Floating>& x) {
        for (auto& c : x) c = {c.real(), 0.0};
    };
    project(v);
    auto r = residual(v, L, M, gauge);
    double norm = max_norm(r);
    for (int it = 0; it < max_iter; ++it) {
        if (norm <= 1e-15 * scale) return v;
        auto J = jacobian(v, L, M, gauge);
        std::vector<Floating> rhs;
        for (auto& x : r) rhs.push_back(-x);
        std::vector<Floating> dv;
        try {
            dv = solve_linear(J, rhs);
        } catch (const SolverError&) {
            break;
        }
        double t = 1.0;
        bool accepted = false;
        while (t >= 1.0 / 1024) {
            std::vector<Floating> trial = v;
            for (size_t k = 0; k < v.size(); ++k) trial[k] += t * dv[k];
            project(trial);
            auto rt = residual(trial, L, M, gauge);
            double nt = max_norm(rt);
            if (std::isfinite(nt) && nt < norm) {
                v = std::move(trial);
                r = std::move(rt);
                norm = nt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    if (norm <= 1e-11 * scale) return v;
    throw SolverError("Newton iteration did not converge (residual " + std::to_string(norm) + ")");
}

double model_scale(const ChainModel& m) {
    double s = std::max(1.0, std::fabs(m.T.to_double()));
    for (const auto& row : m.potentials)
        for (const auto& g : row) s = std::max(s, std::fabs(g.to_double()));
    for (const auto& c : m.couplings) s = std::max(s, std::fabs(c.to_double()));
    for (const auto& e : m.external) s = std::max(s, std::fabs(e.lambda.to_double()));
    return s;
}

std::vector<Floating> solve_float(const ChainModel& m, const Layout& L, Gauge gauge, int max_iter) {
    auto M = model_scalars<Floating>(m);
    double scale = model_scale(m);
    auto seed = gaussian_seed(L, scaled(M, 0.0), gauge);
    if (effectively_quadratic(m)) return newton_float(seed, L, M, gauge, max_iter, scale);
    std::string last;
    for (int steps : {1, 2, 4, 8, 16}) {
        try {
            std::vector<Floating> v = seed;
            for (int k = 1; k <= steps; ++k)
                v = newton_float(v, L, scaled(M, static_cast<double>(k) / steps), gauge, max_iter, scale);
            return v;
        } catch (const SolverError& e) {
            last = e.what();
        }
    }
    throw SolverError("no one-cut solution reached from the Gaussian point (multi-cut regime?): " + last);
}

template <class S>
SpectralCurve<S> assemble(const ChainModel& m, const ModelScalars<S>& M, const std::optional<SeriesParam>& p,
                          const Layout& L, Gauge gauge, const std::vector<S>& v) {
    SpectralCurve<S> c;
    c.model = m;
    c.scalars = M;
    c.param = p;
    c.profile = divisor_profile(m);
    c.gauge = gauge;
    auto u = unpack(v, L);
    c.x = std::move(u.x);
    c.zeta = std::move(u.zeta);
    return c;
}

std::vector<Rational> solve_exact(const ChainModel& m, const Layout& L, Gauge gauge, int max_iter) {
    auto M = model_scalars<Rational>(m);
    if (effectively_quadratic(m)) {
        auto v = gaussian_seed(L, M, gauge);
        auto r = residual(v, L, M, gauge);
        for (const auto& x : r)
            if (!x.is_zero()) throw SolverError("closed-form solution failed exact verification");
        return v;
    }
    auto vf = solve_float(m, L, gauge, max_iter);
    // Near a critical point Newton only converges linearly, so a second, looser
    // pass with small denominators; exact verification guards both.
    const std::pair<long, double> passes[] = {{1000000, 1e-10}, {1000, 1e-6}};
    for (auto [max_den, tol] : passes) {
        std::vector<Rational> v;
        for (const auto& x : vf) {
            Rational q;
            if (!reconstruct_rational(x.real(), max_den, tol, q)) break;
            v.push_back(q);
        }
        if (v.size() != vf.size()) continue;
        auto r = residual(v, L, M, gauge);
        bool exact = true;
        for (const auto& x : r) exact = exact && x.is_zero();
        if (exact) return v;
    }
    throw SolverError("solution is not rational; use the float ring");
}

}  // namespace

template <>
SpectralCurve<Floating> build_curve(const ChainModel& model, const BuildOptions& opts) {
    model.validate();
    if (opts.param) throw RingError("series parameters need the series ring");
    Gauge gauge = opts.gauge.value_or(Gauge::symmetric);
    Layout L(divisor_profile(model));
    auto v = solve_float(model, L, gauge, opts.max_newton);
    return assemble(model, model_scalars<Floating>(model), std::nullopt, L, gauge, v);
}

template <>
SpectralCurve<Rational> build_curve(const ChainModel& model, const BuildOptions& opts) {
    model.validate();
    if (opts.param) throw RingError("series parameters need the series ring");
    Gauge gauge = opts.gauge.value_or(Gauge::monic);
    Layout L(divisor_profile(model));
    auto v = solve_exact(model, L, gauge, opts.max_newton);
    return assemble(model, model_scalars<Rational>(model), std::nullopt, L, gauge, v);
}

template <>
SpectralCurve<CouplingSeries> build_curve(const ChainModel& model, const BuildOptions& opts) {
    if (!opts.param) throw SchemaError("the series ring needs a parameter");
    ChainModel m = series_layout(model, *opts.param);
    m.validate(true);
    Gauge gauge = opts.gauge.value_or(Gauge::monic);
    Layout L(divisor_profile(m));
    auto v0 = solve_exact(m, L, gauge, opts.max_newton);
    auto M0 = model_scalars<Rational>(m);
    auto J0 = jacobian(v0, L, M0, gauge);
    Matrix<CouplingSeries> J;
    for (const auto& row : J0) J.emplace_back(row.begin(), row.end());
    auto M = model_scalars<CouplingSeries>(m, opts.param);
    std::vector<CouplingSeries> v(v0.begin(), v0.end());
    // each chord step fixes at least one more order in t
    for (int it = 0; it <= opts.param->order + 1; ++it) {
        auto r = residual(v, L, M, gauge);
        bool done = true;
        for (const auto& x : r) done = done && x.is_zero();
        if (done) return assemble(m, M, opts.param, L, gauge, v);
        std::vector<CouplingSeries> rhs;
        for (auto& x : r) rhs.push_back(-x);
        auto dv = solve_linear(J, rhs);
        for (size_t k = 0; k < v.size(); ++k) v[k] += dv[k];
    }
    auto r = residual(v, L, M, gauge);
    for (const auto& x : r)
        if (!x.is_zero()) throw SolverError("series Newton iteration did not close");
    return assemble(m, M, opts.param, L, gauge, v);
}

template <class S>
std::vector<S> curve_equation_residuals(const SpectralCurve<S>& c) {
    Layout L(c.profile);
    Unpacked<S> u{c.x, c.zeta};
    return residual(pack(u, L), L, c.scalars, c.gauge);
}

template std::vector<Rational> curve_equation_residuals(const SpectralCurve<Rational>&);
template std::vector<Floating> curve_equation_residuals(const SpectralCurve<Floating>&);
template std::vector<CouplingSeries> curve_equation_residuals(const SpectralCurve<CouplingSeries>&);

}  // namespace chaintr
