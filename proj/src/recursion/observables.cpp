#include "chaintr/recursion/observables.hpp"

#include "chaintr/algebra/roots.hpp"

#include <cmath>
#include <map>
#include <regex>

namespace chaintr {

template <class S>
S free_energy(CorrelatorTable<S>& table, int g) {
    if (g < 2) throw UnsupportedError("free energy is computed for g >= 2");
    const auto& w = table.omega(g, 1);
    int kmax = w.max_order();
    std::vector<LocalSeries<S>> phi;
    for (const auto& bp : table.branch_points()) phi.push_back(phi_local(table.curve(), bp.a, kmax + 1));
    // phi_local integrates y dx; the primitive used here is that of -y dx = W_0 dx - dV_1
    // (the dV_1 part drops out because omega(z) + omega(zbar) is regular at a branch point)
    S acc = from_int<S>(0);
    for (const auto& [key, c] : w.terms) acc += c * phi[key.branch(0)].coeff(key.order(0) - 1);
    return acc * Ring<S>::inv(from_int<S>(2 * g - 2));
}

namespace {

// [w^1] of x^p / (z - a)^k at infinity, i.e. -Res_inf of x^p dz/(z - a)^k.
template <class S>
S mu_inf(const MeroFn<S>& x, const S& a, int k, int p) {
    using L = LocalSeries<S>;
    int deg = std::max(1, x.order_at_infinity());
    int prec = p * deg + k + 4;
    L xs = x.expand_at_infinity(prec);
    L pole = L({from_int<S>(1), -a}, 0, prec, std::nullopt).inverse().pow(k).shifted(k);
    return (xs.pow(p) * pole).coeff(1);
}

template <class S>
LocalSeries<S> laurent_x(const MeroFn<S>& x, int prec) {
    return x.expand_at_infinity(prec);
}

}  // namespace

template <class S>
S moment(CorrelatorTable<S>& table, int g, const std::vector<int>& powers, const Poly<S>* vprime) {
    using L = LocalSeries<S>;
    const auto& x = table.curve().x();
    const int n = static_cast<int>(powers.size());
    for (int p : powers)
        if (p < 1) throw SchemaError("moment powers must be positive");
    int deg = std::max(1, x.order_at_infinity());
    if (g == 0 && n == 1) {
        if (!vprime) throw UnsupportedError("planar one-point moments need V_1'");
        int p = powers[0];
        int prec = (p + vprime->degree() + 2) * deg + 4;
        L xs = x.expand_at_infinity(prec);
        L dx = x.derivative().expand_at_infinity(prec);
        L ys = table.curve().y().expand_at_infinity(prec);
        L v = L({}, 0, L::kExact, std::nullopt);
        for (int k = vprime->degree(); k >= 0; --k) v = v * xs + L::constant((*vprime)[k], L::kExact, std::nullopt);
        return (xs.pow(p) * (v - ys) * dx).coeff(1);
    }
    if (g == 0 && n == 2) {
        // 1/(z1 - z2)^2 = sum_m (m+1) z2^m / z1^(m+2) for |z1| > |z2|
        int prec = (powers[0] + powers[1]) * deg + 4;
        L x1 = laurent_x(x, prec).pow(powers[0]);
        L x2 = laurent_x(x, prec).pow(powers[1]);
        S acc = from_int<S>(0);
        for (int m = 0; m + 1 <= -x1.val(); ++m)
            acc += from_int<S>(m + 1) * x1.coeff(-(m + 1)) * x2.coeff(m + 1);
        return acc;
    }
    return form_moment(table.omega(g, n), x, table.branch_locations(), powers);
}

template <class S>
S form_moment(const OmegaForm<S>& w, const MeroFn<S>& x, const std::vector<S>& branch, const std::vector<int>& powers) {
    const int n = w.n;
    if (static_cast<int>(powers.size()) != n) throw SchemaError("one power per argument is needed");
    std::map<std::pair<int, int>, S> memo;
    S acc = from_int<S>(0);
    for (const auto& [key, c] : w.terms) {
        S t = c;
        for (int j = 0; j < n; ++j) {
            auto mk = std::make_pair(static_cast<int>(key.v[j]), powers[j]);
            auto it = memo.find(mk);
            if (it == memo.end())
                it = memo.emplace(mk, mu_inf(x, branch[key.branch(j)], key.order(j), powers[j])).first;
            t = t * it->second;
        }
        acc += t;
    }
    return acc;
}

VariationParam parse_variation(const std::string& name) {
    VariationParam p;
    p.name = name;
    std::smatch m;
    static const std::regex rg(R"(g(\d+)_(\d+))"), rc(R"(c_(\d+))"), rl(R"(lambda_(\d+))"),
        rt(R"(t_(inf|\d+)-t_(inf|\d+))");
    auto slot = [](const std::string& s) { return s == "inf" ? 0 : std::stoi(s); };
    if (std::regex_match(name, m, rg)) {
        p.kind = VariationParam::Kind::g;
        p.power = std::stoi(m[1]);
        p.matrix = std::stoi(m[2]);
    } else if (std::regex_match(name, m, rc)) {
        p.kind = VariationParam::Kind::c;
        p.matrix = std::stoi(m[1]);
    } else if (std::regex_match(name, m, rl)) {
        p.kind = VariationParam::Kind::lambda;
        p.index = std::stoi(m[1]);
    } else if (name == "T") {
        p.kind = VariationParam::Kind::T;
    } else if (std::regex_match(name, m, rt)) {
        p.kind = VariationParam::Kind::tdiff;
        p.from = slot(m[1]);
        p.to = slot(m[2]);
        if (p.from == p.to) throw SchemaError("t-difference needs two distinct poles");
    } else {
        throw SchemaError("unknown variation parameter '" + name + "'");
    }
    return p;
}

namespace {

// Res_{zeta_i} f(q) dq/(q - a)^k for f given by its expansion at zeta_i
template <class S>
S res_at_marked(const LocalSeries<S>& f, const S& zeta, const S& a, int k) {
    using L = LocalSeries<S>;
    int prec = std::max(0, -f.val()) + 2;
    L pole = L({zeta - a, from_int<S>(1)}, 0, prec, zeta).inverse().pow(k);
    return (f * pole).residue();
}

// Primitive of dq/(q - a)^k (k >= 2) at a pole of the model: 0 at infinity.
template <class S>
S primitive(const SpectralCurve<S>& c, int slot, const S& a, int k) {
    if (slot == 0) return from_int<S>(0);
    if (slot > static_cast<int>(c.zeta.size())) throw SchemaError("no marked point " + std::to_string(slot));
    S d = c.zeta[slot - 1] - a;
    return -Ring<S>::inv(from_int<S>(k - 1) * ipow(d, k - 1));
}

template <class S>
LocalSeries<S> at_marked(const SpectralCurve<S>& c, int k, size_t i, int prec) {
    const auto& f = c.xk(k);
    return i < f.parts.size() ? f.expand_at_part(i, prec) : f.expand_at(c.zeta[i], prec);
}

}  // namespace

template <class S>
PoleFunctional<S> variation_functional(const SpectralCurve<S>& c, const std::vector<S>& branch,
                                       const VariationParam& p) {
    using R = Ring<S>;
    const int n = c.scalars.n;
    const int sheets = static_cast<int>(c.zeta.size());
    auto memo = std::make_shared<std::map<std::pair<int, int>, S>>();
    std::function<S(const S&, int)> f;
    switch (p.kind) {
        case VariationParam::Kind::g:
            if (p.matrix < 1 || p.matrix > n) throw SchemaError("no matrix " + std::to_string(p.matrix));
            if (p.matrix == 1) {
                // Res_inf (x_1^j / j) dq/(q - a)^k
                f = [c, p](const S& a, int k) {
                    return -(mu_inf(c.xk(1), a, k, p.power) * R::inv(from_int<S>(p.power)));
                };
            } else {
                // -sum_i Res_{zeta_i} (x_k^j / j) dq/(q - a)^k  (boundary weight -x_k^j/j)
                f = [c, p, sheets](const S& a, int k) {
                    S acc = from_int<S>(0);
                    int prec = p.power * c.profile.s[p.matrix] + 2;
                    for (int i = 0; i < sheets; ++i)
                        acc += res_at_marked(at_marked(c, p.matrix, i, prec).pow(p.power), c.zeta[i], a, k);
                    return -(acc * R::inv(from_int<S>(p.power)));
                };
            }
            break;
        case VariationParam::Kind::lambda:
            if (p.index < 1 || p.index > sheets) throw SchemaError("no eigenvalue " + std::to_string(p.index));
            // Res_{zeta_i} x_n dq/(q - a)^k
            f = [c, p, n](const S& a, int k) {
                size_t i = p.index - 1;
                return res_at_marked(at_marked(c, n, i, c.profile.s[n] + 2), c.zeta[i], a, k);
            };
            break;
        case VariationParam::Kind::c:
            if (p.matrix < 1 || p.matrix >= n) throw SchemaError("no coupling c_" + std::to_string(p.matrix));
            // sum_i Res_{zeta_i} x_k x_{k+1} dq/(q - a)^k
            f = [c, p, sheets](const S& a, int k) {
                S acc = from_int<S>(0);
                int prec = c.profile.s[p.matrix] + c.profile.s[p.matrix + 1] + 2;
                for (int i = 0; i < sheets; ++i)
                    acc += res_at_marked(at_marked(c, p.matrix, i, prec) * at_marked(c, p.matrix + 1, i, prec),
                                         c.zeta[i], a, k);
                return acc;
            };
            break;
        case VariationParam::Kind::tdiff:
            f = [c, p](const S& a, int k) { return primitive(c, p.to, a, k) - primitive(c, p.from, a, k); };
            break;
        case VariationParam::Kind::T:
            // fractions fixed: dT = sum_i l_i (d/dt_inf - d/dt_i)
            f = [c, sheets](const S& a, int k) {
                S acc = from_int<S>(0);
                for (int i = 0; i < sheets; ++i) acc += c.scalars.fraction[i] * primitive(c, i + 1, a, k);
                return acc;
            };
            break;
    }
    return [f, branch, memo](int b, int k) {
        auto key = std::make_pair(b, k);
        auto it = memo->find(key);
        if (it != memo->end()) return it->second;
        S v = f(branch.at(b), k);
        memo->emplace(key, v);
        return v;
    };
}

template <class S>
S vary_free_energy(CorrelatorTable<S>& table, int g, const PoleFunctional<S>& f) {
    S acc = from_int<S>(0);
    for (const auto& [key, c] : table.omega(g, 1).terms) acc += c * f(key.branch(0), key.order(0));
    return acc;
}

template <class S>
OmegaForm<S> vary_omega(CorrelatorTable<S>& table, int g, int n, const PoleFunctional<S>& f) {
    const auto& w = table.omega(g, n + 1);
    OmegaForm<S> out;
    out.g = g;
    out.n = n;
    for (const auto& [key, c] : w.terms) {
        OmegaKey k;
        k.n = static_cast<std::uint8_t>(n);
        std::copy(key.v.begin(), key.v.begin() + n, k.v.begin());
        S v = c * f(key.branch(n), key.order(n));
        auto [it, fresh] = out.terms.emplace(k, v);
        if (!fresh) it->second += v;
    }
    return out;
}

std::vector<SheetSumSample> sheet_sum_check(CorrelatorTable<Floating>& table, int h, const std::vector<double>& xs,
                                            double rel_tol) {
    if (h < 1) throw UnsupportedError("sheet sums are checked for h >= 1");
    const auto& x = table.curve().x();
    const auto& w = table.omega(h, 1);
    auto branch = table.branch_locations();
    auto dx = x.derivative();
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& a : branch)
        if (std::abs(a.imag()) < 1e-12) {
            double v = x.eval(a).real();
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    auto rf = x.to_rational_fn();
    std::vector<SheetSumSample> out;
    for (double xv : xs) {
        if (xv >= lo && xv <= hi) throw ChainError("preimages on cut: x = " + std::to_string(xv), ExitCode::other);
        Poly<Floating> p = rf.num() - Floating(xv) * rf.den();
        SheetSumSample s;
        s.x = xv;
        s.preimages = complex_roots(p);
        s.sum = 0;
        for (const auto& z : s.preimages) {
            Floating v = w.eval({z}, branch) / dx.eval(z);
            s.sum += v;
            s.scale = std::max(s.scale, std::abs(v));
        }
        s.pass = std::abs(s.sum) <= rel_tol * std::max(s.scale, 1e-300);
        out.push_back(std::move(s));
    }
    return out;
}

#define CHAINTR_INSTANTIATE(S)                                                                          \
    template S free_energy(CorrelatorTable<S>&, int);                                                   \
    template S moment(CorrelatorTable<S>&, int, const std::vector<int>&, const Poly<S>*);               \
    template S form_moment(const OmegaForm<S>&, const MeroFn<S>&, const std::vector<S>&,                \
                           const std::vector<int>&);                                                    \
    template PoleFunctional<S> variation_functional(const SpectralCurve<S>&, const std::vector<S>&,     \
                                                    const VariationParam&);                             \
    template S vary_free_energy(CorrelatorTable<S>&, int, const PoleFunctional<S>&);                    \
    template OmegaForm<S> vary_omega(CorrelatorTable<S>&, int, int, const PoleFunctional<S>&);

CHAINTR_INSTANTIATE(Rational)
CHAINTR_INSTANTIATE(Floating)
CHAINTR_INSTANTIATE(CouplingSeries)

}  // namespace chaintr
