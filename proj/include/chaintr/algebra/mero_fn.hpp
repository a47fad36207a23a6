#pragma once

#include "chaintr/algebra/rational_fn.hpp"

#include <optional>
#include <vector>

namespace chaintr {

// Meromorphic function on the sphere in partial-fraction form:
// polynomial part (pole at infinity) plus principal parts at finite points.
template <class S>
struct MeroFn {
    using R = Ring<S>;
    Poly<S> poly;
    std::vector<PrincipalPart<S>> parts;

    int order_at_infinity() const { return std::max(poly.degree(), 0); }
    int order_at_part(size_t i) const {
        int m = static_cast<int>(parts[i].coeffs.size());
        while (m > 0 && R::is_exact_zero(parts[i].coeffs[m - 1])) --m;
        return m;
    }

    S eval(const S& z) const {
        S acc = poly.eval(z);
        for (const auto& p : parts) {
            S inv = R::inv(z - p.at), pw = inv;
            for (const auto& c : p.coeffs) {
                acc += c * pw;
                pw = pw * inv;
            }
        }
        return acc;
    }

    MeroFn derivative() const {
        MeroFn d;
        d.poly = poly.derivative();
        for (const auto& p : parts) {
            PrincipalPart<S> q{p.at, std::vector<S>(p.coeffs.size() + 1, from_int<S>(0))};
            for (size_t j = 0; j < p.coeffs.size(); ++j)
                q.coeffs[j + 1] = -(from_int<S>(static_cast<long>(j + 1)) * p.coeffs[j]);
            d.parts.push_back(std::move(q));
        }
        return d;
    }

    friend MeroFn operator*(const S& s, const MeroFn& f) {
        MeroFn r = f;
        r.poly = s * r.poly;
        for (auto& p : r.parts)
            for (auto& c : p.coeffs) c = s * c;
        return r;
    }

    // Expansion at infinity in w = 1/z, known through w^order.
    LocalSeries<S> expand_at_infinity(int order) const {
        using L = LocalSeries<S>;
        std::vector<S> pc;
        int d = poly.degree();
        for (int k = d; k >= 0; --k) pc.push_back(poly[k]);
        L acc = d >= 0 ? L(std::move(pc), -d, order) : L::zero(order);
        for (const auto& p : parts) {
            if (p.coeffs.empty()) continue;
            // 1/(z - a) = w / (1 - a w)
            L base = L({from_int<S>(1), -p.at}, 0, std::max(order, 0)).inverse().shifted(1).truncated(order);
            L pw = base;
            for (size_t j = 0; j < p.coeffs.size(); ++j) {
                if (!R::is_exact_zero(p.coeffs[j])) acc += p.coeffs[j] * pw;
                if (j + 1 < p.coeffs.size()) pw = (pw * base).truncated(order);
            }
        }
        return acc.truncated(order);
    }

    // Expansion at a finite point in u = z - point, known through u^order.
    // pole_index selects a principal part whose point coincides with `point`.
    LocalSeries<S> expand_at(const S& point, int order, std::optional<size_t> pole_index = std::nullopt) const {
        using L = LocalSeries<S>;
        L acc = L::from_poly(poly.shift(point), order, point);
        for (size_t i = 0; i < parts.size(); ++i) {
            const auto& p = parts[i];
            if (p.coeffs.empty()) continue;
            if (pole_index && *pole_index == i) {
                std::vector<S> c(p.coeffs.rbegin(), p.coeffs.rend());
                acc += L(std::move(c), -static_cast<int>(p.coeffs.size()), order, point);
                continue;
            }
            int rel = order + static_cast<int>(p.coeffs.size());
            L base = L({point - p.at, from_int<S>(1)}, 0, std::max(rel, 0), point).inverse();
            L pw = base;
            for (size_t j = 0; j < p.coeffs.size(); ++j) {
                if (!R::is_exact_zero(p.coeffs[j])) acc += p.coeffs[j] * pw;
                if (j + 1 < p.coeffs.size()) pw = pw * base;
            }
        }
        return acc.truncated(order);
    }

    LocalSeries<S> expand_at_part(size_t i, int order) const { return expand_at(parts[i].at, order, i); }

    RationalFn<S> to_rational_fn() const {
        PartialFractions<S> pf{poly, parts};
        return RationalFn<S>::from_partial_fractions(pf);
    }

    // Same layout, coefficients mapped through f.
    template <class T, class F>
    MeroFn<T> map(F f) const {
        MeroFn<T> r;
        std::vector<T> pc;
        for (const auto& c : poly.coeffs()) pc.push_back(f(c));
        r.poly = Poly<T>(std::move(pc));
        for (const auto& p : parts) {
            PrincipalPart<T> q{f(p.at), {}};
            for (const auto& c : p.coeffs) q.coeffs.push_back(f(c));
            r.parts.push_back(std::move(q));
        }
        return r;
    }
};

}  // namespace chaintr
