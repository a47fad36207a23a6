#include "chaintr/algebra/mpoly.hpp"

#include "chaintr/errors.hpp"

namespace chaintr {

MPoly MPoly::constant(int nvars, const Rational& c) {
    MPoly p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

MPoly MPoly::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw RingError("variable index out of range");
    MPoly p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.add_term(e, Rational(1));
    return p;
}

Rational MPoly::coeff(const Exponents& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Rational() : it->second;
}

int MPoly::degree_in(int var) const {
    int d = t_.empty() ? -1 : 0;
    for (const auto& [e, c] : t_) d = std::max(d, e[var]);
    return d;
}

void MPoly::add_term(const Exponents& e, const Rational& c) {
    if (c.is_zero()) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
        t_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

MPoly MPoly::operator-() const {
    MPoly r = *this;
    for (auto& [e, c] : r.t_) c = -c;
    return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
    if (o.nvars_ != nvars_) throw RingError("variable count mismatch");
    for (const auto& [e, c] : o.t_) add_term(e, c);
    return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
    if (a.nvars_ != b.nvars_) throw RingError("variable count mismatch");
    MPoly r(a.nvars_);
    for (const auto& [ea, ca] : a.t_)
        for (const auto& [eb, cb] : b.t_) {
            MPoly::Exponents e(a.nvars_);
            for (int k = 0; k < a.nvars_; ++k) e[k] = ea[k] + eb[k];
            r.add_term(e, ca * cb);
        }
    return r;
}

MPoly operator*(const Rational& s, const MPoly& a) {
    MPoly r(a.nvars_);
    for (const auto& [e, c] : a.t_) r.add_term(e, s * c);
    return r;
}

MPoly MPoly::compose_into(const Poly<Rational>& p) const {
    MPoly acc(nvars_);
    for (int k = p.degree(); k >= 0; --k) acc = acc * *this + constant(nvars_, p[k]);
    return acc;
}

Rational MPoly::eval(const std::vector<Rational>& x) const {
    Rational acc;
    for (const auto& [e, c] : t_) {
        Rational term = c;
        for (int k = 0; k < nvars_; ++k) term *= x.at(k).pow(e[k]);
        acc += term;
    }
    return acc;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
    if (t_.empty()) return "0";
    std::string out;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string term = c.str();
        for (int k = 0; k < nvars_; ++k) {
            if (e[k] == 0) continue;
            term += "*" + names.at(k);
            if (e[k] > 1) term += "^" + std::to_string(e[k]);
        }
        if (!out.empty()) out += " + ";
        out += term;
    }
    return out;
}

}  // namespace chaintr
