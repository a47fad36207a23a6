#include "chaintr/model/chain_model.hpp"

#include "chaintr/errors.hpp"

#include <regex>

namespace chaintr {

int ChainModel::degree(int i) const { return static_cast<int>(potentials.at(i - 1).size()) - 1; }

Rational ChainModel::g(int i, int k) const {
    const auto& p = potentials.at(i - 1);
    return k >= 1 && k <= static_cast<int>(p.size()) ? p[k - 1] : Rational();
}

Rational ChainModel::c(int i) const {
    if (i <= 0 || i >= n) return Rational(1);
    return couplings.at(i - 1);
}

Poly<Rational> ChainModel::vprime(int i) const { return Poly<Rational>(potentials.at(i - 1)); }

std::vector<ExternalEigenvalue> ChainModel::eigenvalues() const {
    if (external.empty()) return {{Rational(0), Rational(1)}};
    return external;
}

bool ChainModel::quadratic() const {
    for (int i = 1; i <= n; ++i)
        if (degree(i) != 1) return false;
    return true;
}

void ChainModel::validate(bool allow_zero_top) const {
    if (n < 1) throw SchemaError("chain length n must be >= 1");
    if (static_cast<int>(potentials.size()) != n) throw SchemaError("expected one potential per matrix");
    for (int i = 1; i <= n; ++i) {
        if (degree(i) < 1) throw SchemaError("potential " + std::to_string(i) + " must have degree >= 2");
        if (!allow_zero_top && potentials[i - 1].back().is_zero())
            throw SchemaError("top coefficient of potential " + std::to_string(i) + " vanishes");
    }
    if (static_cast<int>(couplings.size()) != n - 1) throw SchemaError("expected n-1 couplings");
    for (const auto& c : couplings)
        if (c.is_zero()) throw SchemaError("couplings must be nonzero");
    if (T.sign() <= 0) throw SchemaError("T must be positive");
    if (!external.empty()) {
        Rational total;
        for (size_t i = 0; i < external.size(); ++i) {
            if (external[i].fraction.sign() <= 0) throw SchemaError("fractions must be positive");
            total += external[i].fraction;
            for (size_t j = 0; j < i; ++j)
                if (external[j].lambda == external[i].lambda) throw SchemaError("eigenvalues must be distinct");
        }
        if (total != Rational(1)) throw SchemaError("fractions must sum to 1");
    }
}

DivisorProfile divisor_profile(const ChainModel& m) {
    DivisorProfile p;
    p.n = m.n;
    p.sheets = m.s();
    p.r.assign(m.n + 2, 0);
    p.s.assign(m.n + 2, 0);
    p.r[1] = 1;
    for (int k = 2; k <= m.n + 1; ++k) p.r[k] = p.r[k - 1] * m.degree(k - 1);
    p.s[m.n + 1] = 0;
    p.s[m.n] = 1;
    for (int k = m.n - 1; k >= 1; --k) p.s[k] = p.s[k + 1] * m.degree(k + 1);
    // deg_x1 E = d1 + D1, deg_x2 E = 1 + D2 (D1 = d3..dn * sheets, D2 = d2..dn * sheets)
    p.D2 = p.sheets * p.s[1];
    p.D1 = p.sheets * p.s[2];
    return p;
}

MPoly f_poly(int i, int j, const ChainModel& m) {
    if (i < 1 || j > m.n) throw SchemaError("f_poly index out of range");
    const int nv = m.n;
    if (i == j + 1) return MPoly::constant(nv, Rational(1));
    if (i > j + 1) return MPoly(nv);
    // c_{i-1,i} f_{i,j} = V_i'(x_i) f_{i+1,j} - c_{i,i+1} x_i x_{i+1} f_{i+2,j}
    MPoly xi = MPoly::variable(nv, i - 1);
    MPoly out = xi.compose_into(m.vprime(i)) * f_poly(i + 1, j, m);
    if (i + 1 <= m.n && i + 2 <= j + 1) {
        MPoly xi1 = MPoly::variable(nv, i);
        out -= m.c(i) * (xi * xi1 * f_poly(i + 2, j, m));
    }
    return m.c(i - 1).inverse() * out;
}

std::vector<MPoly> hat_x_sequence(const MPoly& x1, const MPoly& x2, const ChainModel& m) {
    if (m.n < 2) throw SchemaError("hat_x_sequence needs n >= 2");
    std::vector<MPoly> xs{x1, x2};  // xs[k-1] = x-hat_k
    for (int i = 3; i <= m.n + 1; ++i) {
        // c_{i-1,i} x_i = V'_{i-1}(x_{i-1}) - c_{i-2,i-1} x_{i-2}
        MPoly rhs = xs[i - 2].compose_into(m.vprime(i - 1)) - m.c(i - 2) * xs[i - 3];
        xs.push_back(m.c(i - 1).inverse() * rhs);
    }
    return {xs.begin() + 2, xs.end()};
}

SeriesParam parse_series_param(const std::string& name, int order) {
    SeriesParam p;
    p.order = order;
    p.name = name;
    std::smatch mt;
    if (order < 0) throw SchemaError("series order must be >= 0");
    if (std::regex_match(name, mt, std::regex(R"(g(\d+)_(\d+))"))) {
        p.kind = SeriesParam::Kind::g;
        p.power = std::stoi(mt[1]);
        p.matrix = std::stoi(mt[2]);
    } else if (std::regex_match(name, mt, std::regex(R"(c_(\d+))"))) {
        p.kind = SeriesParam::Kind::c;
        p.matrix = std::stoi(mt[1]);
    } else if (name == "T") {
        p.kind = SeriesParam::Kind::T;
    } else if (std::regex_match(name, mt, std::regex(R"(lambda_(\d+))"))) {
        p.kind = SeriesParam::Kind::lambda;
        p.matrix = std::stoi(mt[1]);
    } else {
        throw SchemaError("unknown series parameter '" + name + "'");
    }
    return p;
}

ChainModel series_layout(const ChainModel& m, const SeriesParam& p) {
    ChainModel out = m;
    switch (p.kind) {
    case SeriesParam::Kind::g:
        if (p.matrix < 1 || p.matrix > m.n || p.power < 1) throw SchemaError("bad series parameter " + p.name);
        if (p.power > static_cast<int>(out.potentials[p.matrix - 1].size()))
            out.potentials[p.matrix - 1].resize(p.power, Rational());
        break;
    case SeriesParam::Kind::c:
        if (p.matrix < 1 || p.matrix >= m.n) throw SchemaError("bad series parameter " + p.name);
        break;
    case SeriesParam::Kind::lambda:
    case SeriesParam::Kind::fraction:
        if (p.matrix < 1 || p.matrix > m.s()) throw SchemaError("bad series parameter " + p.name);
        if (out.external.empty()) out.external = m.eigenvalues();
        break;
    case SeriesParam::Kind::T:
        break;
    }
    return out;
}

template <class S>
ModelScalars<S> model_scalars(const ChainModel& m, const std::optional<SeriesParam>& p) {
    ModelScalars<S> r;
    r.n = m.n;
    auto lift = [](const Rational& q) { return Ring<S>::from_rational(q); };
    for (const auto& row : m.potentials) {
        r.g.emplace_back();
        for (const auto& x : row) r.g.back().push_back(lift(x));
    }
    for (int i = 0; i <= m.n; ++i) r.c.push_back(lift(m.c(i)));
    r.T = lift(m.T);
    for (const auto& e : m.eigenvalues()) {
        r.lambda.push_back(lift(e.lambda));
        r.fraction.push_back(lift(e.fraction));
    }
    if (p) {
        if constexpr (std::is_same_v<S, CouplingSeries>) {
            auto bump = [&](S& x) { x = CouplingSeries::parameter(x.coeff(0), p->order); };
            switch (p->kind) {
            case SeriesParam::Kind::g: bump(r.g.at(p->matrix - 1).at(p->power - 1)); break;
            case SeriesParam::Kind::c: bump(r.c.at(p->matrix)); break;
            case SeriesParam::Kind::T: bump(r.T); break;
            case SeriesParam::Kind::lambda: bump(r.lambda.at(p->matrix - 1)); break;
            case SeriesParam::Kind::fraction: bump(r.fraction.at(p->matrix - 1)); break;
            }
        } else {
            throw RingError("series parameters need the series ring");
        }
    }
    return r;
}

template ModelScalars<Rational> model_scalars(const ChainModel&, const std::optional<SeriesParam>&);
template ModelScalars<Floating> model_scalars(const ChainModel&, const std::optional<SeriesParam>&);
template ModelScalars<CouplingSeries> model_scalars(const ChainModel&, const std::optional<SeriesParam>&);

}  // namespace chaintr
