#include "chaintr/oracle/finite_n.hpp"

#include "chaintr/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <vector>

namespace chaintr {

namespace {

HighFloat to_high(const Rational& r) {
    return HighFloat(r.num().get_str()) / HighFloat(r.den().get_str());
}

}  // namespace

HighFloat gaussian_exact_lnZ(int N, const Rational& T) {
    if (N < 1 || N > kMaxFiniteN) throw ChainError("finite-N oracle needs 1 <= N <= " + std::to_string(kMaxFiniteN));
    if (T.sign() <= 0) throw SchemaError("T must be positive");
    const HighFloat two_pi = 2 * boost::math::constants::pi<HighFloat>();
    HighFloat s = 0, lnfact = 0;
    for (int j = 1; j < N; ++j) {
        lnfact += log(HighFloat(j));
        s += lnfact;
    }
    HighFloat n(N);
    return s - n / 2 * log(two_pi) + n * n / 2 * log(to_high(T) / n);
}

double gaussian_F2_extrapolated(const Rational& T, int n_lo, int n_hi, int step) {
    if (n_lo < 2 || n_hi <= n_lo || step < 1) throw ChainError("bad extrapolation range");
    std::vector<HighFloat> xs, rs;
    const HighFloat lnT = log(to_high(T));
    for (int N = n_lo; N <= n_hi; N += step) {
        HighFloat n(N);
        xs.push_back(1 / (n * n));
        rs.push_back(gaussian_exact_lnZ(N, T) + 3 * n * n / 4 - n * n / 2 * lnT + log(n) / 12);
    }
    // Newton divided differences, then the linear coefficient of the interpolant
    const size_t k = xs.size();
    std::vector<HighFloat> c = rs;
    for (size_t j = 1; j < k; ++j)
        for (size_t i = k - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
    // p(x) = sum_i c_i prod_{j<i} (x - x_j); expand to monomials
    std::vector<HighFloat> poly(k, HighFloat(0)), basis(1, HighFloat(1));
    for (size_t i = 0; i < k; ++i) {
        for (size_t d = 0; d < basis.size(); ++d) poly[d] += c[i] * basis[d];
        std::vector<HighFloat> nb(basis.size() + 1, HighFloat(0));
        for (size_t d = 0; d < basis.size(); ++d) {
            nb[d + 1] += basis[d];
            nb[d] -= xs[i] * basis[d];
        }
        basis = std::move(nb);
    }
    HighFloat t = to_high(T);
    return static_cast<double>(poly[1] / (t * t));
}

}  // namespace chaintr
