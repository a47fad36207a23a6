#include "chaintr/algebra/coupling_series.hpp"

#include "chaintr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chaintr {

CouplingSeries::CouplingSeries(std::vector<Rational> coeffs, int prec) : c_(std::move(coeffs)), prec_(prec) {
    if (prec_ < 0) throw RingError("negative series precision");
    trim();
}

CouplingSeries CouplingSeries::parameter(const Rational& base, int prec) {
    return CouplingSeries({base, Rational(1)}, prec);
}

void CouplingSeries::trim() {
    if (prec_ != kExact && static_cast<int>(c_.size()) > prec_ + 1) c_.resize(prec_ + 1);
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const Rational& CouplingSeries::operator[](int k) const {
    static const Rational zero;
    if (k > prec_) throw TruncationError("series coefficient t^" + std::to_string(k) + " beyond O(t^" +
                                         std::to_string(prec_ + 1) + ")");
    if (k < 0 || k >= static_cast<int>(c_.size())) return zero;
    return c_[k];
}

Rational CouplingSeries::coeff(int k) const { return (*this)[k]; }

int CouplingSeries::valuation() const {
    for (size_t k = 0; k < c_.size(); ++k)
        if (!c_[k].is_zero()) return static_cast<int>(k);
    return kExact;
}

CouplingSeries CouplingSeries::operator-() const {
    CouplingSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

CouplingSeries& CouplingSeries::operator+=(const CouplingSeries& o) {
    prec_ = std::min(prec_, o.prec_);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

CouplingSeries& CouplingSeries::operator-=(const CouplingSeries& o) { return *this += -o; }

CouplingSeries& CouplingSeries::operator*=(const CouplingSeries& o) {
    int va = valuation(), vb = o.valuation();
    long pa = prec_ == kExact ? kExact : static_cast<long>(prec_) + (vb == kExact ? kExact : vb);
    long pb = o.prec_ == kExact ? kExact : static_cast<long>(o.prec_) + (va == kExact ? kExact : va);
    int prec = static_cast<int>(std::min<long>({pa, pb, kExact}));
    std::vector<Rational> r;
    if (!c_.empty() && !o.c_.empty()) {
        size_t n = c_.size() + o.c_.size() - 1;
        if (prec != kExact) n = std::min<size_t>(n, static_cast<size_t>(prec) + 1);
        r.assign(n, Rational());
        for (size_t i = 0; i < c_.size() && i < n; ++i) {
            if (c_[i].is_zero()) continue;
            for (size_t j = 0; j < o.c_.size() && i + j < n; ++j) r[i + j] += c_[i] * o.c_[j];
        }
    }
    c_ = std::move(r);
    prec_ = prec;
    trim();
    return *this;
}

CouplingSeries CouplingSeries::inverse() const {
    if (c_.empty() || c_[0].is_zero()) throw RingError("series inverse needs a nonzero constant term");
    if (prec_ == kExact) {
        if (c_.size() == 1) return CouplingSeries(c_[0].inverse());
        throw RingError("inverse of an untruncated non-constant series");
    }
    std::vector<Rational> r(prec_ + 1);
    Rational inv0 = c_[0].inverse();
    r[0] = inv0;
    for (int k = 1; k <= prec_; ++k) {
        Rational s;
        for (int j = 1; j <= k && j < static_cast<int>(c_.size()); ++j) s += c_[j] * r[k - j];
        r[k] = -s * inv0;
    }
    return CouplingSeries(std::move(r), prec_);
}

bool CouplingSeries::is_zero() const { return c_.empty(); }

bool CouplingSeries::sqrt(CouplingSeries& out) const {
    if (c_.empty()) {
        out = *this;
        return true;
    }
    Rational r0;
    if (c_[0].is_zero() || !c_[0].exact_sqrt(r0)) return false;
    if (prec_ == kExact && c_.size() > 1) return false;
    if (prec_ == kExact) {
        out = CouplingSeries(r0);
        return true;
    }
    // s_k from s^2 = a, term by term
    std::vector<Rational> s(prec_ + 1);
    s[0] = r0;
    Rational inv2s0 = (Rational(2) * r0).inverse();
    for (int k = 1; k <= prec_; ++k) {
        Rational acc = (*this)[k];
        for (int j = 1; j < k; ++j) acc -= s[j] * s[k - j];
        s[k] = acc * inv2s0;
    }
    out = CouplingSeries(std::move(s), prec_);
    return true;
}

double CouplingSeries::magnitude() const {
    double m = 0;
    for (const auto& x : c_) m = std::max(m, std::fabs(x.to_double()));
    return m;
}

bool operator==(const CouplingSeries& a, const CouplingSeries& b) {
    int p = std::min(a.prec_, b.prec_);
    size_t n = std::max(a.c_.size(), b.c_.size());
    for (size_t k = 0; k < n && static_cast<int>(k) <= p; ++k)
        if (a[static_cast<int>(k)] != b[static_cast<int>(k)]) return false;
    return true;
}

std::string CouplingSeries::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[k].str();
        if (k == 1) os << "*" << var;
        if (k > 1) os << "*" << var << "^" << k;
    }
    if (first) os << "0";
    if (prec_ != kExact) os << " + O(" << var << "^" << prec_ + 1 << ")";
    return os.str();
}

}  // namespace chaintr
