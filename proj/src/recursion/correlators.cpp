#include "chaintr/recursion/correlators.hpp"

#include <algorithm>
#include <cmath>

namespace chaintr {

namespace {

// Local factors multiplying the kernel at a branch point a, in u = z - a.
enum class Fx : std::uint8_t {
    pole,       // 1/(z - a_b)^k
    pole_bar,   // zbar' / (zbar - a_b)^k
    taylor,     // u^m                 (omega_{0,2}(z, z_j) expanded in u)
    taylor_bar, // zbar' (zbar - a)^m  (omega_{0,2}(zbar, z_j))
    bergman,    // zbar' / (z - zbar)^2
    one
};

struct Factor {
    Fx type = Fx::one;
    int b = 0, k = 0;
    friend bool operator<(const Factor& x, const Factor& y) {
        return std::tie(x.type, x.b, x.k) < std::tie(y.type, y.b, y.k);
    }
};

}  // namespace

template <class S>
S OmegaForm<S>::eval(const std::vector<S>& z, const std::vector<S>& branch) const {
    S acc = from_int<S>(0);
    for (const auto& [key, c] : terms) {
        S t = c;
        for (int j = 0; j < n; ++j) t = t * Ring<S>::inv(ipow(z[j] - branch[key.branch(j)], key.order(j)));
        acc += t;
    }
    return acc;
}

template <class S>
int OmegaForm<S>::max_order() const {
    int m = 0;
    for (const auto& [key, c] : terms)
        for (int j = 0; j < n; ++j) m = std::max(m, key.order(j));
    return m;
}

template <class S>
struct CorrelatorTable<S>::Impl {
    using L = LocalSeries<S>;
    using R = Ring<S>;

    struct Entry {
        OmegaKey key;  // only this side's positions are filled
        S c;
    };
    struct Piece {
        Factor f;
        std::vector<Entry> entries;
    };
    struct Joint {  // omega_{g-1,n+2}(z, zbar, J): both factors from one term
        Factor f1, f2;
        std::vector<Entry> entries;
    };

    struct Local {
        std::vector<L> kappa;
        std::map<Factor, L> factors;
        std::map<std::pair<Factor, Factor>, std::vector<S>> residues;
    };

    CorrelatorTable<S>* t;
    int lmax = 0;
    std::vector<Local> local;

    int valuation(const Factor& f, int b0) const {
        switch (f.type) {
            case Fx::pole:
            case Fx::pole_bar: return f.b == b0 ? -f.k : 0;
            case Fx::taylor:
            case Fx::taylor_bar: return f.k;
            case Fx::bergman: return -2;
            case Fx::one: return 0;
        }
        return 0;
    }

    const L& factor(int b0, const Factor& f) {
        auto& cache = local[b0].factors;
        auto it = cache.find(f);
        if (it != cache.end()) return it->second;
        const auto& bp = t->bps_[b0];
        const int ord = t->order_;
        const L& d = bp.conj;
        L dprime = d.derivative();
        L s;
        switch (f.type) {
            case Fx::pole:
                if (f.b == b0) s = L::monomial(-f.k, L::kExact, bp.a);
                else s = L({bp.a - t->bps_[f.b].a, from_int<S>(1)}, 0, ord, bp.a).inverse().pow(f.k);
                break;
            case Fx::pole_bar:
                if (f.b == b0) s = dprime * d.inverse().pow(f.k);
                else
                    s = dprime * (L::constant(bp.a - t->bps_[f.b].a, L::kExact, bp.a) + d).inverse().pow(f.k);
                break;
            case Fx::taylor: s = L::monomial(f.k, L::kExact, bp.a); break;
            case Fx::taylor_bar: s = dprime * d.pow(f.k); break;
            case Fx::bergman: {
                L diff = L::monomial(1, L::kExact, bp.a) - d;
                s = dprime * diff.inverse().pow(2);
                break;
            }
            case Fx::one: s = L::constant(from_int<S>(1), L::kExact, bp.a); break;
        }
        return cache.emplace(f, std::move(s)).first->second;
    }

    // Res_u kappa_l f1 f2 for l = 0..1 - v (index l)
    const std::vector<S>& residues(int b0, const Factor& f1, const Factor& f2) {
        auto& memo = local[b0].residues;
        auto key = std::make_pair(f1, f2);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const int v = valuation(f1, b0) + valuation(f2, b0);
        const int top = 1 - v;
        std::vector<S> out(std::max(top + 1, 0), from_int<S>(0));
        if (top >= 1) {
            if (top > lmax) throw TruncationError("kernel order exceeded");
            L g = factor(b0, f1) * factor(b0, f2);
            for (int l = 1; l <= top; ++l) {
                const L& kap = local[b0].kappa[l];
                S acc = from_int<S>(0);
                for (int k = kap.val(); k <= -1 - g.val(); ++k) {
                    S a = kap.coeff(k);
                    if (R::is_exact_zero(a)) continue;
                    acc += a * g.coeff(-1 - k);
                }
                out[l] = acc;
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    }

    // omega_{h,m}(w, vars) as local pieces at b0, w = z (bar = false) or zbar.
    // positions[i] is the output slot of the i-th non-first variable.
    std::vector<Piece> pieces(int b0, int h, int m, bool bar, const std::vector<int>& positions) {
        std::vector<Piece> out;
        if (h == 0 && m == 2) {
            const int p = positions.at(0);
            for (int j = 0; j <= lmax; ++j) {
                Entry e;
                e.key.v[p] = OmegaKey::pack(b0, j + 2);
                e.c = from_int<S>(j + 1);
                out.push_back({{bar ? Fx::taylor_bar : Fx::taylor, 0, j}, {e}});
            }
            return out;
        }
        const auto& w = t->omega(h, m);
        std::map<std::uint16_t, size_t> index;
        for (const auto& [key, c] : w.terms) {
            auto [it, fresh] = index.emplace(key.v[0], out.size());
            if (fresh) out.push_back({{bar ? Fx::pole_bar : Fx::pole, key.branch(0), key.order(0)}, {}});
            Entry e;
            for (size_t i = 0; i < positions.size(); ++i) e.key.v[positions[i]] = key.v[i + 1];
            e.c = c;
            out[it->second].entries.push_back(std::move(e));
        }
        return out;
    }

    std::vector<Joint> joint(int b0, int h, int m, int nrest) {
        std::vector<Joint> out;
        if (h == 0 && m == 2) {
            Entry e;
            e.c = from_int<S>(1);
            out.push_back({{Fx::one, 0, 0}, {Fx::bergman, 0, 0}, {e}});
            return out;
        }
        (void)b0;
        const auto& w = t->omega(h, m);
        std::map<std::pair<std::uint16_t, std::uint16_t>, size_t> index;
        for (const auto& [key, c] : w.terms) {
            auto [it, fresh] = index.emplace(std::make_pair(key.v[0], key.v[1]), out.size());
            if (fresh)
                out.push_back({{Fx::pole, key.branch(0), key.order(0)}, {Fx::pole_bar, key.branch(1), key.order(1)}, {}});
            Entry e;
            for (int i = 0; i < nrest; ++i) e.key.v[1 + i] = key.v[2 + i];
            e.c = c;
            out[it->second].entries.push_back(std::move(e));
        }
        return out;
    }

    void accumulate(std::map<OmegaKey, S>& acc, int n, int b0, const Factor& f1, const Factor& f2,
                    const std::vector<Entry>& ea, const std::vector<Entry>& eb) {
        const auto& res = residues(b0, f1, f2);
        for (size_t l = 1; l < res.size(); ++l) {
            if (R::is_exact_zero(res[l])) continue;
            for (const auto& a : ea)
                for (const auto& b : eb) {
                    OmegaKey k;
                    k.n = static_cast<std::uint8_t>(n);
                    k.v[0] = OmegaKey::pack(b0, static_cast<int>(l) + 1);
                    for (int j = 1; j < n; ++j) k.v[j] = static_cast<std::uint16_t>(a.key.v[j] + b.key.v[j]);
                    S contrib = -(res[l] * a.c * b.c);
                    auto [it, fresh] = acc.emplace(k, contrib);
                    if (!fresh) it->second += contrib;
                }
        }
    }

    OmegaForm<S> build(int g, int n) {
        std::map<OmegaKey, S> acc;
        const int nj = n - 1;
        for (int b0 = 0; b0 < static_cast<int>(t->bps_.size()); ++b0) {
            if (g >= 1) {
                std::vector<Entry> unit(1);
                unit[0].c = from_int<S>(1);
                for (const auto& jt : joint(b0, g - 1, n + 1, nj)) accumulate(acc, n, b0, jt.f1, jt.f2, jt.entries, unit);
            }
            for (int h = 0; h <= g; ++h)
                for (unsigned mask = 0; mask < (1u << nj); ++mask) {
                    const int size = __builtin_popcount(mask);
                    if ((h == 0 && size == 0) || (h == g && size == nj)) continue;
                    std::vector<int> pa, pb;
                    for (int j = 0; j < nj; ++j) ((mask >> j) & 1 ? pa : pb).push_back(1 + j);
                    const int ma = size + 1, mb = nj - size + 1;
                    if (2 * h - 2 + ma < 0 || 2 * (g - h) - 2 + mb < 0) continue;
                    auto A = pieces(b0, h, ma, false, pa);
                    auto B = pieces(b0, g - h, mb, true, pb);
                    for (const auto& a : A)
                        for (const auto& b : B) {
                            if (1 - valuation(a.f, b0) - valuation(b.f, b0) < 1) continue;
                            accumulate(acc, n, b0, a.f, b.f, a.entries, b.entries);
                        }
                }
        }
        OmegaForm<S> w;
        w.g = g;
        w.n = n;
        for (auto& [k, c] : acc)
            if (!R::is_exact_zero(c)) w.terms.emplace(k, std::move(c));
        return w;
    }

    SymmetryReport symmetrize(OmegaForm<S>& w) {
        SymmetryReport rep;
        rep.g = w.g;
        rep.n = w.n;
        const int n = w.n;
        std::map<std::vector<std::uint16_t>, std::vector<std::pair<OmegaKey, S>>> orbits;
        for (const auto& [k, c] : w.terms) {
            std::vector<std::uint16_t> s(k.v.begin(), k.v.begin() + n);
            std::sort(s.begin(), s.end());
            orbits[s].emplace_back(k, c);
        }
        std::map<OmegaKey, S> out;
        for (auto& [canon, members] : orbits) {
            std::vector<OmegaKey> perms;
            std::vector<std::uint16_t> p = canon;
            do {
                OmegaKey k;
                k.n = static_cast<std::uint8_t>(n);
                std::copy(p.begin(), p.end(), k.v.begin());
                perms.push_back(k);
            } while (std::next_permutation(p.begin(), p.end()));
            if constexpr (R::exact) {
                bool ok = members.size() == perms.size();
                for (const auto& m : members) ok = ok && m.second == members[0].second;
                if (!ok) rep.symmetric = false;
                for (auto& m : members) out.emplace(m.first, m.second);
            } else {
                S sum = from_int<S>(0);
                double big = 0;
                for (const auto& m : members) {
                    sum += m.second;
                    big = std::max(big, R::magnitude(m.second));
                }
                S avg = sum * R::inv(from_int<S>(static_cast<long>(perms.size())));
                double spread = 0;
                std::map<OmegaKey, S> have(members.begin(), members.end());
                for (const auto& k : perms) {
                    auto it = have.find(k);
                    S c = it == have.end() ? from_int<S>(0) : it->second;
                    spread = std::max(spread, R::magnitude(c - avg));
                    out.emplace(k, avg);
                }
                rep.max_asymmetry = std::max(rep.max_asymmetry, spread / std::max(big, 1e-300));
            }
        }
        w.terms = std::move(out);
        rep.terms = w.terms.size();
        for (const auto& [k, c] : w.terms)
            for (int j = 0; j < n; ++j) {
                if (k.order(j) < 2) rep.residue_free = false;
                rep.max_order = std::max(rep.max_order, k.order(j));
            }
        rep.order_bound = rep.max_order <= 6 * w.g - 4 + 2 * n;
        if constexpr (!R::exact) rep.symmetric = rep.max_asymmetry <= 1e-8;
        return rep;
    }
};

template <class S>
CorrelatorTable<S>::CorrelatorTable(TRCurve<S> curve, int gmax, int nmax)
    : curve_(std::move(curve)), gmax_(gmax), nmax_(nmax) {
    if (gmax < 0 || nmax < 1 || gmax + nmax + 1 > kMaxArity) throw SchemaError("correlator table size out of range");
    // pole orders stay below 6g - 4 + 2n; products of two such need the kernel to 2 P + 2
    const int pmax = 6 * gmax + 2 * (nmax + 1);
    order_ = 2 * pmax + 12;
    bps_ = chaintr::branch_points(curve_, order_);
    if (bps_.size() > 255) throw UnsupportedError("too many branch points");
    impl_ = std::make_shared<Impl>();
    impl_->t = this;
    impl_->lmax = 2 * pmax + 4;
    for (const auto& bp : bps_) impl_->local.push_back({kernel_coefficients(bp, impl_->lmax), {}, {}});
}

template <class S>
std::vector<S> CorrelatorTable<S>::branch_locations() const {
    std::vector<S> out;
    for (const auto& bp : bps_) out.push_back(bp.a);
    return out;
}

template <class S>
const OmegaForm<S>& CorrelatorTable<S>::omega(int g, int n) {
    if (g < 0 || n < 1 || 2 * g - 2 + n <= 0) throw SchemaError("omega(g, n) needs 2g - 2 + n > 0");
    if (n > kMaxArity) throw UnsupportedError("arity too large");
    auto key = std::make_pair(g, n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    impl_->t = this;
    OmegaForm<S> w;
    try {
        w = impl_->build(g, n);
    } catch (const TruncationError& e) {
        throw TruncationError("omega(" + std::to_string(g) + "," + std::to_string(n) + "): " + e.what());
    }
    reports_.push_back(impl_->symmetrize(w));
    return cache_.emplace(key, std::move(w)).first->second;
}

template struct OmegaForm<Rational>;
template struct OmegaForm<Floating>;
template struct OmegaForm<CouplingSeries>;
template class CorrelatorTable<Rational>;
template class CorrelatorTable<Floating>;
template class CorrelatorTable<CouplingSeries>;

}  // namespace chaintr
