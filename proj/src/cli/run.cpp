#include "chaintr/cli/run.hpp"

#include "chaintr/errors.hpp"
#include "chaintr/model/build_curve.hpp"
#include "chaintr/model/moduli.hpp"
#include "chaintr/recursion/observables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>

namespace chaintr {

MomentRequest parse_moment_request(const std::string& s) {
    static const std::regex re(R"((\d+):(\d+(,\d+)*))");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw SchemaError("moment request must look like g:p1,p2,...");
    MomentRequest r;
    r.g = std::stoi(m[1].str());
    std::string list = m[2].str();
    size_t pos = 0;
    while (pos <= list.size()) {
        size_t comma = list.find(',', pos);
        if (comma == std::string::npos) comma = list.size();
        r.powers.push_back(std::stoi(list.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return r;
}

namespace {

Json conventions(const std::string& gauge) {
    return {
        {"residue_at_infinity", "Res_{z=inf} f(z) dz = -[w^1] f(1/w), w = 1/z"},
        {"spectral_curve", "y = c_{1,2} x_2 = V_1'(x_1) - W_0(x_1)"},
        {"recursion", "omega_{g,n+1}(z0,J) = -sum_a Res_{z->a} K(z0,z) [omega_{g-1,n+2}(z,zbar,J) + sum' "
                      "omega(z,I) omega(zbar,J\\I)]"},
        {"moments", "m = (-1)^n Res_inf ... Res_inf prod_j x_1(z_j)^{p_j} omega_{g,n}"},
        {"free_energy", "F_g = 1/(2-2g) sum_a Res_a omega_{g,1} Phi, dPhi = -y dx_1"},
        {"expansion", "ln Z = sum_g (N/T)^{2-2g} F_g"},
        {"gauge", gauge},
    };
}

Json encode_key(const OmegaKey& k) {
    Json v = Json::array();
    for (int j = 0; j < k.n; ++j) v.push_back(Json::array({k.branch(j), k.order(j)}));
    return v;
}

Json encode_report(const SymmetryReport& r) {
    return {{"g", r.g},
            {"n", r.n},
            {"terms", r.terms},
            {"symmetric", r.symmetric},
            {"max_asymmetry", r.max_asymmetry},
            {"residue_free", r.residue_free},
            {"max_order", r.max_order},
            {"order_bound", r.order_bound}};
}

bool report_ok(const SymmetryReport& r) { return r.symmetric && r.residue_free && r.order_bound; }

ChainModel bumped(const ChainModel& m, const VariationParam& p, const Rational& h) {
    ChainModel b = m;
    switch (p.kind) {
        case VariationParam::Kind::g: {
            if (p.matrix < 1 || p.matrix > m.n) throw SchemaError("no matrix " + std::to_string(p.matrix));
            auto& v = b.potentials[p.matrix - 1];
            if (static_cast<int>(v.size()) < p.power) v.resize(p.power, Rational(0));
            v[p.power - 1] += h;
            break;
        }
        case VariationParam::Kind::c:
            if (p.matrix < 1 || p.matrix >= m.n) throw SchemaError("no coupling c_" + std::to_string(p.matrix));
            b.couplings[p.matrix - 1] += h;
            break;
        case VariationParam::Kind::lambda:
            b.external = m.eigenvalues();
            if (p.index < 1 || p.index > static_cast<int>(b.external.size()))
                throw SchemaError("no eigenvalue " + std::to_string(p.index));
            b.external[p.index - 1].lambda += h;
            break;
        case VariationParam::Kind::T:
            b.T += h;
            break;
        case VariationParam::Kind::tdiff: {
            // t_i = -T l_i; only differences between marked points keep T fixed
            if (p.from == 0 || p.to == 0) throw UnsupportedError("finite differences in t_inf");
            b.external = m.eigenvalues();
            int s = static_cast<int>(b.external.size());
            if (p.from > s || p.to > s) throw SchemaError("no such marked point");
            b.external[p.from - 1].fraction -= h / m.T;
            b.external[p.to - 1].fraction += h / m.T;
            break;
        }
    }
    return b;
}

std::vector<std::string> default_params(const ChainModel& m) {
    std::vector<std::string> out{"T"};
    for (int j = 1; j <= m.degree(1) + 1; ++j) out.push_back("g" + std::to_string(j) + "_1");
    for (int i = 1; i < m.n; ++i) out.push_back("c_" + std::to_string(i));
    for (size_t i = 1; i <= m.external.size(); ++i) out.push_back("lambda_" + std::to_string(i));
    return out;
}

double free_energy_float(const ChainModel& m, int g, const BuildOptions& o) {
    auto c = build_curve<Floating>(m, o);
    CorrelatorTable<Floating> t(c.tr_curve(), g, 1);
    return free_energy(t, g).real();
}

// Sample points on the real axis beyond the extreme branch values of x. Far
// out omega_{h,1} is a near-cancelling sum of pole terms, so stay close.
std::vector<double> sheet_samples(const TRCurve<Floating>& c) {
    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& b : c.branch_locations()) {
        double v = c.x().eval(b).real();
        if (first) lo = hi = v, first = false;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double s = std::max(1.0, hi - lo);
    return {hi + 0.25 * s, hi + s, hi + 2 * s, lo - 0.5 * s, lo - 1.5 * s};
}

template <class S>
struct Context {
    const RunSpec& spec;
    const ModelFile& file;
    RingSpec ring;
    std::optional<SpectralCurve<S>> curve;  // chain input only
    std::optional<TRCurve<S>> tr;

    BuildOptions options() const {
        BuildOptions o;
        o.gauge = spec.gauge ? spec.gauge : file.gauge;
        o.param = ring.param;
        return o;
    }
    std::string gauge_label() const { return curve ? gauge_name(curve->gauge) : "raw curve"; }
    const ChainModel& model() const {
        if (!file.model) throw SchemaError("'" + spec.command + "' needs a chain model, not a raw curve");
        return *file.model;
    }
};

template <class S>
Json curve_section(Context<S>& ctx) {
    Json out;
    const auto& tr = *ctx.tr;
    out["curve"] = {{"x", encode_mero(tr.x())}, {"y", encode_mero(tr.y())}};
    Json bp = Json::array();
    for (const auto& b : tr.branch_locations()) bp.push_back(encode_scalar(b));
    out["branch_points"] = bp;
    if (!ctx.curve) return out;
    const auto& c = *ctx.curve;
    Json xs = Json::array();
    for (const auto& f : c.x) xs.push_back(encode_mero(f));
    Json zeta = Json::array();
    for (const auto& z : c.zeta) zeta.push_back(encode_scalar(z));
    out["parametrization"] = {{"x", xs}, {"zeta", zeta}};
    auto rep = validate_moduli(c);
    Json entries = Json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"name", e.name},
                           {"expected", encode_scalar(e.expected)},
                           {"actual", encode_scalar(e.actual)},
                           {"pass", e.pass}});
    out["moduli"] = {{"pass", rep.all_pass()}, {"entries", entries}};
    if constexpr (Ring<S>::kind != RingKind::series) {
        try {
            out["equation"] = compute_E0(c).str("x1", "x2");
        } catch (const ChainError& e) {
            out["equation"] = nullptr;
            out["equation_error"] = e.what();
        }
    }
    return out;
}

template <class S>
Json correlators_section(Context<S>& ctx) {
    const RunSpec& spec = ctx.spec;
    CorrelatorTable<S> table(*ctx.tr, spec.gmax, spec.nmax);
    Json list = Json::array();
    for (int g = 0; g <= spec.gmax; ++g)
        for (int n = 1; n <= spec.nmax; ++n) {
            if (2 * g - 2 + n <= 0) continue;
            const auto& w = table.omega(g, n);
            Json e = {{"g", g}, {"n", n}, {"terms", w.terms.size()}, {"max_order", w.max_order()}};
            if (spec.terms) {
                Json ts = Json::array();
                for (const auto& [k, c] : w.terms) ts.push_back({{"poles", encode_key(k)}, {"coeff", encode_scalar(c)}});
                e["pole_terms"] = ts;
            }
            list.push_back(e);
        }
    Json reports = Json::array();
    for (const auto& r : table.reports()) reports.push_back(encode_report(r));
    Json moments = Json::array();
    std::optional<Poly<S>> vp;
    if (ctx.curve) vp = ctx.curve->scalars.vprime(1);
    for (const auto& m : spec.moments) {
        if (m.g > spec.gmax || static_cast<int>(m.powers.size()) > spec.nmax)
            throw SchemaError("moment request outside gmax/nmax");
        S v = moment(table, m.g, m.powers, vp ? &*vp : nullptr);
        moments.push_back({{"g", m.g}, {"powers", m.powers}, {"value", encode_scalar(v)}});
    }
    Json bp = Json::array();
    for (const auto& b : table.branch_locations()) bp.push_back(encode_scalar(b));
    return {{"branch_points", bp}, {"table_order", table.order()}, {"omega", list}, {"reports", reports},
            {"moments", moments}};
}

template <class S>
Json free_energy_section(Context<S>& ctx) {
    if (ctx.spec.gmax < 2) throw SchemaError("free-energy needs gmax >= 2");
    CorrelatorTable<S> table(*ctx.tr, ctx.spec.gmax, 1);
    Json list = Json::array();
    for (int g = 2; g <= ctx.spec.gmax; ++g) list.push_back({{"g", g}, {"F", encode_scalar(free_energy(table, g))}});
    return {{"free_energies", list}};
}

template <class S>
Json derive_section(Context<S>& ctx) {
    const auto& c = *ctx.curve;
    (void)ctx.model();
    if (ctx.spec.gmax < 2) throw SchemaError("derive needs gmax >= 2");
    CorrelatorTable<S> table(*ctx.tr, ctx.spec.gmax, 2);
    auto branch = table.branch_locations();
    auto names = ctx.spec.params.empty() ? default_params(ctx.model()) : ctx.spec.params;
    Json list = Json::array();
    for (const auto& name : names) {
        auto p = parse_variation(name);
        auto f = variation_functional(c, branch, p);
        Json tab = Json::array();
        for (size_t b = 0; b < branch.size(); ++b)
            for (int k = 2; k <= 6; ++k)
                tab.push_back({{"branch", b}, {"order", k}, {"value", encode_scalar(f(static_cast<int>(b), k))}});
        Json dF = Json::array();
        for (int g = 2; g <= ctx.spec.gmax; ++g)
            dF.push_back({{"g", g}, {"dF", encode_scalar(vary_free_energy(table, g, f))}});
        list.push_back({{"param", name}, {"functional", tab}, {"free_energy_derivatives", dF}});
    }
    return {{"variations", list}};
}

template <class S>
bool same(const S& a, const S& b, double tol) {
    if constexpr (Ring<S>::exact) {
        (void)tol;
        return a == b;
    } else {
        return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
    }
}

template <class S>
Json check_section(Context<S>& ctx) {
    const RunSpec& spec = ctx.spec;
    Json checks = Json::array();
    bool all = true;
    auto add = [&](Json c) {
        all = all && (c.contains("skipped") || c["pass"].get<bool>());
        checks.push_back(std::move(c));
    };

    if (ctx.curve) {
        auto rep = validate_moduli(*ctx.curve);
        Json failed = Json::array();
        for (const auto& e : rep.entries)
            if (!e.pass) failed.push_back(e.name);
        add({{"name", "moduli"}, {"pass", rep.all_pass()}, {"failed", failed}});
    }

    CorrelatorTable<S> table(*ctx.tr, spec.gmax, std::max(spec.nmax, 1));
    for (int g = 0; g <= spec.gmax; ++g)
        for (int n = 1; n <= spec.nmax; ++n)
            if (2 * g - 2 + n > 0) table.omega(g, n);
    bool inv = true;
    Json reps = Json::array();
    for (const auto& r : table.reports()) {
        inv = inv && report_ok(r);
        reps.push_back(encode_report(r));
    }
    add({{"name", "correlator_invariants"}, {"pass", inv}, {"reports", reps}});

    // sheet sums need the float ring
    if (spec.check_sheets && spec.gmax >= 1) {
        std::optional<TRCurve<Floating>> fc;
        if (ctx.file.model) fc = build_curve<Floating>(ctx.model(), BuildOptions{ctx.options().gauge, {}, 60}).tr_curve();
        else fc = decode_raw_curve<Floating>(ctx.file.raw_curve);
        CorrelatorTable<Floating> ft(*fc, spec.gmax, 1);
        auto xs = sheet_samples(*fc);
        bool ok = true;
        Json samples = Json::array();
        for (int h = 1; h <= spec.gmax; ++h)
            for (const auto& s : sheet_sum_check(ft, h, xs, spec.tol)) {
                ok = ok && s.pass;
                samples.push_back({{"h", h}, {"x", s.x}, {"sheets", s.preimages.size()},
                                   {"abs_sum", std::abs(s.sum)}, {"scale", s.scale}, {"pass", s.pass}});
            }
        add({{"name", "sheet_sums"}, {"pass", ok}, {"tolerance", spec.tol}, {"samples", samples}});
    }

    if (spec.check_variations && spec.gmax >= 2) {
        if (!ctx.file.model) {
            add({{"name", "variations"}, {"skipped", "raw curve has no model parameters"}});
        } else {
            const ChainModel& m = ctx.model();
            BuildOptions fo{ctx.options().gauge, {}, 60};
            auto fcurve = build_curve<Floating>(m, fo);
            CorrelatorTable<Floating> ft(fcurve.tr_curve(), 2, 2);
            auto branch = ft.branch_locations();
            auto names = spec.params.empty() ? default_params(m) : spec.params;
            bool ok = true;
            Json rows = Json::array();
            const Rational h = Rational::from_double(spec.fd_step);
            for (const auto& name : names) {
                auto p = parse_variation(name);
                double res = vary_free_energy(ft, 2, variation_functional(fcurve, branch, p)).real();
                double fd = (free_energy_float(bumped(m, p, h), 2, fo) - free_energy_float(bumped(m, p, -h), 2, fo)) /
                            (2 * spec.fd_step);
                // the absolute floor is the round-off of the difference quotient
                bool pass = std::abs(res - fd) <= spec.fd_tol * std::abs(fd) + 1e-9;
                ok = ok && pass;
                rows.push_back({{"param", name}, {"residue", res}, {"finite_difference", fd}, {"pass", pass}});
            }
            add({{"name", "variations"}, {"pass", ok}, {"step", spec.fd_step}, {"tolerance", spec.fd_tol},
                 {"rows", rows}});
        }
    }

    if (spec.check_symplectic && spec.gmax >= 2) {
        if (!ctx.curve || ctx.curve->model.n < 2) {
            add({{"name", "symplectic"}, {"skipped", "needs a chain with n >= 2"}});
        } else {
            CorrelatorTable<S> swapped(ctx.curve->swapped_curve(), spec.gmax, 1);
            bool ok = true;
            Json rows = Json::array();
            for (int g = 2; g <= spec.gmax; ++g) {
                S a = free_energy(table, g), b = free_energy(swapped, g);
                bool pass = same(a, b, spec.tol);
                ok = ok && pass;
                rows.push_back({{"g", g}, {"F", encode_scalar(a)}, {"F_swapped", encode_scalar(b)}, {"pass", pass}});
            }
            add({{"name", "symplectic"}, {"pass", ok}, {"rows", rows}});
        }
    }
    return {{"pass", all}, {"checks", checks}};
}

template <class S>
Json run_ring(const RunSpec& spec, const ModelFile& file, const RingSpec& ring) {
    Context<S> ctx{spec, file, ring, std::nullopt, std::nullopt};
    if (file.model) {
        ctx.curve = build_curve<S>(*file.model, ctx.options());
        ctx.tr = ctx.curve->tr_curve();
    } else {
        ctx.tr = decode_raw_curve<S>(file.raw_curve);
    }
    Json doc;
    doc["command"] = spec.command;
    doc["ring"] = ring.str();
    doc["conventions"] = conventions(ctx.gauge_label());
    if (file.model) doc["model"] = model_to_json(*file.model);
    doc["gmax"] = spec.gmax;
    doc["nmax"] = spec.nmax;
    Json body;
    if (spec.command == "curve") body = curve_section(ctx);
    else if (spec.command == "correlators") body = correlators_section(ctx);
    else if (spec.command == "free-energy") body = free_energy_section(ctx);
    else if (spec.command == "derive") body = derive_section(ctx);
    else if (spec.command == "check") body = check_section(ctx);
    else throw SchemaError("unknown command '" + spec.command + "'");
    for (auto& [k, v] : body.items()) doc[k] = v;
    return doc;
}

}  // namespace

Json run_document(const RunSpec& spec, const ModelFile& file) {
    if (spec.gmax < 0 || spec.gmax > 5) throw SchemaError("gmax must be in 0..5");
    if (spec.nmax < 1 || spec.nmax > 4) throw SchemaError("nmax must be in 1..4");
    RingSpec ring = spec.ring ? *spec.ring : (file.ring ? *file.ring : parse_ring("float"));
    if (ring.kind == RingSpec::Kind::series && !file.model && !ring.param)
        throw SchemaError("series ring needs a parameter");
    switch (ring.kind) {
        case RingSpec::Kind::rational: return run_ring<Rational>(spec, file, ring);
        case RingSpec::Kind::floating: return run_ring<Floating>(spec, file, ring);
        case RingSpec::Kind::series: return run_ring<CouplingSeries>(spec, file, ring);
    }
    throw SchemaError("unknown ring");
}

int run(const RunSpec& spec, std::ostream& err) {
    try {
        Json doc = run_document(spec, read_model_file(spec.model_path));
        std::string text = doc.dump(2) + "\n";
        if (spec.out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(spec.out_path);
            if (!out) throw ChainError("cannot write " + spec.out_path);
            out << text;
        }
        if (spec.command == "check" && !doc["pass"].get<bool>()) {
            err << "check failed: see the report\n";
            return static_cast<int>(ExitCode::check_failure);
        }
        return 0;
    } catch (const ChainError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::other);
    }
}

}  // namespace chaintr
