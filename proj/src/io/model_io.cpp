#include "chaintr/io/model_io.hpp"

#include "chaintr/errors.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace chaintr {

namespace {

Rational read_rational(const Json& j, const std::string& what) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_number()) return Rational::parse(j.dump());
    } catch (const std::exception&) {
    }
    throw SchemaError(what + ": expected a rational as \"p/q\" or a number");
}

std::vector<Rational> read_rationals(const Json& j, const std::string& what) {
    if (!j.is_array()) throw SchemaError(what + ": expected an array");
    std::vector<Rational> out;
    for (const auto& e : j) out.push_back(read_rational(e, what));
    return out;
}

const Json& field(const Json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
    return *it;
}

}  // namespace

std::string RingSpec::str() const {
    switch (kind) {
        case Kind::rational: return "rational";
        case Kind::floating: return "float";
        case Kind::series: return "series:" + param->name + ":" + std::to_string(param->order);
    }
    return "";
}

RingSpec parse_ring(const std::string& s) {
    RingSpec r;
    if (s == "rational") return r;
    if (s == "float") {
        r.kind = RingSpec::Kind::floating;
        return r;
    }
    static const std::regex re(R"(series:([A-Za-z0-9_]+):([0-9]+))");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw SchemaError("ring must be rational, float or series:<param>:<order>");
    r.kind = RingSpec::Kind::series;
    r.param = parse_series_param(m[1].str(), std::stoi(m[2].str()));
    return r;
}

ModelFile parse_model_file(const Json& doc) {
    if (!doc.is_object()) throw SchemaError("model file must be a JSON object");
    ModelFile f;
    if (auto it = doc.find("ring"); it != doc.end()) {
        if (it->is_string()) f.ring = parse_ring(it->get<std::string>());
        else if (it->is_object() && it->contains("series")) {
            const auto& s = (*it)["series"];
            if (!s.contains("param") || !s.contains("order") || !s["param"].is_string() ||
                !s["order"].is_number_integer())
                throw SchemaError("ring.series needs a string param and an integer order");
            f.ring = RingSpec{RingSpec::Kind::series,
                              parse_series_param(s["param"].get<std::string>(), s["order"].get<int>())};
        } else
            throw SchemaError("ring must be \"rational\", \"float\" or {\"series\": {param, order}}");
    }
    if (auto it = doc.find("gauge"); it != doc.end()) {
        if (!it->is_string()) throw SchemaError("gauge must be a string");
        f.gauge = parse_gauge(it->get<std::string>());
    }
    if (auto it = doc.find("curve"); it != doc.end()) {
        if (!it->is_object() || !it->contains("x") || !it->contains("y"))
            throw SchemaError("curve needs \"x\" and \"y\"");
        f.raw_curve = *it;
        return f;
    }

    ChainModel m;
    const Json& n = field(doc, "n");
    if (!n.is_number_integer()) throw SchemaError("n must be an integer");
    m.n = n.get<int>();
    const Json& pots = field(doc, "potentials");
    if (!pots.is_array()) throw SchemaError("potentials must be an array of arrays");
    for (const auto& p : pots) m.potentials.push_back(read_rationals(p, "potentials"));
    if (auto it = doc.find("couplings"); it != doc.end()) m.couplings = read_rationals(*it, "couplings");
    if (auto it = doc.find("T"); it != doc.end()) m.T = read_rational(*it, "T");
    if (auto it = doc.find("external"); it != doc.end()) {
        if (!it->is_array()) throw SchemaError("external must be an array");
        for (const auto& e : *it) {
            if (!e.is_object()) throw SchemaError("external entries are {lambda, fraction}");
            m.external.push_back({read_rational(field(e, "lambda"), "lambda"),
                                  read_rational(field(e, "fraction"), "fraction")});
        }
    }
    m.validate();
    f.model = m;
    return f;
}

ModelFile read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    return parse_model_file(doc);
}

Json model_to_json(const ChainModel& m) {
    Json j;
    j["n"] = m.n;
    j["potentials"] = Json::array();
    for (const auto& p : m.potentials) {
        Json row = Json::array();
        for (const auto& g : p) row.push_back(g.str());
        j["potentials"].push_back(row);
    }
    j["couplings"] = Json::array();
    for (const auto& c : m.couplings) j["couplings"].push_back(c.str());
    j["T"] = m.T.str();
    j["external"] = Json::array();
    for (const auto& e : m.external) j["external"].push_back({{"lambda", e.lambda.str()}, {"fraction", e.fraction.str()}});
    return j;
}

Json encode_scalar(const Rational& a) { return a.str(); }

Json encode_scalar(const Floating& a) {
    // round-off imaginary parts of real results are dropped
    if (std::abs(a.imag()) <= 1e-13 * std::abs(a.real())) return a.real();
    return Json::array({a.real(), a.imag()});
}

Json encode_scalar(const CouplingSeries& a) {
    Json c = Json::array();
    for (const auto& x : a.coeffs()) c.push_back(x.str());
    Json j{{"coeffs", c}};
    if (a.prec() != CouplingSeries::kExact) j["order"] = a.prec();
    return j;
}

template <>
Rational decode_scalar<Rational>(const Json& j) {
    return read_rational(j, "scalar");
}

template <>
Floating decode_scalar<Floating>(const Json& j) {
    if (j.is_array()) {
        if (j.size() != 2 || !j[0].is_number() || !j[1].is_number()) throw SchemaError("complex scalar is [re, im]");
        return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_number()) return {j.get<double>(), 0.0};
    return {read_rational(j, "scalar").to_double(), 0.0};
}

template <>
CouplingSeries decode_scalar<CouplingSeries>(const Json& j) {
    if (j.is_object()) {
        auto c = read_rationals(field(j, "coeffs"), "series coefficients");
        int prec = CouplingSeries::kExact;
        if (auto it = j.find("order"); it != j.end()) {
            if (!it->is_number_integer()) throw SchemaError("series order must be an integer");
            prec = it->get<int>();
        }
        return CouplingSeries(std::move(c), prec);
    }
    return CouplingSeries(read_rational(j, "scalar"));
}

template <class S>
Json encode_mero(const MeroFn<S>& f) {
    Json poly = Json::array();
    for (const auto& c : f.poly.coeffs()) poly.push_back(encode_scalar(c));
    Json poles = Json::array();
    for (const auto& p : f.parts) {
        Json cs = Json::array();
        for (const auto& c : p.coeffs) cs.push_back(encode_scalar(c));
        poles.push_back({{"at", encode_scalar(p.at)}, {"coeffs", cs}});
    }
    return {{"poly", poly}, {"poles", poles}};
}

template <class S>
MeroFn<S> decode_mero(const Json& j) {
    if (!j.is_object()) throw SchemaError("function must be {\"poly\": [...], \"poles\": [...]}");
    MeroFn<S> f;
    std::vector<S> poly;
    if (auto it = j.find("poly"); it != j.end()) {
        if (!it->is_array()) throw SchemaError("poly must be an array");
        for (const auto& c : *it) poly.push_back(decode_scalar<S>(c));
    }
    f.poly = Poly<S>(std::move(poly));
    if (auto it = j.find("poles"); it != j.end()) {
        if (!it->is_array()) throw SchemaError("poles must be an array");
        for (const auto& p : *it) {
            PrincipalPart<S> part{decode_scalar<S>(field(p, "at")), {}};
            const Json& cs = field(p, "coeffs");
            if (!cs.is_array()) throw SchemaError("pole coeffs must be an array");
            for (const auto& c : cs) part.coeffs.push_back(decode_scalar<S>(c));
            f.parts.push_back(std::move(part));
        }
    }
    return f;
}

template <class S>
TRCurve<S> decode_raw_curve(const Json& j) {
    return TRCurve<S>(decode_mero<S>(field(j, "x")), decode_mero<S>(field(j, "y")));
}

#define CHAINTR_IO_INSTANTIATE(S)                          \
    template Json encode_mero(const MeroFn<S>&);           \
    template MeroFn<S> decode_mero(const Json&);           \
    template TRCurve<S> decode_raw_curve(const Json&);

CHAINTR_IO_INSTANTIATE(Rational)
CHAINTR_IO_INSTANTIATE(Floating)
CHAINTR_IO_INSTANTIATE(CouplingSeries)

}  // namespace chaintr
