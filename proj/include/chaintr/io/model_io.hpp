#pragma once

#include "chaintr/curve/spectral_curve.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace chaintr {

using Json = nlohmann::ordered_json;

// Scalar ring of a run: "rational", "float" or "series:<param>:<order>".
struct RingSpec {
    enum class Kind { rational, floating, series };
    Kind kind = Kind::rational;
    std::optional<SeriesParam> param;  // series only
    std::string str() const;
};

RingSpec parse_ring(const std::string& s);

// A model file: either a chain model or, under the key "curve", a raw pair
// {"x": mero, "y": mero} read directly as the recursion's curve.
struct ModelFile {
    std::optional<ChainModel> model;
    Json raw_curve;  // null unless given
    std::optional<RingSpec> ring;
    std::optional<Gauge> gauge;
};

ModelFile parse_model_file(const Json& doc);
ModelFile read_model_file(const std::string& path);

Json model_to_json(const ChainModel& m);

// Scalars: rational "p/q"; float a number or [re, im]; series
// {"coeffs": [...], "order": k}. Decoding accepts the same forms, and
// rational strings or numbers for every ring.
Json encode_scalar(const Rational& a);
Json encode_scalar(const Floating& a);
Json encode_scalar(const CouplingSeries& a);

template <class S>
S decode_scalar(const Json& j);
template <>
Rational decode_scalar<Rational>(const Json& j);
template <>
Floating decode_scalar<Floating>(const Json& j);
template <>
CouplingSeries decode_scalar<CouplingSeries>(const Json& j);

// {"poly": [c0, c1, ...], "poles": [{"at": a, "coeffs": [c1, c2, ...]}]},
// coeffs[k-1] multiplying 1/(z - a)^k.
template <class S>
Json encode_mero(const MeroFn<S>& f);

template <class S>
MeroFn<S> decode_mero(const Json& j);

template <class S>
TRCurve<S> decode_raw_curve(const Json& j);

}  // namespace chaintr
