#ifndef MLRHO_JSON_IO_HPP
#define MLRHO_JSON_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlrho/inverse.hpp"
#include "mlrho/spectral.hpp"

// JSON document (de)serialization for domains, fields, forward problems and
// inverse problems/results. Schemas live in schemas/ at the repo root.

namespace mlrho::io {

using nlohmann::json;

class schema_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& require(const json& j, const char* key) {
    if (!j.contains(key))
        throw schema_error(std::string("missing required key \"") + key + "\"");
    return j.at(key);
}

inline double require_number(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number())
        throw schema_error(std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

inline std::vector<double> require_array(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_array() || v.empty())
        throw schema_error(std::string("key \"") + key +
                           "\" must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            throw schema_error(std::string("key \"") + key +
                               "\" must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace detail

/// Domain document:
///   {"kind": "interval", "length": L, "n_modes": N}
///   {"kind": "rectangle", "lx": Lx, "ly": Ly, "n_modes": N}
///   {"kind": "custom", "eigenvalues": [...],
///    "mode_values": [...v_k at the observation point...], "sup_bound": s}
inline SpectralDomain parse_domain(const json& j) {
    const json& kind = detail::require(j, "kind");
    if (!kind.is_string()) throw schema_error("\"kind\" must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "interval") {
        const int n = static_cast<int>(detail::require_number(j, "n_modes"));
        return SpectralDomain::interval(detail::require_number(j, "length"), n);
    }
    if (k == "rectangle") {
        const int n = static_cast<int>(detail::require_number(j, "n_modes"));
        return SpectralDomain::rectangle(detail::require_number(j, "lx"),
                                         detail::require_number(j, "ly"), n);
    }
    if (k == "custom") {
        auto eig = detail::require_array(j, "eigenvalues");
        auto vals = detail::require_array(j, "mode_values");
        if (vals.size() != eig.size())
            throw schema_error("\"mode_values\" must match \"eigenvalues\" in length");
        const double sup = j.contains("sup_bound")
                               ? detail::require_number(j, "sup_bound")
                               : 1.0;
        return SpectralDomain::custom(
            std::move(eig),
            [vals](int mode, Point) { return vals.at(mode - 1); }, sup);
    }
    throw schema_error("\"kind\" must be one of interval|rectangle|custom");
}

/// Field document: {"coefficients": [...]}
inline InitialField parse_field(const json& j) {
    InitialField f;
    f.coefficients = detail::require_array(j, "coefficients");
    return f;
}

inline Point parse_point(const json& j) {
    Point p;
    p.x = detail::require_number(j, "x0");
    if (j.contains("y0")) p.y = detail::require_number(j, "y0");
    return p;
}

inline PointObservation parse_point_observation(const json& j) {
    PointObservation obs;
    obs.x0 = parse_point(j);
    obs.t0 = detail::require_number(j, "t0");
    obs.d0 = detail::require_number(j, "d0");
    return obs;
}

inline PskhuProblem parse_pskhu(const json& j) {
    PskhuProblem p;
    p.phi = detail::require_number(j, "phi");
    p.lambda = detail::require_number(j, "lambda");
    p.x0 = detail::require_number(j, "x0");
    p.u0 = detail::require_number(j, "u0");
    return p;
}

inline const char* status_name(InverseStatus s) {
    switch (s) {
        case InverseStatus::Unique: return "Unique";
        case InverseStatus::NoSolutionBelowRange: return "NoSolutionBelowRange";
        case InverseStatus::NoSolutionAboveRange: return "NoSolutionAboveRange";
        case InverseStatus::HypothesesUnverified: return "HypothesesUnverified";
    }
    return "Unknown";
}

inline json result_to_json(const InverseResult& r) {
    return json{{"rho_hat", r.rho_hat},
                {"bracket_lo", r.bracket_lo},
                {"bracket_hi", r.bracket_hi},
                {"iterations", r.iterations},
                {"residual", r.residual},
                {"status", status_name(r.status)}};
}

inline json domain_to_json(const SpectralDomain& d) {
    json j;
    switch (d.kind()) {
        case DomainKind::Interval:
            j["kind"] = "interval";
            j["length"] = d.length();
            j["n_modes"] = d.mode_count();
            break;
        case DomainKind::Rectangle:
            j["kind"] = "rectangle";
            j["lx"] = d.length();
            j["ly"] = d.length_y();
            j["n_modes"] = d.mode_count();
            break;
        case DomainKind::Custom:
            j["kind"] = "custom";
            j["eigenvalues"] = d.eigenvalues();
            break;
    }
    return j;
}

} // namespace mlrho::io

#endif // MLRHO_JSON_IO_HPP
