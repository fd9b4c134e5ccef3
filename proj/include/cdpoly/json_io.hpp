#pragma once

#include <bit>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/polynomial.hpp"

namespace cdpoly {

using json = nlohmann::json;

/// CDNumber textual form: JSON array of 2^v reals; the level is inferred
/// from the length.
inline CDNumber cd_from_json(const json& j, const std::string& where = "value") {
    if (!j.is_array()) throw SchemaError(where + ": expected a JSON array of reals");
    std::vector<double> c;
    c.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw SchemaError(where + "[" + std::to_string(i) + "]: expected a number");
        c.push_back(j[i].get<double>());
    }
    if (c.empty() || !std::has_single_bit(c.size()))
        throw SchemaError(where + ": length " + std::to_string(c.size()) +
                          " is not a power of two");
    const unsigned level = static_cast<unsigned>(std::bit_width(c.size()) - 1);
    return CDNumber(level, std::move(c));
}

inline json cd_to_json(const CDNumber& z) {
    json a = json::array();
    for (std::size_t j = 0; j < z.dim(); ++j) a.push_back(z[j]);
    return a;
}

inline CDNumber parse_cd_number(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("value: ") + e.what());
    }
    return cd_from_json(j);
}

namespace detail {

inline MulTree tree_from_json(const json& j, const std::string& where) {
    if (j.is_number_unsigned() || j.is_number_integer()) {
        if (j.get<long long>() < 0) throw SchemaError(where + ": leaf index must be >= 0");
        return MulTree::leaf(j.get<unsigned>());
    }
    if (j.is_array() && j.size() == 2) {
        MulTree l = tree_from_json(j[0], where + "[0]");
        MulTree r = tree_from_json(j[1], where + "[1]");
        return MulTree::node(std::move(l), std::move(r));
    }
    throw SchemaError(where + ": order node must be a leaf index or a two-element array");
}

inline json tree_to_json(const MulTree& t) {
    if (t.is_leaf()) return json(t.leaf_index());
    return json::array({tree_to_json(t.left()), tree_to_json(t.right())});
}

}  // namespace detail

/// Canonical polynomial schema:
/// { "level": v,
///   "terms": [ { "coeffs": [[2^v reals], ...], "exps": [k_1, ..., k_m],
///                "order": "left" | nested-array tree } ... ] }
inline Polynomial polynomial_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("polynomial: expected a JSON object");
    if (!j.contains("level") || !j["level"].is_number_unsigned())
        throw SchemaError("polynomial.level: expected a nonnegative integer");
    const unsigned level = j["level"].get<unsigned>();
    if (level > kMaxLevel)
        throw SchemaError("polynomial.level: " + std::to_string(level) + " exceeds maximum " +
                          std::to_string(kMaxLevel));
    if (!j.contains("terms") || !j["terms"].is_array())
        throw SchemaError("polynomial.terms: expected an array");

    std::vector<Term> terms;
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
        const std::string where = "polynomial.terms[" + std::to_string(i) + "]";
        const json& tj = j["terms"][i];
        if (!tj.is_object()) throw SchemaError(where + ": expected an object");
        if (!tj.contains("coeffs") || !tj["coeffs"].is_array())
            throw SchemaError(where + ".coeffs: expected an array of coefficient arrays");
        if (!tj.contains("exps") || !tj["exps"].is_array())
            throw SchemaError(where + ".exps: expected an array of naturals");

        Term t;
        for (std::size_t c = 0; c < tj["coeffs"].size(); ++c) {
            CDNumber a =
                cd_from_json(tj["coeffs"][c], where + ".coeffs[" + std::to_string(c) + "]");
            if (a.level() > level)
                throw SchemaError(where + ".coeffs[" + std::to_string(c) + "]: length " +
                                  std::to_string(a.dim()) + " exceeds 2^level = " +
                                  std::to_string(std::size_t{1} << level));
            t.coeffs.push_back(std::move(a));
        }
        for (std::size_t e = 0; e < tj["exps"].size(); ++e) {
            const json& ej = tj["exps"][e];
            if (!ej.is_number_integer() && !ej.is_number_unsigned())
                throw SchemaError(where + ".exps[" + std::to_string(e) + "]: expected an integer");
            if (ej.get<long long>() < 0)
                throw SchemaError(where + ".exps[" + std::to_string(e) + "]: must be >= 0");
            t.exps.push_back(ej.get<unsigned>());
        }
        if (tj.contains("order") && !(tj["order"].is_string() && tj["order"] == "left"))
            t.order = detail::tree_from_json(tj["order"], where + ".order");
        detail::validate_term(t, where);
        terms.push_back(std::move(t));
    }

    Polynomial p(level, std::move(terms));

    // Recognize a monic z^{n+1} + lower form structurally.
    const unsigned d = degree(p);
    if (d >= 1) {
        int leading = -1;
        bool unique = true;
        for (std::size_t i = 0; i < p.terms().size(); ++i)
            if (p.terms()[i].degree() == d) {
                if (leading >= 0) unique = false;
                leading = static_cast<int>(i);
            }
        if (unique && leading >= 0) {
            const Term& t = p.terms()[static_cast<std::size_t>(leading)];
            if (t.coeffs.size() == 1 && t.exps[0] == d &&
                t.coeffs[0] == CDNumber::one(t.coeffs[0].level()))
                return Polynomial(p.level(), p.terms(), d);
        }
    }
    return p;
}

inline json polynomial_to_json(const Polynomial& p) {
    json out;
    out["level"] = p.level();
    out["terms"] = json::array();
    for (const auto& t : p.terms()) {
        json tj;
        tj["coeffs"] = json::array();
        for (const auto& c : t.coeffs) tj["coeffs"].push_back(cd_to_json(c.embedded(p.level())));
        tj["exps"] = t.exps;
        tj["order"] = t.order ? detail::tree_to_json(*t.order) : json("left");
        out["terms"].push_back(std::move(tj));
    }
    return out;
}

inline Polynomial parse_polynomial(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("polynomial: ") + e.what());
    }
    return polynomial_from_json(j);
}

inline std::string serialize_polynomial(const Polynomial& p, int indent = -1) {
    return polynomial_to_json(p).dump(indent);
}

/// Finite-group file: JSON list of coefficient arrays.
inline std::vector<CDNumber> group_elements_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("group: expected a JSON array of coefficient arrays");
    std::vector<CDNumber> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(cd_from_json(j[i], "group[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace cdpoly
