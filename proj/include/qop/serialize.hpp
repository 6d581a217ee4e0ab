#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qop/bethe.hpp"
#include "qop/errors.hpp"
#include "qop/field.hpp"
#include "qop/functional.hpp"
#include "qop/poly.hpp"
#include "qop/qsolver.hpp"

namespace qop {

using nlohmann::json;

// Strict "n" or "n/d" rational parser (mpq_set_str alone is too lenient:
// it accepts whitespace, stray bases and a zero denominator).
inline mpq_class parse_rational(const std::string& text) {
    const auto bad = [&] {
        return std::invalid_argument("not a rational literal: '" + text + "'");
    };
    if (text.empty()) throw bad();
    std::size_t i = text[0] == '-' ? 1 : 0;
    bool seen_digit = false, seen_slash = false;
    for (; i < text.size(); ++i) {
        if (text[i] >= '0' && text[i] <= '9') {
            seen_digit = true;
        } else if (text[i] == '/' && !seen_slash && seen_digit) {
            seen_slash = true;
            seen_digit = false;  // require digits after the slash too
        } else {
            throw bad();
        }
    }
    if (!seen_digit) throw bad();
    mpq_class r;
    if (mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0) throw bad();
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    r.canonicalize();
    return r;
}

inline json json_of(const mpq_class& r) { return r.get_str(); }

inline json json_of(const CycloNum& x) {
    json coeffs = json::array();
    for (const auto& c : x.coords()) coeffs.push_back(c.get_str());
    return json{{"n", x.field().order()}, {"coeffs", std::move(coeffs)}};
}

inline CycloNum cyclo_from_json(const json& j) {
    const CycloField& F = CycloField::of(j.at("n").get<unsigned>());
    std::vector<mpq_class> coords;
    for (const auto& c : j.at("coeffs")) coords.push_back(parse_rational(c.get<std::string>()));
    if (coords.size() != F.degree())
        throw std::invalid_argument("coordinate vector does not match the field degree");
    return CycloNum(F, std::move(coords));
}

inline json json_of(const FieldPoly& P) {
    json coeffs = json::array();
    for (const auto& c : P.coeffs()) coeffs.push_back(json_of(c));
    return json{{"var", std::string(var_name(P.var()))},
                {"n", P.field().order()},
                {"coeffs", std::move(coeffs)}};
}

inline FieldPoly poly_from_json(const json& j) {
    const CycloField& F = CycloField::of(j.at("n").get<unsigned>());
    const std::string v = j.at("var").get<std::string>();
    if (v != "z" && v != "w") throw std::invalid_argument("unknown variable '" + v + "'");
    std::vector<CycloNum> coeffs;
    for (const auto& c : j.at("coeffs")) {
        coeffs.push_back(cyclo_from_json(c));
        if (&coeffs.back().field() != &F)
            throw std::invalid_argument("coefficient field does not match the polynomial");
    }
    return FieldPoly::from_coeffs(F, v == "z" ? Var::Z : Var::W, std::move(coeffs));
}

inline json json_of(const QPolynomial& Q) {
    json elem = json::array();
    for (const auto& e : Q.elementary) elem.push_back(e.get_str());
    return json{{"L", Q.params.L},
                {"N", Q.params.N},
                {"p", Q.params.p},
                {"elementary", std::move(elem)}};
}

inline QPolynomial q_polynomial_from_json(const json& j) {
    const ChainParams params(j.at("L").get<int>(), j.at("N").get<int>(),
                             j.at("p").get<int>());
    std::vector<mpq_class> elementary;
    for (const auto& e : j.at("elementary"))
        elementary.push_back(parse_rational(e.get<std::string>()));
    return make_q_polynomial(params, std::move(elementary));
}

inline json json_of(const BetheRoots& roots, const BaeReport* bae = nullptr) {
    json arr = json::array();
    for (std::size_t k = 0; k < roots.z.size(); ++k) {
        json row{{"re", roots.z[k].real()},
                 {"im", roots.z[k].imag()},
                 {"u_re", roots.u[k].real()},
                 {"u_im", roots.u[k].imag()}};
        if (bae) row["bae_residual"] = bae->residuals[k];
        arr.push_back(std::move(row));
    }
    json out{{"L", roots.params.L},
             {"N", roots.params.N},
             {"p", roots.params.p},
             {"backward_error", roots.backward_error},
             {"roots", std::move(arr)}};
    if (bae) out["max_bae_residual"] = bae->max_residual;
    return out;
}

inline json json_of(const IdentityResult& r) {
    return json{{"identity", r.name},
                {"status", r.holds ? "zero" : "nonzero"},
                {"residual_degree", r.residual_degree},
                {"residual_height_bits", r.residual_height_bits}};
}

inline json json_of(const FunctionalReport& report) {
    json arr = json::array();
    for (const auto& r : report.results) arr.push_back(json_of(r));
    return arr;
}

inline std::string roots_csv_header() {
    return "L,N,p,root_index,re,im,backward_error,bae_residual";
}

inline std::string roots_csv_rows(const BetheRoots& roots, const BaeReport& bae) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t k = 0; k < roots.z.size(); ++k)
        out << roots.params.L << ',' << roots.params.N << ',' << roots.params.p << ','
            << k << ',' << roots.z[k].real() << ',' << roots.z[k].imag() << ','
            << roots.backward_error << ',' << bae.residuals[k] << '\n';
    return out.str();
}

}  // namespace qop
