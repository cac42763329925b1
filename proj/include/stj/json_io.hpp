// JSON encoding of library objects. Output is deterministic: keys sorted,
// doubles rounded to 15 significant digits, complex numbers as [re, im],
// matrices as {rows, cols, data} with row-major data.
#pragma once

#include "stj/solver.hpp"

#include "json.hpp"

#include <cstdio>

namespace stj::io {

using json = nlohmann::json;

// Malformed JSON input; distinct from numerical precondition failures.
class ParseError : public Error {
public:
    using Error::Error;
};

inline double r15(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

inline json num(double x) {
    if (!std::isfinite(x)) return json(std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
    return json(r15(x));
}

inline json to_json(cd z) { return json::array({num(z.real()), num(z.imag())}); }

inline json to_json(const CMat& A) {
    json data = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) data.push_back(to_json(A(i, j)));
    return {{"rows", A.rows()}, {"cols", A.cols()}, {"data", data}};
}

inline json to_json(const MatrixPolynomial& p) {
    json c = json::array();
    for (const auto& x : p.coeffs()) c.push_back(to_json(x));
    return {{"size", p.rows()}, {"coeffs", c}};
}

inline json to_json(const MomentSequence& s) {
    json arr = json::array();
    for (const auto& x : s.s) arr.push_back(to_json(x));
    return {{"alpha", num(s.alpha)}, {"q", s.q()}, {"s", arr}};
}

inline json to_json(const DiscreteMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms) atoms.push_back({{"x", num(a.x)}, {"w", to_json(a.w)}});
    return {{"alpha", num(mu.alpha)}, {"atoms", atoms}};
}

inline json to_json(const ClassReport& r) {
    return {{"Hgg", r.Hgg}, {"Kgg", r.Kgg}, {"Kgt", r.Kgt}, {"D", r.D}, {"Kggd", r.Kggd},
            {"Kgge_candidate", to_string(r.Kgge_candidate)}, {"rank_top", r.rank_top}};
}

inline json to_json(const TransformTrace& t) {
    json stages = json::array();
    for (const auto& st : t.stages) {
        json arr = json::array();
        for (const auto& x : st.s) arr.push_back(to_json(x));
        stages.push_back(arr);
    }
    json diag = json::array();
    for (const auto& d : t.diagonal) diag.push_back(to_json(d));
    return {{"input", to_json(t.input)}, {"stages", stages}, {"diagonal", diag}};
}

inline json polynomial_with_blocks(const MatrixPolynomial& P) {
    json j = to_json(P);
    const auto b = ResolventBlocks::of(P);
    j["blocks"] = {{"nw", to_json(b.nw)}, {"ne", to_json(b.ne)}, {"sw", to_json(b.sw)}, {"se", to_json(b.se)}};
    return j;
}

// Fractions as {num, den}; pole sums are converted first.
inline json to_json(const RationalMatFun& f) {
    const RationalMatFun g = f.to_fraction();
    return {{"num", to_json(g.num())}, {"den", to_json(g.den())}};
}

inline json to_json(const VerificationReport& r) {
    json errs = json::array();
    for (double e : r.rel_errors) errs.push_back(num(e));
    return {{"mode", to_string(r.mode)},
            {"passed", r.passed},
            {"relative_errors", errs},
            {"top_lambda_min", num(r.top_lambda_min)},
            {"extraction_residual", num(r.extraction_residual)},
            {"top_difference", to_json(r.top_difference)},
            {"extracted", to_json(r.extracted)}};
}

inline json samples(const RationalMatFun& F, const std::vector<cd>& grid, double lft_tol) {
    json arr = json::array();
    for (cd z : grid) {
        json entry = {{"z", to_json(z)}};
        try {
            entry["F"] = to_json(F(z, lft_tol));
        } catch (const DomainError&) {
            entry["F"] = nullptr;
        }
        arr.push_back(entry);
    }
    return arr;
}

// ---- parsing ----

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
    return j.at(key);
}

inline double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

inline cd complex_entry(const json& j, const std::string& where) {
    if (j.is_number()) return cd(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cd(j[0].get<double>(), j[1].get<double>());
    throw ParseError(where + ": expected a number or [re, im]");
}

}  // namespace detail

// {rows, cols, data} with row-major data, or a nested array of rows.
inline CMat matrix_from_json(const json& j, const std::string& where = "matrix") {
    if (j.is_array()) {
        const Eigen::Index r = static_cast<Eigen::Index>(j.size());
        if (r == 0) throw ParseError(where + ": empty matrix");
        if (!j[0].is_array()) throw ParseError(where + ": nested rows expected");
        const Eigen::Index c = static_cast<Eigen::Index>(j[0].size());
        CMat A(r, c);
        for (Eigen::Index i = 0; i < r; ++i) {
            if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != c)
                throw ParseError(where + ": ragged rows");
            for (Eigen::Index k = 0; k < c; ++k) A(i, k) = detail::complex_entry(j[i][k], where);
        }
        return A;
    }
    const auto rows = detail::field(j, "rows", where), cols = detail::field(j, "cols", where);
    const auto& data = detail::field(j, "data", where);
    if (!rows.is_number_integer() || !cols.is_number_integer()) throw ParseError(where + ": rows/cols must be integers");
    const Eigen::Index r = rows.get<Eigen::Index>(), c = cols.get<Eigen::Index>();
    if (r < 0 || c < 0 || !data.is_array() || static_cast<Eigen::Index>(data.size()) != r * c)
        throw ParseError(where + ": data must hold rows*cols entries");
    CMat A(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index k = 0; k < c; ++k) A(i, k) = detail::complex_entry(data[i * c + k], where);
    return A;
}

inline MatrixPolynomial polynomial_from_json(const json& j, const std::string& where = "polynomial") {
    const auto& cs = detail::field(j, "coeffs", where);
    if (!cs.is_array() || cs.empty()) throw ParseError(where + ": coeffs must be a nonempty array");
    std::vector<CMat> c;
    for (std::size_t k = 0; k < cs.size(); ++k) c.push_back(matrix_from_json(cs[k], where + ".coeffs"));
    try {
        return MatrixPolynomial(c);
    } catch (const PreconditionError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline MomentSequence sequence_from_json(const json& j, const ToleranceConfig& cfg = {}) {
    const double alpha = detail::number(detail::field(j, "alpha", "sequence"), "sequence.alpha");
    const auto& arr = detail::field(j, "s", "sequence");
    if (!arr.is_array() || arr.empty()) throw ParseError("sequence.s must be a nonempty array");
    std::vector<CMat> s;
    for (const auto& x : arr) s.push_back(matrix_from_json(x, "sequence.s"));
    if (j.contains("q") && j["q"].is_number_integer() && j["q"].get<Eigen::Index>() != s[0].rows())
        throw ParseError("sequence.q does not match the matrix size");
    return MomentSequence(alpha, s, cfg.herm_tol);
}

inline DiscreteMeasure measure_from_json(const json& j, const ToleranceConfig& cfg = {}) {
    const double alpha = detail::number(detail::field(j, "alpha", "measure"), "measure.alpha");
    const auto& arr = detail::field(j, "atoms", "measure");
    if (!arr.is_array()) throw ParseError("measure.atoms must be an array");
    std::vector<Atom> atoms;
    for (const auto& a : arr)
        atoms.push_back({detail::number(detail::field(a, "x", "atom"), "atom.x"),
                         matrix_from_json(detail::field(a, "w", "atom"), "atom.w")});
    Eigen::Index q = 0;
    if (j.contains("q") && j["q"].is_number_integer()) q = j["q"].get<Eigen::Index>();
    return DiscreteMeasure(alpha, atoms, q, cfg.herm_tol);
}

inline RationalMatFun function_from_json(const json& j, const ToleranceConfig& cfg = {}) {
    if (j.is_object() && j.contains("measure")) return stieltjes_transform(measure_from_json(j["measure"], cfg));
    if (j.is_object() && j.contains("constant")) return RationalMatFun::constant(matrix_from_json(j["constant"]));
    const auto n = polynomial_from_json(detail::field(j, "num", "function"), "function.num");
    const auto d = polynomial_from_json(detail::field(j, "den", "function"), "function.den");
    try {
        return RationalMatFun::fraction(n, d);
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("function: ") + e.what());
    }
}

// Pair JSON {alpha, phi, psi}; {measure} or {function} as shorthand for (f, I).
inline StieltjesPair pair_from_json(const json& j, double alpha_default, const ToleranceConfig& cfg = {},
                                    const std::vector<cd>& grid = {}) {
    const double alpha = j.contains("alpha") ? detail::number(j["alpha"], "pair.alpha") : alpha_default;
    if (j.contains("measure") || j.contains("function")) {
        const RationalMatFun f = function_from_json(j.contains("function") ? j["function"] : j, cfg);
        auto p = pair_from_function(f, alpha);
        if (!grid.empty()) p.grid = grid;
        return p;
    }
    const auto phi = function_from_json(detail::field(j, "phi", "pair"), cfg);
    const auto psi = function_from_json(detail::field(j, "psi", "pair"), cfg);
    return StieltjesPair(phi, psi, alpha, grid);
}

inline json to_json(const StieltjesPair& p) {
    return {{"alpha", num(p.alpha)}, {"phi", to_json(p.phi)}, {"psi", to_json(p.psi)}};
}

inline Mode mode_from_string(const std::string& s) {
    if (s == "leq") return Mode::Leq;
    if (s == "eq") return Mode::Eq;
    throw ParseError("mode must be \"leq\" or \"eq\"");
}

inline json parse_text(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline std::string dump(const json& j) { return j.dump(2); }

}  // namespace stj::io
