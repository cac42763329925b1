// Stieltjes pairs (phi, psi): grid verification, projective equivalence, the
// range class P(A), the embedding of low-rank pairs, and the decay subclass.
#pragma once

#include "stj/rational.hpp"

#include <numbers>

namespace stj {

// {alpha-1, alpha-2, alpha-5} followed by alpha + r e^{i theta}.
inline std::vector<cd> default_grid(double alpha, const std::vector<double>& radii = {0.5, 2.0, 10.0}) {
    std::vector<cd> g{cd(alpha - 1.0), cd(alpha - 2.0), cd(alpha - 5.0)};
    const double pi = std::numbers::pi;
    for (double r : radii)
        for (double th : {pi / 3.0, pi / 2.0, 2.0 * pi / 3.0, -pi / 2.0}) g.push_back(alpha + std::polar(r, th));
    return g;
}

// Default grid plus one more real point, so equivalence sees four points on (-inf, alpha).
inline std::vector<cd> equivalence_grid(double alpha, const std::vector<double>& radii = {0.5, 2.0, 10.0}) {
    auto g = default_grid(alpha, radii);
    g.push_back(cd(alpha - 0.5));
    return g;
}

struct StieltjesPair {
    RationalMatFun phi, psi;
    double alpha = 0.0;
    std::vector<cd> grid;

    StieltjesPair() = default;
    StieltjesPair(RationalMatFun f, RationalMatFun g, double a, std::vector<cd> pts = {})
        : phi(std::move(f)), psi(std::move(g)), alpha(a), grid(std::move(pts)) {
        if (phi.rows() != phi.cols() || psi.rows() != psi.cols() || phi.rows() != psi.rows())
            throw PreconditionError("pair: phi and psi must be square of one size");
        if (grid.empty()) grid = default_grid(alpha);
    }
    Eigen::Index q() const { return phi.rows(); }
    CMat stacked(cd z, double lft_tol = 1e-12) const { return vstack(phi(z, lft_tol), psi(z, lft_tol)); }
};

inline StieltjesPair pair_from_function(const RationalMatFun& f, double alpha) {
    if (f.rows() != f.cols()) throw PreconditionError("pair_from_function: f must be square");
    return StieltjesPair(f, RationalMatFun::constant(identity(f.rows())), alpha);
}

struct PairPointReport {
    cd z;
    bool evaluable = true;
    bool rank_ok = false;
    double kd1 = 0.0;       // normalized lambda_min, nonreal points only
    double kd2 = 0.0;
    double re_margin = 0.0; // normalized lambda_min of Re(psi^* phi), real points left of alpha
};

struct PairReport {
    std::vector<PairPointReport> points;
    bool rank_ok = true, kd1_ok = true, kd2_ok = true, re_ok = true;
    bool ok() const { return rank_ok && kd1_ok && kd2_ok && re_ok; }
};

inline PairReport verify_pair(const StieltjesPair& p, double tol, const ToleranceConfig& cfg = {}) {
    PairReport rep;
    const Eigen::Index q = p.q();
    for (cd z : p.grid) {
        PairPointReport pt;
        pt.z = z;
        CMat phi, psi;
        try {
            phi = p.phi(z, cfg.lft_tol);
            psi = p.psi(z, cfg.lft_tol);
        } catch (const DomainError&) {
            // A point of the exceptional discrete set; skipped.
            pt.evaluable = false;
            rep.points.push_back(pt);
            continue;
        }
        const CMat X = vstack(phi, psi);
        const double scale = std::max(1.0, std::pow(spectral_norm(X), 2));
        pt.rank_ok = numeric_rank(X / std::sqrt(scale), cfg.zero_tol) == q;
        rep.rank_ok = rep.rank_ok && pt.rank_ok;
        if (z.imag() != 0.0) {
            const double s2 = std::max(scale, std::pow(spectral_norm(vstack((z - p.alpha) * phi, psi)), 2));
            pt.kd1 = lambda_min(j_form(X) / (2.0 * z.imag())) / scale;
            pt.kd2 = lambda_min(j_form(vstack((z - p.alpha) * phi, psi)) / (2.0 * z.imag())) / s2;
            rep.kd1_ok = rep.kd1_ok && pt.kd1 >= -tol;
            rep.kd2_ok = rep.kd2_ok && pt.kd2 >= -tol;
        } else if (z.real() < p.alpha) {
            pt.re_margin = lambda_min(re_part(psi.adjoint() * phi)) / scale;
            rep.re_ok = rep.re_ok && pt.re_margin >= -tol;
        }
        rep.points.push_back(pt);
    }
    return rep;
}

inline bool in_class_P_of(const StieltjesPair& p, const CMat& A, double tol, const ToleranceConfig& cfg = {}) {
    for (cd z : p.grid) {
        CMat phi;
        try {
            phi = p.phi(z, cfg.lft_tol);
        } catch (const DomainError&) {
            continue;
        }
        if (!range_contains(A, phi, tol, cfg.pinv_rtol)) return false;
    }
    return true;
}

namespace detail {

inline CMat orth_columns(const CMat& X, double tol) {
    Eigen::JacobiSVD<CMat> svd(X, Eigen::ComputeThinU);
    const int r = numeric_rank(X, tol);
    return svd.matrixU().leftCols(r);
}

}  // namespace detail

// sin of the largest principal angle between the column spans, or -1 when a
// stack is rank deficient at z.
inline double span_distance(const CMat& X1, const CMat& X2, double rank_tol) {
    const Eigen::Index q = X1.cols();
    const CMat A = X1 / std::max(1e-300, spectral_norm(X1));
    const CMat B = X2 / std::max(1e-300, spectral_norm(X2));
    const CMat Q1 = detail::orth_columns(A, rank_tol), Q2 = detail::orth_columns(B, rank_tol);
    if (Q1.cols() != q || Q2.cols() != q) return -1.0;
    return spectral_norm(Q2 - Q1 * (Q1.adjoint() * Q2));
}

inline bool equivalent(const StieltjesPair& p1, const StieltjesPair& p2, double tol,
                       const ToleranceConfig& cfg = {}) {
    if (p1.q() != p2.q()) return false;
    int tested = 0;
    for (cd z : equivalence_grid(p1.alpha)) {
        CMat X1, X2;
        try {
            X1 = p1.stacked(z, cfg.lft_tol);
            X2 = p2.stacked(z, cfg.lft_tol);
        } catch (const DomainError&) {
            continue;
        }
        const double d = span_distance(X1, X2, cfg.zero_tol);
        if (d < 0.0) continue;
        ++tested;
        if (d > tol) return false;
    }
    return tested > 0;
}

// Projective polynomial form: phi = P D^{-1}, psi = Q D^{-1}.
struct PolyPair {
    MatrixPolynomial P, Q, D;
};

inline PolyPair poly_pair(const RationalMatFun& phi, const RationalMatFun& psi) {
    const RationalMatFun a = phi.to_fraction(), b = psi.to_fraction();
    const double scale = std::max(1.0, coeff_distance(a.den(), MatrixPolynomial::constant(zeros(a.rows(), a.rows()))));
    if (a.den().length() == b.den().length() && coeff_distance(a.den(), b.den()) <= 1e-14 * scale)
        return {a.num(), b.num(), a.den()};
    if (!a.den().is_scalar(1e-14) || !b.den().is_scalar(1e-14))
        throw PreconditionError("pair synthesis needs scalar or equal denominators");
    const auto da = a.den().scalar_coeffs(), db = b.den().scalar_coeffs();
    const Eigen::Index q = a.rows();
    return {a.num() * MatrixPolynomial::scalar(db, q), b.num() * MatrixPolynomial::scalar(da, q),
            MatrixPolynomial::scalar(scalar_poly_mul(da, db), q)};
}

inline StieltjesPair pair_from_poly(const PolyPair& pp, double alpha, std::vector<cd> grid = {}) {
    return StieltjesPair(RationalMatFun::fraction(pp.P, pp.D), RationalMatFun::fraction(pp.Q, pp.D), alpha,
                         std::move(grid));
}

namespace detail {

inline void check_embedding_basis(const CMat& U, const CMat& M, const ToleranceConfig& cfg) {
    if (U.rows() != M.rows()) throw PreconditionError("embedding: U and M row counts differ");
    const Eigen::Index r = U.cols();
    if (r < 1) throw PreconditionError("embedding: rank of M must be at least 1");
    if (fro(U.adjoint() * U - identity(r)) > cfg.range_tol * std::max<double>(1.0, double(r)))
        throw PreconditionError("embedding: U does not have orthonormal columns");
    if (numeric_rank(M, cfg.zero_tol) != r || !range_contains(U, M, cfg.range_tol, cfg.pinv_rtol))
        throw PreconditionError("embedding: U does not span ran M");
}

}  // namespace detail

// (U phi U^*, U psi U^* + Pi) with Pi the orthoprojector onto N(M^*). With
// phi = P D^{-1}, psi = Q D^{-1} and theta = U D U^* + Pi this is the
// polynomial pair (U P U^*, U Q U^* + Pi) theta^{-1}.
inline StieltjesPair gamma_U_embed(const RationalMatFun& phi, const RationalMatFun& psi, const CMat& U,
                                   const CMat& M, double alpha, const ToleranceConfig& cfg = {}) {
    detail::check_embedding_basis(U, M, cfg);
    const CMat Pi = identity(M.rows()) - U * U.adjoint();
    if (phi.has_fraction_form() && psi.has_fraction_form()) {
        const PolyPair pp = poly_pair(phi, psi);
        const MatrixPolynomial Pic = MatrixPolynomial::constant(Pi);
        const MatrixPolynomial th = U * pp.D * MatrixPolynomial::constant(CMat(U.adjoint())) + Pic;
        const MatrixPolynomial P = U * pp.P * MatrixPolynomial::constant(CMat(U.adjoint()));
        const MatrixPolynomial Q = U * pp.Q * MatrixPolynomial::constant(CMat(U.adjoint())) + Pic;
        return pair_from_poly({P, Q, th}, alpha);
    }
    const CMat Ua = U.adjoint();
    return StieltjesPair(phi.sandwich(U, Ua),
                         RationalMatFun::pointwise(M.rows(), M.rows(),
                                                   [psi, U, Ua, Pi](cd z) { return CMat(U * psi(z) * Ua + Pi); }),
                         alpha);
}

// Inverse of the embedding: B = G - iF, phi = U^* F B^{-1} U, psi = U^* G B^{-1} U.
inline StieltjesPair gamma_U_extract(const StieltjesPair& FG, const CMat& U, const CMat& M,
                                     const ToleranceConfig& cfg = {}) {
    detail::check_embedding_basis(U, M, cfg);
    bool invertible_somewhere = false;
    for (cd z : FG.grid) {
        try {
            const CMat B = FG.psi(z, cfg.lft_tol) - I_unit * FG.phi(z, cfg.lft_tol);
            if (sigma_ratio(B) >= cfg.lft_tol) invertible_somewhere = true;
        } catch (const DomainError&) {
        }
    }
    if (!invertible_somewhere)
        throw PreconditionError("embedding extraction: G - iF is singular on the whole grid");
    const CMat Ua = U.adjoint();
    const RationalMatFun F = FG.phi, G = FG.psi;
    const double lt = cfg.lft_tol;
    const Eigen::Index r = U.cols();
    auto phi = RationalMatFun::pointwise(r, r, [F, G, U, Ua, lt](cd z) {
        const CMat Fz = F(z, lt), Gz = G(z, lt);
        return CMat(Ua * right_divide(Fz, Gz - I_unit * Fz, lt, "embedding extraction") * U);
    });
    auto psi = RationalMatFun::pointwise(r, r, [F, G, U, Ua, lt](cd z) {
        const CMat Fz = F(z, lt), Gz = G(z, lt);
        return CMat(Ua * right_divide(Gz, Gz - I_unit * Fz, lt, "embedding extraction") * U);
    });
    return StieltjesPair(phi, psi, FG.alpha, FG.grid);
}

struct DiamondReport {
    std::vector<double> ladder{1e2, 1e3, 1e4, 1e5};
    std::vector<double> values;  // ||(phi psi^{-1})(iy)||
    bool monotone = false;
    bool small = false;
    bool in_diamond() const { return monotone && small; }
};

inline DiamondReport diamond_report(const StieltjesPair& p, const ToleranceConfig& cfg = {}) {
    DiamondReport rep;
    for (double y : rep.ladder) {
        const cd z(0.0, y);
        const CMat psi = p.psi(z, cfg.lft_tol);
        rep.values.push_back(spectral_norm(right_divide(p.phi(z, cfg.lft_tol), psi, cfg.lft_tol, "diamond ladder")));
    }
    rep.monotone = true;
    for (std::size_t k = 0; k + 1 < rep.values.size(); ++k)
        if (rep.values[k + 1] > rep.values[k] * (1.0 + 1e-9) + 1e-300) rep.monotone = false;
    rep.small = rep.values.back() <= cfg.decay_tol;
    return rep;
}

inline bool in_diamond(const StieltjesPair& p, const ToleranceConfig& cfg = {}) {
    return diamond_report(p, cfg).in_diamond();
}

}  // namespace stj
