// Solutions of the truncated Stieltjes moment problem: Schur-Stieltjes
// transforms of functions, case dispatch, synthesis from parameter pairs.
#pragma once

#include "stj/hankel.hpp"
#include "stj/lft.hpp"
#include "stj/measures.hpp"
#include "stj/pairs.hpp"
#include "stj/respoly.hpp"

namespace stj {

enum class CaseTag { NonDegenerate, CompletelyDegenerate, PartiallyDegenerate };

inline const char* to_string(CaseTag c) {
    switch (c) {
        case CaseTag::NonDegenerate: return "NonDegenerate";
        case CaseTag::CompletelyDegenerate: return "CompletelyDegenerate";
        default: return "PartiallyDegenerate";
    }
}

namespace detail {

inline std::vector<cd> nonreal(const std::vector<cd>& g) {
    std::vector<cd> out;
    for (cd z : g)
        if (z.imag() != 0.0) out.push_back(z);
    return out;
}

inline BlockGenerator generator_at(const MatrixPolynomial& P, cd z, Eigen::Index q) {
    return BlockGenerator::from_matrix(P(z), q);
}

}  // namespace detail

// F^{[+,alpha,A]}(z) = -A (I + (z-alpha)^{-1} F(z)^+ A). Requires
// ran F(z) in ran A and N(F(z)) in N(A) on the nonreal grid points.
inline RationalMatFun schur_stieltjes_transform(const RationalMatFun& F, const CMat& A, double alpha,
                                                const ToleranceConfig& cfg = {},
                                                const std::vector<cd>& grid = {}) {
    if (A.rows() != F.rows() || A.cols() != F.cols()) throw PreconditionError("transform: shape mismatch");
    for (cd z : detail::nonreal(grid.empty() ? default_grid(alpha) : grid)) {
        const CMat Fz = F(z, cfg.lft_tol);
        if (!range_contains(A, Fz, cfg.range_tol, cfg.pinv_rtol) || !null_contains(Fz, A, cfg.range_tol, cfg.pinv_rtol))
            throw PreconditionError("transform: range/null compatibility of F and A fails on the grid");
    }
    const double rt = cfg.pinv_rtol, lt = cfg.lft_tol;
    const Eigen::Index q = A.rows();
    return RationalMatFun::pointwise(q, q, [F, A, alpha, rt, lt](cd z) {
        return CMat(-A * (identity(A.rows()) + pinv(F(z, lt), rt) * A / (z - alpha)));
    });
}

// F^{[-,alpha,A]}(z) = -(z-alpha)^{-1} A (I + A^+ G(z))^+. Requires A PSD and
// ran G(z) in ran A on the nonreal grid points.
inline RationalMatFun inverse_schur_stieltjes_transform(const RationalMatFun& G, const CMat& A, double alpha,
                                                        const ToleranceConfig& cfg = {},
                                                        const std::vector<cd>& grid = {}) {
    if (A.rows() != G.rows() || A.cols() != G.cols()) throw PreconditionError("inverse transform: shape mismatch");
    if (!is_psd(HermMat(A, cfg.herm_tol).mat(), cfg.psd_tol))
        throw PreconditionError("inverse transform: A must be PSD");
    for (cd z : detail::nonreal(grid.empty() ? default_grid(alpha) : grid))
        if (!range_contains(A, G(z, cfg.lft_tol), cfg.range_tol, cfg.pinv_rtol))
            throw PreconditionError("inverse transform: ran G(z) is not contained in ran A");
    const double rt = cfg.pinv_rtol, lt = cfg.lft_tol;
    const Eigen::Index q = A.rows();
    return RationalMatFun::pointwise(q, q, [G, A, alpha, rt, lt](cd z) {
        const CMat Ap = pinv(A, rt);
        return CMat(-A * pinv(identity(A.rows()) + Ap * G(z, lt), rt) / (z - alpha));
    });
}

// Max distance between the direct transform formulas and their linear
// fractional forms, over the nonreal grid points.
inline double transform_lft_residual(const RationalMatFun& F, const CMat& A, double alpha, bool inverse,
                                     const ToleranceConfig& cfg = {}, const std::vector<cd>& grid = {}) {
    const auto T = inverse ? inverse_schur_stieltjes_transform(F, A, alpha, cfg, grid)
                           : schur_stieltjes_transform(F, A, alpha, cfg, grid);
    const MatrixPolynomial gen = inverse ? v_poly(alpha, A, cfg.pinv_rtol) : w_poly(alpha, A, cfg.pinv_rtol);
    double res = 0.0;
    for (cd z : detail::nonreal(grid.empty() ? default_grid(alpha) : grid)) {
        const CMat direct = T(z, cfg.lft_tol);
        const CMat viaLft = lft_matrix(detail::generator_at(gen, z, A.rows()), F(z, cfg.lft_tol), cfg);
        res = std::max(res, fro(direct - viaLft) / std::max(1.0, fro(direct)));
    }
    return res;
}

// Resolvent data for a sequence: cleaned Schur diagonal, V^{(s,m)}, case.
struct SolverContext {
    MomentSequence seq;
    ClassReport report;
    Resolvent resolvent;
    CMat top;  // cleaned s_0^{[m]}
    int rank = 0;
    CaseTag tag = CaseTag::NonDegenerate;
};

inline SolverContext prepare(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    SolverContext ctx;
    ctx.seq = seq;
    ctx.report = classify(seq, cfg);
    if (!ctx.report.Kgg) throw PreconditionError("sequence is not alpha-Stieltjes nonnegative definite");
    if (ctx.report.Kgge_candidate == Ternary::No)
        throw PreconditionError("sequence fails the extendability test");
    const auto diag = clean_schur_diagonal(seq, cfg);
    ctx.resolvent = compose_from_diagonal(seq.alpha, diag, cfg.pinv_rtol);
    ctx.top = diag.back();
    ctx.rank = clean_rank(ctx.top, seq, cfg);
    const int q = static_cast<int>(seq.q());
    ctx.tag = ctx.rank == q ? CaseTag::NonDegenerate
                            : (ctx.rank == 0 ? CaseTag::CompletelyDegenerate : CaseTag::PartiallyDegenerate);
    return ctx;
}

struct SolveResult {
    CaseTag tag = CaseTag::NonDegenerate;
    int rank = 0;
    RationalMatFun F;  // polynomial fraction num * den^{-1}
    double min_denominator_ratio = 0.0;  // over the grid
};

namespace detail {

// num = V_nw P + V_ne Q, den = V_sw P + V_se Q; the denominator is certified
// at every grid point.
inline SolveResult synthesize(const SolverContext& ctx, const MatrixPolynomial& P, const MatrixPolynomial& Q,
                              const std::vector<cd>& grid, const ToleranceConfig& cfg) {
    const auto& b = ctx.resolvent.Vb;
    const MatrixPolynomial num = b.nw * P + b.ne * Q;
    const MatrixPolynomial den = b.sw * P + b.se * Q;
    SolveResult res;
    res.tag = ctx.tag;
    res.rank = ctx.rank;
    res.min_denominator_ratio = 1.0;
    for (cd z : grid) {
        const double r = sigma_ratio(den(z));
        res.min_denominator_ratio = std::min(res.min_denominator_ratio, r);
        if (!(r >= cfg.lft_tol))
            throw DomainError("solution denominator is singular at a grid point; the parameter is not admissible",
                              r);
    }
    res.F = RationalMatFun::fraction(num, den);
    return res;
}

inline void require_pair(const StieltjesPair& p, const ToleranceConfig& cfg, const std::string& what) {
    const PairReport rep = verify_pair(p, cfg.psd_tol, cfg);
    if (!rep.rank_ok) throw PreconditionError(what + ": rank [phi; psi] < q on the grid");
    if (!rep.kd1_ok || !rep.kd2_ok) throw PreconditionError(what + ": J-form positivity fails on the grid");
    if (!rep.re_ok) throw PreconditionError(what + ": Re(psi^* phi) is not PSD left of alpha");
}

inline void require_diamond(const StieltjesPair& p, const ToleranceConfig& cfg, const std::string& what) {
    bool ok = false;
    try {
        ok = in_diamond(p, cfg);
    } catch (const DomainError&) {
        ok = false;
    }
    if (!ok) throw PreconditionError(what + ": parameter does not decay along the imaginary axis");
}

// Polynomial diag(a, b) with a: r x r and b: (q-r) x (q-r).
inline MatrixPolynomial poly_diag(const MatrixPolynomial& a, const MatrixPolynomial& b) {
    const int n = std::max(a.length(), b.length());
    const Eigen::Index r = a.rows(), s = b.rows();
    std::vector<CMat> c(n, zeros(r + s, r + s));
    for (int d = 0; d < a.length(); ++d) c[d].topLeftCorner(r, r) = a.coeffs()[d];
    for (int d = 0; d < b.length(); ++d) c[d].bottomRightCorner(s, s) = b.coeffs()[d];
    return MatrixPolynomial(c);
}

inline void check_unitary_basis(const CMat& W, const CMat& top, int r, const ToleranceConfig& cfg) {
    const Eigen::Index q = top.rows();
    if (W.rows() != q || W.cols() != q) throw PreconditionError("basis matrix must be q x q");
    if (fro(W.adjoint() * W - identity(q)) > cfg.range_tol * double(q))
        throw PreconditionError("basis matrix is not unitary");
    if (!range_contains(W.leftCols(r), top, cfg.range_tol, cfg.pinv_rtol))
        throw PreconditionError("leading basis columns do not span the range of s_0^[m]");
}

}  // namespace detail

// Full parametrization. The parameter must be a pair in P(s_0^{[m]}); in eq
// mode it must also be in the decay subclass.
inline SolveResult solve(const MomentSequence& seq, const StieltjesPair& param, Mode mode,
                         const ToleranceConfig& cfg = {}) {
    const SolverContext ctx = prepare(seq, cfg);
    if (param.q() != seq.q()) throw PreconditionError("parameter size differs from the sequence size");
    detail::require_pair(param, cfg, "parameter");
    // In the completely degenerate case the last factor V_O annihilates phi,
    // so only psi matters; the range gate is enforced for eq mode only.
    const bool gate = ctx.tag == CaseTag::PartiallyDegenerate ||
                      (ctx.tag == CaseTag::CompletelyDegenerate && mode == Mode::Eq);
    if (gate && !in_class_P_of(param, ctx.top, cfg.range_tol, cfg))
        throw PreconditionError("parameter is outside the range class of s_0^[m]");
    if (mode == Mode::Eq) detail::require_diamond(param, cfg, "eq mode");
    const PolyPair pp = poly_pair(param.phi, param.psi);
    return detail::synthesize(ctx, pp.P, pp.Q, param.grid, cfg);
}

// Partially degenerate case with an r x r parameter pair entering as
// W diag(phi, O), W diag(psi, I); W unitary with leading r columns spanning
// ran s_0^{[m]}. An empty W selects the SVD basis.
inline SolveResult solve_degenerate_embedded(const MomentSequence& seq, const StieltjesPair& small, CMat W = {},
                                             Mode mode = Mode::Leq, const ToleranceConfig& cfg = {}) {
    const SolverContext ctx = prepare(seq, cfg);
    const int q = static_cast<int>(seq.q());
    if (ctx.tag != CaseTag::PartiallyDegenerate)
        throw PreconditionError("embedded parametrization needs 1 <= rank s_0^[m] <= q-1");
    if (small.q() != ctx.rank) throw PreconditionError("parameter size differs from rank s_0^[m]");
    if (W.size() == 0) W = range_basis(ctx.top, 0.0).full();
    detail::check_unitary_basis(W, ctx.top, ctx.rank, cfg);
    detail::require_pair(small, cfg, "embedded parameter");
    if (mode == Mode::Eq) detail::require_diamond(small, cfg, "eq mode");
    // With phi = P D^{-1}, psi = Q D^{-1}, right multiplication by diag(D, I)
    // gives the polynomial pair (W diag(P, O), W diag(Q, I)).
    const PolyPair pp = poly_pair(small.phi, small.psi);
    const int s = q - ctx.rank;
    const MatrixPolynomial P = W * detail::poly_diag(pp.P, MatrixPolynomial::constant(zeros(s, s)));
    const MatrixPolynomial Q = W * detail::poly_diag(pp.Q, MatrixPolynomial::constant(identity(s)));
    return detail::synthesize(ctx, P, Q, default_grid(seq.alpha), cfg);
}

// Solutions of the equality problem from a decaying r x r function f,
// r = rank of the top alpha-Stieltjes parameter:
// F = (V_nw W diag(f, O) + V_ne W)(V_sw W diag(f, O) + V_se W)^{-1}.
inline SolveResult solve_equality_subset(const MomentSequence& seq, const RationalMatFun& f, CMat W = {},
                                         const ToleranceConfig& cfg = {}) {
    const SolverContext ctx = prepare(seq, cfg);
    const int q = static_cast<int>(seq.q());
    const auto Qp = stieltjes_parametrization(seq, cfg);
    const int r = clean_rank(spectral_truncate(Qp.back(), cfg.zero_tol * std::max(1.0, spectral_norm(seq.s[0]))),
                             seq, cfg);
    if (r == 0)
        throw PreconditionError("completely degenerate sequence: the problem has a unique solution, use solve");
    if (r != ctx.rank) throw PreconditionError("top parameter rank differs from rank s_0^[m]");
    if (f.rows() != r || f.cols() != r) throw PreconditionError("f must be r x r with r = rank of the top parameter");
    if (W.size() == 0) W = range_basis(ctx.top, 0.0).full();
    detail::check_unitary_basis(W, ctx.top, r, cfg);
    const StieltjesPair fp = pair_from_function(f, seq.alpha);
    detail::require_pair(fp, cfg, "equality parameter");
    detail::require_diamond(fp, cfg, "equality parameter");
    const RationalMatFun ff = f.to_fraction();
    const int s = q - r;
    const MatrixPolynomial P = W * detail::poly_diag(ff.num(), MatrixPolynomial::constant(zeros(s, s)));
    const MatrixPolynomial Q = W * detail::poly_diag(ff.den(), MatrixPolynomial::constant(identity(s)));
    return detail::synthesize(ctx, P, Q, default_grid(seq.alpha), cfg);
}

// Closed form of the unique solution in the completely degenerate case.
inline RationalMatFun degenerate_closed_form(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    const SolverContext ctx = prepare(seq, cfg);
    if (ctx.tag != CaseTag::CompletelyDegenerate) throw PreconditionError("sequence is not completely degenerate");
    return RationalMatFun::fraction(ctx.resolvent.Vb.ne, ctx.resolvent.Vb.se);
}

struct BaseCaseReport {
    bool pair_ok = false;
    bool in_range_class = false;
    double reconstruction_error = 0.0;  // relative, over the grid
    bool passed = false;
};

// Level-0 roundtrip: (phi, psi) = W_{s_0} [F; I] is a pair in P(s_0) and
// V_{s_0} maps it back to F.
inline BaseCaseReport m0_base_case_check(const RationalMatFun& F, const CMat& s0, double alpha,
                                         const ToleranceConfig& cfg = {}) {
    const CMat S = HermMat(s0, cfg.herm_tol).mat();
    const Eigen::Index q = S.rows();
    const CMat Sp = pinv(S, cfg.pinv_rtol);
    const double lt = cfg.lft_tol;
    auto phi = RationalMatFun::pointwise(q, q, [F, S, alpha, lt](cd z) { return CMat((z - alpha) * F(z, lt) + S); });
    auto psi = RationalMatFun::pointwise(q, q, [F, S, Sp, alpha, lt](cd z) {
        return CMat(-(z - alpha) * Sp * F(z, lt) + identity(S.rows()) - Sp * S);
    });
    const StieltjesPair p(phi, psi, alpha);
    BaseCaseReport rep;
    rep.pair_ok = verify_pair(p, cfg.psd_tol, cfg).ok();
    rep.in_range_class = in_class_P_of(p, S, cfg.range_tol, cfg);
    for (cd z : p.grid) {
        CMat f0, x, y;
        try {
            f0 = F(z, lt);
            x = phi(z);
            y = psi(z);
        } catch (const DomainError&) {
            continue;
        }
        const CMat rec = right_divide(-S * y, (z - alpha) * (Sp * x + y), lt, "base case reconstruction");
        rep.reconstruction_error = std::max(rep.reconstruction_error, fro(rec - f0) / std::max(1.0, fro(f0)));
    }
    rep.passed = rep.pair_ok && rep.in_range_class && rep.reconstruction_error <= 1e-9;
    return rep;
}

}  // namespace stj
