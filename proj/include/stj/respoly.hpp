// Elementary resolvent polynomials V_A, W_A, their compositions along the
// Schur diagonal, and the J-form identities they satisfy.
#pragma once

#include "stj/polynomial.hpp"
#include "stj/schur.hpp"

namespace stj {

// V_A(z) = [[O, -A], [(z-alpha) A^+, (z-alpha) I]]
inline MatrixPolynomial v_poly(double alpha, const CMat& A, double rtol = 1e-12) {
    const Eigen::Index q = A.rows();
    if (A.cols() != q) throw PreconditionError("v_poly: A must be square");
    const CMat Ap = pinv(A, rtol);
    CMat c0 = zeros(2 * q, 2 * q), c1 = zeros(2 * q, 2 * q);
    c0.topRightCorner(q, q) = -A;
    c0.bottomLeftCorner(q, q) = -alpha * Ap;
    c0.bottomRightCorner(q, q) = -alpha * identity(q);
    c1.bottomLeftCorner(q, q) = Ap;
    c1.bottomRightCorner(q, q) = identity(q);
    return MatrixPolynomial::linear(c0, c1);
}

// W_A(z) = [[(z-alpha) I, A], [-(z-alpha) A^+, I - A^+ A]]
inline MatrixPolynomial w_poly(double alpha, const CMat& A, double rtol = 1e-12) {
    const Eigen::Index q = A.rows();
    if (A.cols() != q) throw PreconditionError("w_poly: A must be square");
    const CMat Ap = pinv(A, rtol);
    CMat c0 = zeros(2 * q, 2 * q), c1 = zeros(2 * q, 2 * q);
    c0.topLeftCorner(q, q) = -alpha * identity(q);
    c0.topRightCorner(q, q) = A;
    c0.bottomLeftCorner(q, q) = alpha * Ap;
    c0.bottomRightCorner(q, q) = identity(q) - Ap * A;
    c1.topLeftCorner(q, q) = identity(q);
    c1.bottomLeftCorner(q, q) = -Ap;
    return MatrixPolynomial::linear(c0, c1);
}

struct ResolventBlocks {
    MatrixPolynomial nw, ne, sw, se;
    static ResolventBlocks of(const MatrixPolynomial& P) {
        const Eigen::Index q = P.rows() / 2;
        return {P.block(0, 0, q, q), P.block(0, q, q, q), P.block(q, 0, q, q), P.block(q, q, q, q)};
    }
    MatrixPolynomial assemble() const {
        const Eigen::Index q = nw.rows();
        const int n = std::max({nw.length(), ne.length(), sw.length(), se.length()});
        std::vector<CMat> c(n, zeros(2 * q, 2 * q));
        auto put = [&](const MatrixPolynomial& p, Eigen::Index i, Eigen::Index j) {
            for (int d = 0; d < p.length(); ++d) c[d].block(i, j, q, q) = p.coeffs()[d];
        };
        put(nw, 0, 0);
        put(ne, 0, q);
        put(sw, q, 0);
        put(se, q, q);
        return MatrixPolynomial(c);
    }
};

struct Resolvent {
    std::vector<CMat> diagonal;  // s_0^{[j]}, j = 0..m
    MatrixPolynomial V;          // V_{d_0} V_{d_1} ... V_{d_m}
    MatrixPolynomial W;          // W_{d_m} ... W_{d_1} W_{d_0}
    ResolventBlocks Vb, Wb;
};

// V is multiplied left to right along the diagonal. W is multiplied in the
// reverse order, which is the order for which W V telescopes to
// (z-alpha)^{m+1} diag(P P^+, I).
inline Resolvent compose_from_diagonal(double alpha, const std::vector<CMat>& diag, double rtol = 1e-12) {
    if (diag.empty()) throw PreconditionError("compose_resolvent: empty diagonal");
    Resolvent r;
    r.diagonal = diag;
    r.V = v_poly(alpha, diag[0], rtol);
    r.W = w_poly(alpha, diag[0], rtol);
    for (std::size_t j = 1; j < diag.size(); ++j) {
        r.V = r.V * v_poly(alpha, diag[j], rtol);
        r.W = w_poly(alpha, diag[j], rtol) * r.W;
    }
    r.Vb = ResolventBlocks::of(r.V);
    r.Wb = ResolventBlocks::of(r.W);
    return r;
}

inline Resolvent compose_resolvent(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    return compose_from_diagonal(seq.alpha, clean_schur_diagonal(seq, cfg), cfg.pinv_rtol);
}

// Max residual of V_A W_A and W_A V_A against (z-alpha) diag(A A^+, I).
inline double verify_product_identity(double alpha, const CMat& A, cd z, double rtol = 1e-12) {
    const Eigen::Index q = A.rows();
    const CMat V = v_poly(alpha, A, rtol)(z), W = w_poly(alpha, A, rtol)(z);
    const CMat rhs = (z - alpha) * block_diag(A * pinv(A, rtol), identity(q));
    return std::max(fro(V * W - rhs), fro(W * V - rhs));
}

struct JIdentityReport {
    double ws = 0.0;             // W_A* (-J) W_A = D* (-J) D, D = diag((z-a) I, I)
    double n101n = 0.0;          // (D W_A)* (-J) (D W_A) expansion
    double v_form = 0.0;         // V_B* (-J) V_B with the 2 Im z diag(O, B) term
    double v_form_scaled = 0.0;  // (D V_B)* (-J) (D V_B) = |z-a|^2 diag(B,B^+)*(-J)diag(B,B^+)
    double av_form = 0.0;        // same with diag(A, A^+) V_B, needs N(A) in N(B)
    double av_form_scaled = 0.0; // same with diag((z-a) A, A^+) V_B
    double max() const { return std::max({ws, n101n, v_form, v_form_scaled, av_form, av_form_scaled}); }
};

// Residuals of the J-form identities for V_B and W_A at z.
inline JIdentityReport verify_j_identities(double alpha, const CMat& A, const CMat& B, cd z,
                                           const ToleranceConfig& cfg = {}) {
    const Eigen::Index q = A.rows();
    if (!null_contains(A, B, cfg.range_tol, cfg.pinv_rtol))
        throw PreconditionError("verify_j_identities: N(A) must be contained in N(B)");
    const double rt = cfg.pinv_rtol;
    const CMat Iq = identity(q), Oq = zeros(q, q);
    const CMat Ap = pinv(A, rt), Bp = pinv(B, rt);
    const cd za = z - alpha;
    const double imz = z.imag();
    const CMat D = block_diag(za * Iq, Iq);
    const CMat WA = w_poly(alpha, A, rt)(z), VB = v_poly(alpha, B, rt)(z);
    JIdentityReport r;
    r.ws = fro(j_form(WA) - j_form(D));
    const CMat lhs = j_form(D * WA);
    const CMat rhs = std::norm(za) * (j_form(block_diag(A * Ap, Iq)) - 2.0 * imz * block_diag(Ap, Oq)) +
                     j_form(block_diag(za * za * (Iq - A * Ap), Iq));
    r.n101n = fro(lhs - rhs);
    const CMat vr = j_form(block_diag(za * B, Bp)) + 2.0 * imz * block_diag(Oq, B);
    const CMat vr2 = std::norm(za) * j_form(block_diag(B, Bp));
    r.v_form = fro(j_form(VB) - vr);
    r.v_form_scaled = fro(j_form(D * VB) - vr2);
    r.av_form = fro(j_form(block_diag(A, Ap) * VB) - vr);
    r.av_form_scaled = fro(j_form(block_diag(za * A, Ap) * VB) - vr2);
    return r;
}

// Residuals of the J-identities for the constant blocks built from A:
// [[I, A], [-A^+, I - A^+ A]] is (-J)-unitary, and diag(A, A^+),
// diag((z-alpha) A, A^+) have the same J-forms as diag(A A^+, I),
// diag((z-alpha) A A^+, I).
inline double verify_constant_j_identities(double alpha, const CMat& A, cd z, double rtol = 1e-12) {
    const Eigen::Index q = A.rows();
    const CMat Iq = identity(q), Ap = pinv(A, rtol);
    const cd za = z - alpha;
    CMat Bm(2 * q, 2 * q);
    Bm << Iq, A, -Ap, Iq - Ap * A;
    const double r1 = fro(j_form(Bm) + signature(q, JKind::Imaginary));
    const double r2 = fro(j_form(block_diag(A, Ap)) - j_form(block_diag(A * Ap, Iq)));
    const double r3 = fro(j_form(block_diag(za * A, Ap)) - j_form(block_diag(za * A * Ap, Iq)));
    return std::max({r1, r2, r3});
}

}  // namespace stj
