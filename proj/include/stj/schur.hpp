// Sequence-level alpha-Schur algorithm: reciprocal sequence, alpha-shift,
// first and k-th transforms, and the inverse transform.
#pragma once

#include "stj/matcore.hpp"
#include "stj/sequence.hpp"

namespace stj {

// r_0 = s_0^+,  r_j = -s_0^+ sum_{l<j} s_{j-l} r_l
inline std::vector<CMat> reciprocal(const std::vector<CMat>& s, double rtol = 1e-12) {
    if (s.empty()) throw PreconditionError("reciprocal: empty sequence");
    const CMat s0p = pinv(s[0], rtol);
    std::vector<CMat> r{s0p};
    for (std::size_t j = 1; j < s.size(); ++j) {
        CMat acc = zeros(s[0].rows(), s[0].cols());
        for (std::size_t l = 0; l < j; ++l) acc += s[j - l] * r[l];
        r.push_back(-s0p * acc);
    }
    return r;
}

// s^{+,alpha}_j = -alpha s_{j-1} + s_j with s_{-1} = O
inline std::vector<CMat> alpha_shift(const MomentSequence& seq) {
    std::vector<CMat> out{seq.s[0]};
    for (int j = 1; j <= seq.m(); ++j) out.push_back(-seq.alpha * seq.s[j - 1] + seq.s[j]);
    return out;
}

// s^{[1]}_j = -s_0 r_{j+1} s_0 where r is the reciprocal of the alpha-shift.
inline MomentSequence first_transform(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    if (seq.m() < 1) throw PreconditionError("first_transform needs m >= 1");
    const auto r = reciprocal(alpha_shift(seq), cfg.pinv_rtol);
    MomentSequence out;
    out.alpha = seq.alpha;
    for (int j = 0; j < seq.m(); ++j) out.s.push_back(herm_part(-seq.s[0] * r[j + 1] * seq.s[0]));
    return out;
}

inline MomentSequence k_th_transform(const MomentSequence& seq, int k, const ToleranceConfig& cfg = {}) {
    if (k < 0 || k > seq.m()) throw PreconditionError("k_th_transform: k out of range");
    MomentSequence cur = seq;
    for (int i = 0; i < k; ++i) cur = first_transform(cur, cfg);
    return cur;
}

struct TransformTrace {
    MomentSequence input;
    std::vector<MomentSequence> stages;  // stage k has length m-k+1
    std::vector<CMat> diagonal;          // s_0^{[k]}, k = 0..m
};

inline TransformTrace schur_trace(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    TransformTrace tr;
    tr.input = seq;
    MomentSequence cur = seq;
    while (true) {
        tr.stages.push_back(cur);
        tr.diagonal.push_back(cur.s[0]);
        if (cur.m() == 0) break;
        cur = first_transform(cur, cfg);
    }
    return tr;
}

inline std::vector<CMat> schur_diagonal(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    return schur_trace(seq, cfg).diagonal;
}

// Schur diagonal with rounding-level eigenvalues (below zero_tol * max(1, ||s_0||))
// removed, so that pseudoinverses of degenerate entries do not invert noise.
inline std::vector<CMat> clean_schur_diagonal(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    const double thr = cfg.zero_tol * std::max(1.0, spectral_norm(seq.s[0]));
    auto diag = schur_diagonal(seq, cfg);
    for (auto& d : diag) d = spectral_truncate(d, thr);
    return diag;
}

// Rank of an entry of the cleaned diagonal.
inline int clean_rank(const CMat& d, const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    const double thr = cfg.zero_tol * std::max(1.0, spectral_norm(seq.s[0]));
    const Eigen::VectorXd ev = herm_eigenvalues(d);
    return static_cast<int>((ev.array().abs() > thr).count());
}

// Inverse transform with seed A; output has one more term than t:
// s_0 = A, s_j = alpha s_{j-1} + A A^+ sum_{k<j} t_{j-1-k} A^+ s^{+,alpha}_k.
inline MomentSequence inverse_transform(const MomentSequence& t, const CMat& A,
                                        const ToleranceConfig& cfg = {}) {
    if (A.rows() != t.q() || A.cols() != t.q()) throw PreconditionError("inverse_transform: size mismatch");
    const CMat Ap = pinv(A, cfg.pinv_rtol);
    const CMat AAp = A * Ap;
    const double alpha = t.alpha;
    std::vector<CMat> s{A};
    std::vector<CMat> sp{A};  // alpha-shift of s, grown alongside
    for (int j = 1; j <= t.m() + 1; ++j) {
        CMat acc = zeros(A.rows(), A.cols());
        for (int k = 0; k < j; ++k) acc += t.s[j - 1 - k] * Ap * sp[k];
        s.push_back(alpha * s[j - 1] + AAp * acc);
        sp.push_back(-alpha * s[j - 1] + s[j]);
    }
    MomentSequence out;
    out.alpha = alpha;
    for (auto& x : s) out.s.push_back(herm_part(x));
    return out;
}

struct PreservationReport {
    // forward direction
    double forward_low_residual = 0.0;      // max ||s^[1]_j - t^[1]_j||, j <= m-2
    double forward_formula_residual = 0.0;  // top difference vs (s0^+ s0)*(s_m - t_m)(s0^+ s0)
    double forward_top_lambda_min = 0.0;
    // inverse direction with common seed A = s_0
    double inverse_low_residual = 0.0;      // j <= m
    double inverse_formula_residual = 0.0;  // top difference vs (A^+ A)*(s_m - t_m)(A^+ A)
    double inverse_top_lambda_min = 0.0;
    bool forward_ok(double eq_tol, double psd_tol) const {
        return forward_low_residual <= eq_tol && forward_formula_residual <= eq_tol &&
               forward_top_lambda_min >= -psd_tol;
    }
    bool inverse_ok(double eq_tol, double psd_tol) const {
        return inverse_low_residual <= eq_tol && inverse_formula_residual <= eq_tol &&
               inverse_top_lambda_min >= -psd_tol;
    }
};

// Checks that t_j = s_j (j < m) and t_m <= s_m survive the first transform
// and the inverse transform with common seed s_0.
inline PreservationReport check_inequality_preservation(const MomentSequence& s, const MomentSequence& t,
                                                        const ToleranceConfig& cfg = {}) {
    const int m = s.m();
    if (t.m() != m || t.q() != s.q()) throw PreconditionError("inequality check: shape mismatch");
    double scale = 1.0;
    for (const auto& x : s.s) scale = std::max(scale, fro(x));
    for (int j = 0; j < m; ++j)
        if (fro(s.s[j] - t.s[j]) > cfg.range_tol * scale)
            throw PreconditionError("inequality check: lower moments differ");
    const CMat diff = s.s[m] - t.s[m];
    if (!is_psd(diff, cfg.psd_tol)) throw PreconditionError("inequality check: t_m <= s_m violated");

    PreservationReport rep;
    if (m >= 1) {
        const auto sf = first_transform(s, cfg);
        const auto tf = first_transform(t, cfg);
        for (int j = 0; j + 1 < m; ++j)
            rep.forward_low_residual = std::max(rep.forward_low_residual, fro(sf.s[j] - tf.s[j]));
        const CMat P = pinv(s.s[0], cfg.pinv_rtol) * s.s[0];
        const CMat top = sf.s[m - 1] - tf.s[m - 1];
        rep.forward_formula_residual = fro(top - P.adjoint() * diff * P);
        rep.forward_top_lambda_min = lambda_min(top);
    }
    const CMat A = s.s[0];
    const auto si = inverse_transform(s, A, cfg);
    const auto ti = inverse_transform(t, A, cfg);
    for (int j = 0; j <= m; ++j)
        rep.inverse_low_residual = std::max(rep.inverse_low_residual, fro(si.s[j] - ti.s[j]));
    const CMat P = pinv(A, cfg.pinv_rtol) * A;
    const CMat top = si.s[m + 1] - ti.s[m + 1];
    rep.inverse_formula_residual = fro(top - P.adjoint() * diff * P);
    rep.inverse_top_lambda_min = lambda_min(top);
    return rep;
}

}  // namespace stj
