// Moment sequences, block Hankel structures, class membership and the
// alpha-Stieltjes parametrization.
#pragma once

#include "stj/matcore.hpp"
#include "stj/schur.hpp"
#include "stj/sequence.hpp"

namespace stj {

namespace detail {

// Block Hankel [u_{j+k+off}]_{j,k=0..n}
inline CMat hankel_block(const std::vector<CMat>& u, int n, int off = 0) {
    const Eigen::Index q = u[0].rows();
    CMat H((n + 1) * q, (n + 1) * q);
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k) H.block(j * q, k * q, q, q) = u[j + k + off];
    return H;
}

inline CMat col_stack(const std::vector<CMat>& u, int l, int m) {
    const Eigen::Index q = u[0].rows();
    CMat y((m - l + 1) * q, q);
    for (int j = l; j <= m; ++j) y.block((j - l) * q, 0, q, q) = u[j];
    return y;
}

inline CMat row_stack(const std::vector<CMat>& u, int l, int m) {
    const Eigen::Index q = u[0].rows();
    CMat z(q, (m - l + 1) * q);
    for (int j = l; j <= m; ++j) z.block(0, (j - l) * q, q, q) = u[j];
    return z;
}

// Theta_n(u) = z_{n,2n-1} H_{n-1}^+ y_{n,2n-1}; requires u_0..u_{2n-1}.
inline CMat theta(const std::vector<CMat>& u, int n, double rtol) {
    const Eigen::Index q = u[0].rows();
    if (n == 0) return zeros(q, q);
    const CMat H = hankel_block(u, n - 1);
    return herm_part(row_stack(u, n, 2 * n - 1) * pinv(H, rtol) * col_stack(u, n, 2 * n - 1));
}

}  // namespace detail

struct HankelStack {
    std::vector<CMat> H, K, Halpha;
    std::vector<CMat> L, Lalpha, Theta, ThetaAlpha;
};

inline HankelStack build_stack(const MomentSequence& seq, const ToleranceConfig& tol = {}) {
    HankelStack st;
    const int m = seq.m();
    const auto& s = seq.s;
    const auto v = seq.shifted();
    for (int n = 0; 2 * n <= m; ++n) {
        st.H.push_back(detail::hankel_block(s, n));
        st.Theta.push_back(detail::theta(s, n, tol.pinv_rtol));
        st.L.push_back(herm_part(s[2 * n] - st.Theta.back()));
    }
    for (int n = 0; 2 * n + 1 <= m; ++n) {
        st.K.push_back(detail::hankel_block(s, n, 1));
        st.Halpha.push_back(detail::hankel_block(v, n));
        st.ThetaAlpha.push_back(detail::theta(v, n, tol.pinv_rtol));
        st.Lalpha.push_back(herm_part(v[2 * n] - st.ThetaAlpha.back()));
    }
    return st;
}

enum class Ternary { No, Yes, Unknown };

inline const char* to_string(Ternary t) {
    switch (t) {
        case Ternary::Yes: return "yes";
        case Ternary::No: return "no";
        default: return "unknown";
    }
}

struct ClassReport {
    bool Hgg = false;   // Hankel nonnegative definite (even part)
    bool Kgg = false;   // alpha-Stieltjes nonnegative definite
    bool Kgt = false;   // alpha-Stieltjes positive definite
    bool D = false;     // first-term dominance
    bool Kggd = false;  // completely degenerate
    Ternary Kgge_candidate = Ternary::No;
    int rank_top = -1;  // rank of s_0^[m], -1 if the Schur diagonal was not reached
};

namespace detail {

inline bool kgg_check(const MomentSequence& seq, double tol, bool strict, const ToleranceConfig& cfg) {
    const int m = seq.m();
    const HankelStack st = build_stack(seq, cfg);
    auto ok = [&](const CMat& X) { return strict ? is_pd(X, tol) : is_psd(X, tol); };
    const int n = m / 2;
    if (!ok(st.H[n])) return false;
    if (m % 2 == 0) {
        if (n >= 1 && !ok(st.Halpha[n - 1])) return false;
    } else {
        if (!ok(st.Halpha[n])) return false;
    }
    return true;
}

inline bool dominance_check(const MomentSequence& seq, double tol, double rtol) {
    for (int j = 1; j <= seq.m(); ++j) {
        if (!range_contains(seq.s[0], seq.s[j], tol, rtol)) return false;
        if (!null_contains(seq.s[0], seq.s[j], tol, rtol)) return false;
    }
    return true;
}

}  // namespace detail

inline bool is_Kgg(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    return detail::kgg_check(seq, cfg.psd_tol, false, cfg);
}

inline bool is_dominated(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    return detail::dominance_check(seq, cfg.range_tol, cfg.pinv_rtol);
}

namespace detail {

inline bool candidate_at(const MomentSequence& seq, double psd_tol, double range_tol,
                         const ToleranceConfig& cfg) {
    // Transformed entries at roundoff level are zeroed so that pseudoinverses
    // never act on noise; same threshold as the cleaned Schur diagonal.
    const double thr = cfg.zero_tol * std::max(1.0, spectral_norm(seq.s[0]));
    MomentSequence cur = seq;
    while (true) {
        if (!kgg_check(cur, psd_tol, false, cfg)) return false;
        if (cur.m() == 0) return true;
        if (!dominance_check(cur, range_tol, cfg.pinv_rtol)) return false;
        cur = first_transform(cur, cfg);
        for (auto& x : cur.s) x = spectral_truncate(x, thr);
    }
}

}  // namespace detail

// Recursive necessary test for one-step extendability: K>= at every stage,
// first-term dominance, and the first transform is again a candidate.
// Verdicts that flip under a 100x looser tolerance are reported as Unknown.
inline Ternary kgge_candidate(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    const bool tight = detail::candidate_at(seq, cfg.psd_tol, cfg.range_tol, cfg);
    const bool loose = detail::candidate_at(seq, cfg.psd_tol * 100, cfg.range_tol * 100, cfg);
    if (tight == loose) return tight ? Ternary::Yes : Ternary::No;
    return Ternary::Unknown;
}

inline ClassReport classify(const MomentSequence& seq, const ToleranceConfig& cfg = {}) {
    ClassReport r;
    const int m = seq.m();
    const HankelStack st = build_stack(seq, cfg);
    r.Hgg = true;
    for (const auto& H : st.H) r.Hgg = r.Hgg && is_psd(H, cfg.psd_tol);
    r.Kgg = detail::kgg_check(seq, cfg.psd_tol, false, cfg);
    r.Kgt = detail::kgg_check(seq, cfg.psd_tol, true, cfg);
    r.D = is_dominated(seq, cfg);
    const double thr = cfg.zero_tol * std::max(1.0, spectral_norm(seq.s[0]));
    const CMat& top = (m % 2 == 0) ? st.L[m / 2] : st.Lalpha[m / 2];
    r.Kggd = r.Kgg && fro(hard_threshold(top, thr)) == 0.0;
    r.Kgge_candidate = kgge_candidate(seq, cfg);
    try {
        const auto diag = clean_schur_diagonal(seq, cfg);
        r.rank_top = clean_rank(diag.back(), seq, cfg);
    } catch (const Error&) {
        r.rank_top = -1;
    }
    return r;
}

// Q_{2k} = L_k, Q_{2k+1} = L_{alpha,k}
inline std::vector<CMat> stieltjes_parametrization(const MomentSequence& seq,
                                                   const ToleranceConfig& cfg = {}) {
    const HankelStack st = build_stack(seq, cfg);
    std::vector<CMat> Q;
    for (int j = 0; j <= seq.m(); ++j) Q.push_back(j % 2 == 0 ? st.L[j / 2] : st.Lalpha[j / 2]);
    return Q;
}

// Unique sequence with the given alpha-Stieltjes parametrization:
// s_{2k} = Theta_k + Q_{2k}, s_{2k+1} = alpha s_{2k} + Theta_{alpha,k} + Q_{2k+1}.
inline MomentSequence inverse_parametrization(double alpha, const std::vector<CMat>& Q,
                                              const ToleranceConfig& cfg = {}) {
    if (Q.empty()) throw PreconditionError("parametrization must be nonempty");
    std::vector<CMat> s;
    std::vector<CMat> v;  // shifted sequence, grown alongside s
    for (std::size_t j = 0; j < Q.size(); ++j) {
        const int k = static_cast<int>(j / 2);
        CMat next;
        if (j % 2 == 0) {
            next = detail::theta(s.empty() ? std::vector<CMat>{Q[0]} : s, k, cfg.pinv_rtol) + Q[j];
        } else {
            next = alpha * s[j - 1] + detail::theta(v.empty() ? std::vector<CMat>{Q[0]} : v, k,
                                                    cfg.pinv_rtol) +
                   Q[j];
        }
        s.push_back(herm_part(next));
        if (j >= 1) v.push_back(-alpha * s[j - 1] + s[j]);
    }
    return MomentSequence(alpha, s, cfg.herm_tol);
}

}  // namespace stj
