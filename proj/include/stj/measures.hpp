// Discrete matricial measures on [alpha, inf): moments, Stieltjes transforms,
// moment extraction from a transform, and solution verification.
#pragma once

#include "stj/hankel.hpp"
#include "stj/rational.hpp"

#include <numbers>
#include <random>

namespace stj {

struct Atom {
    double x;
    CMat w;  // PSD weight
};

struct DiscreteMeasure {
    double alpha = 0.0;
    std::vector<Atom> atoms;
    Eigen::Index q = 0;

    DiscreteMeasure() = default;
    DiscreteMeasure(double a, std::vector<Atom> at, Eigen::Index size = 0, double tol = 1e-9)
        : alpha(a), atoms(std::move(at)), q(size) {
        if (q == 0 && !atoms.empty()) q = atoms[0].w.rows();
        if (q == 0) throw PreconditionError("measure size is unknown");
        for (auto& t : atoms) {
            if (t.w.rows() != q || t.w.cols() != q) throw PreconditionError("atom weight has wrong size");
            if (!std::isfinite(t.x)) throw PreconditionError("atom node is not finite");
            if (t.x < alpha - tol * std::max(1.0, std::abs(alpha)))
                throw PreconditionError("atom node lies left of alpha");
            t.w = HermMat(t.w, tol).mat();
            if (!is_psd(t.w, tol)) throw PreconditionError("atom weight is not PSD");
        }
    }

    CMat total() const {
        CMat acc = zeros(q, q);
        for (const auto& t : atoms) acc += t.w;
        return acc;
    }
};

inline MomentSequence moments(const DiscreteMeasure& mu, int m) {
    if (m < 0) throw PreconditionError("moments: m must be >= 0");
    std::vector<CMat> s;
    for (int j = 0; j <= m; ++j) {
        CMat acc = zeros(mu.q, mu.q);
        for (const auto& t : mu.atoms) acc += std::pow(t.x, j) * t.w;
        s.push_back(acc);
    }
    return MomentSequence(mu.alpha, s);
}

// F(z) = sum_k w_k / (x_k - z)
inline RationalMatFun stieltjes_transform(const DiscreteMeasure& mu) {
    std::vector<SimplePole> poles;
    for (const auto& t : mu.atoms) poles.push_back({t.x, t.w});
    return RationalMatFun::pole_sum(zeros(mu.q, mu.q), std::move(poles));
}

struct ExtractionConfig {
    // Contour radii around alpha, as multiples of max(1, pole bound). The
    // estimate comes from the largest radius; the spread across radii is
    // reported as the residual.
    std::vector<double> ladder{4.0, 6.0, 8.0};
    int nodes = 128;
    double fallback_pole_bound = 4.0;  // for functions without a pole bound
};

struct ExtractionResult {
    MomentSequence moments;
    double residual = 0.0;  // worst relative spread across radii
};

namespace detail {

inline double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Moments about alpha -> ordinary moments.
inline std::vector<CMat> recenter(const std::vector<CMat>& mu, double alpha) {
    std::vector<CMat> s;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        CMat acc = zeros(mu[0].rows(), mu[0].cols());
        for (std::size_t k = 0; k <= j; ++k)
            acc += binom(static_cast<int>(j), static_cast<int>(k)) * std::pow(alpha, double(j - k)) * mu[k];
        s.push_back(acc);
    }
    return s;
}

struct ContourMoments {
    std::vector<CMat> s;
    double growth_ratio;  // size of non-negative Laurent powers relative to |F|
};

inline ContourMoments contour_moments(const RationalMatFun& F, double alpha, int m, double R, int N,
                                      double lft_tol) {
    const Eigen::Index p = F.rows(), q = F.cols();
    std::vector<CMat> mu(m + 1, zeros(p, q));
    std::vector<CMat> pos(3, zeros(p, q));  // coefficients of (z-alpha)^0, ^1, ^2
    double fmax = 0.0;
    for (int n = 0; n < N; ++n) {
        const double th = 2.0 * std::numbers::pi * (n + 0.5) / N;
        const cd u = std::polar(R, th);
        const CMat Fz = F(alpha + u, lft_tol);
        fmax = std::max(fmax, fro(Fz));
        cd pw = u;
        for (int j = 0; j <= m; ++j) {
            mu[j] -= Fz * pw;
            pw *= u;
        }
        cd inv = 1.0;
        for (int k = 0; k < 3; ++k) {
            pos[k] += Fz * inv;
            inv /= u;
        }
    }
    double growth = 0.0;
    double rk = 1.0;
    for (int k = 0; k < 3; ++k) {
        growth = std::max(growth, fro(pos[k] / double(N)) * rk);
        rk *= R;
    }
    for (auto& x : mu) x /= double(N);
    ContourMoments out;
    out.s = recenter(mu, alpha);
    for (auto& x : out.s) x = herm_part(x);
    out.growth_ratio = fmax > 0.0 ? growth / fmax : 0.0;
    return out;
}

}  // namespace detail

// Recovers s_0..s_m from the expansion F(z) = -sum_j s_j z^{-(j+1)} at infinity
// by trapezoidal contour integrals on circles |z - alpha| = R.
inline ExtractionResult extract_moments(const RationalMatFun& F, double alpha, int m,
                                        const ExtractionConfig& ex = {}, const ToleranceConfig& = {}) {
    if (ex.ladder.empty()) throw PreconditionError("extraction ladder is empty");
    double rho = F.pole_radius(alpha, cd(alpha, 1.7));
    if (rho < 0.0) rho = ex.fallback_pole_bound;
    std::vector<double> radii;
    for (double k : ex.ladder) radii.push_back(k * std::max(1.0, rho));
    std::sort(radii.begin(), radii.end());
    std::vector<std::vector<CMat>> est;
    for (double R : radii) {
        if (!(R > 0)) throw PreconditionError("extraction radii must be positive");
        const auto cm = detail::contour_moments(F, alpha, m, R, ex.nodes, 1e-15);
        if (cm.growth_ratio > 1e-6)
            throw GrowthError("function is not O(1/z) at infinity (growth ratio " +
                              std::to_string(cm.growth_ratio) + ")");
        est.push_back(cm.s);
    }
    ExtractionResult res;
    res.moments.alpha = alpha;
    res.moments.s = est.back();
    for (std::size_t a = 0; a + 1 < est.size(); ++a)
        for (int j = 0; j <= m; ++j)
            res.residual = std::max(res.residual, fro(est[a][j] - est.back()[j]) /
                                                      std::max(1.0, fro(est.back()[j])));
    return res;
}

enum class Mode { Leq, Eq };

inline const char* to_string(Mode m) { return m == Mode::Leq ? "leq" : "eq"; }

struct VerificationReport {
    Mode mode = Mode::Leq;
    bool passed = false;
    std::vector<double> rel_errors;  // ||s^_j - s_j|| / max(1, ||s_j||)
    double top_lambda_min = 0.0;     // lambda_min(s_m - s^_m) / max(1, ||s_m||)
    double extraction_residual = 0.0;
    CMat top_difference;             // s_m - s^_m
    MomentSequence extracted;
};

inline VerificationReport verify_solution(const RationalMatFun& F, const MomentSequence& seq, Mode mode,
                                          double tol, const ExtractionConfig& ex = {},
                                          const ToleranceConfig& cfg = {}) {
    const int m = seq.m();
    const auto er = extract_moments(F, seq.alpha, m, ex, cfg);
    VerificationReport r;
    r.mode = mode;
    r.extracted = er.moments;
    r.extraction_residual = er.residual;
    bool ok = er.residual <= tol;
    for (int j = 0; j <= m; ++j) {
        const double e = fro(er.moments.s[j] - seq.s[j]) / std::max(1.0, fro(seq.s[j]));
        r.rel_errors.push_back(e);
        if (j < m || mode == Mode::Eq) ok = ok && e <= tol;
    }
    r.top_difference = herm_part(seq.s[m] - er.moments.s[m]);
    r.top_lambda_min = lambda_min(r.top_difference) / std::max(1.0, fro(seq.s[m]));
    if (mode == Mode::Leq) ok = ok && r.top_lambda_min >= -tol;
    r.passed = ok;
    return r;
}

struct CauchySchwarzReport {
    bool gram_psd = false;          // [[int |f|^2, int f^* g], [.., int |g|^2]] >= 0
    bool range_inclusion = false;   // ran int f^* g within ran int |f|^2
    bool null_inclusion = false;    // N(int |f|^2) within N((int f^* g)^*)
    double schur_lambda_min = 0.0;  // lambda_min(int|g|^2 - b^* a^+ b)
    bool ok(double tol) const { return gram_psd && range_inclusion && null_inclusion && schur_lambda_min >= -tol; }
};

inline CauchySchwarzReport finite_cauchy_schwarz_check(const DiscreteMeasure& mu, const std::function<cd(double)>& f,
                                                       const std::function<cd(double)>& g,
                                                       const ToleranceConfig& cfg = {}) {
    const Eigen::Index q = mu.q;
    CMat a = zeros(q, q), b = zeros(q, q), c = zeros(q, q);
    for (const auto& t : mu.atoms) {
        const cd fx = f(t.x), gx = g(t.x);
        a += std::norm(fx) * t.w;
        b += std::conj(fx) * gx * t.w;
        c += std::norm(gx) * t.w;
    }
    CauchySchwarzReport r;
    CMat G(2 * q, 2 * q);
    G << a, b, b.adjoint(), c;
    r.gram_psd = is_psd(G, cfg.psd_tol);
    r.range_inclusion = range_contains(a, b, cfg.range_tol, cfg.pinv_rtol);
    r.null_inclusion = null_contains(a, b.adjoint(), cfg.range_tol, cfg.pinv_rtol);
    r.schur_lambda_min = lambda_min(c - b.adjoint() * pinv(a, cfg.pinv_rtol) * b) / psd_scale(c);
    return r;
}

// sup over the ladder of y ||F(iy)|| compared with ||mu([alpha, inf))||.
inline double transform_growth(const RationalMatFun& F, const std::vector<double>& ys) {
    double g = 0.0;
    for (double y : ys) g = std::max(g, y * spectral_norm(F(cd(0.0, y))));
    return g;
}

// lambda_min of Im F(w)/Im w - F(w)^* s_0^+ F(w), normalized by max(1, ||s_0||).
inline double imaginary_part_margin(const RationalMatFun& F, const CMat& s0, cd w, double rtol = 1e-12) {
    const CMat Fw = F(w);
    const CMat lhs = im_part(Fw) / w.imag() - Fw.adjoint() * pinv(s0, rtol) * Fw;
    return lambda_min(lhs) / psd_scale(s0);
}

struct RandomMeasureSpec {
    int q = 2;
    int m = 3;
    int atoms = 3;
    std::uint64_t seed = 1;
    double alpha = 0.0;
    double spread = 3.0;  // nodes drawn from [alpha, alpha + spread]
    int weight_rank = -1; // -1: full rank
};

inline CMat random_psd(std::mt19937_64& rng, int q, int rank) {
    std::normal_distribution<double> nd;
    CMat X(q, rank);
    for (int i = 0; i < q; ++i)
        for (int k = 0; k < rank; ++k) X(i, k) = cd(nd(rng), nd(rng));
    return X * X.adjoint() / double(std::max(rank, 1));
}

inline DiscreteMeasure random_measure(const RandomMeasureSpec& spec) {
    if (spec.q < 1 || spec.atoms < 0) throw PreconditionError("random measure: invalid size");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> ud(0.0, spec.spread);
    std::vector<Atom> at;
    const int rank = spec.weight_rank < 0 ? spec.q : std::min(spec.weight_rank, spec.q);
    for (int k = 0; k < spec.atoms; ++k) {
        const double x = spec.alpha + ud(rng);
        at.push_back({x, random_psd(rng, spec.q, rank)});
    }
    return DiscreteMeasure(spec.alpha, at, spec.q);
}

}  // namespace stj
