// Dense complex matrix kernel: pseudoinverse, Hermitian handling,
// Loewner-order and range/null predicates, signature matrices.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace stj {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr cd I_unit{0.0, 1.0};

// Every numerical threshold used by the library lives here so callers can
// override them in one place.
struct ToleranceConfig {
    double pinv_rtol = 1e-12;  // singular values below rtol*sigma_max are dropped
    double herm_tol = 1e-9;    // accepted asymmetry of "Hermitian" input
    double psd_tol = 1e-9;     // relative eigenvalue slack for Loewner tests
    double range_tol = 1e-9;   // range/null inclusion residual
    double zero_tol = 1e-9;    // hard threshold for degeneracy detection
    double lft_tol = 1e-12;    // sigma_min/sigma_max gate for inverted denominators
    double decay_tol = 1e-3;   // diamond decay bound at the top of the ladder
    double extract_tol = 1e-4; // relative moment-extraction tolerance
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
// Input violates a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};
// A denominator is (numerically) singular at the requested point.
class DomainError : public Error {
public:
    DomainError(const std::string& what, double sigma_ratio)
        : Error(what), sigma_ratio_(sigma_ratio) {}
    double sigma_ratio() const { return sigma_ratio_; }

private:
    double sigma_ratio_;
};
// A function is not O(1/z) at infinity.
class GrowthError : public Error {
public:
    using Error::Error;
};

inline CMat identity(Eigen::Index q) { return CMat::Identity(q, q); }
inline CMat zeros(Eigen::Index p, Eigen::Index q) { return CMat::Zero(p, q); }

inline bool all_finite(const CMat& A) {
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        const cd v = A.data()[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

inline double fro(const CMat& A) { return A.size() == 0 ? 0.0 : A.norm(); }

inline double spectral_norm(const CMat& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMat> svd(A);
    return svd.singularValues()(0);
}

inline CMat herm_part(const CMat& A) { return (A + A.adjoint()) / 2.0; }
// Im X = (X - X*)/(2i), Re X = (X + X*)/2.
inline CMat im_part(const CMat& A) { return (A - A.adjoint()) / (2.0 * I_unit); }
inline CMat re_part(const CMat& A) { return herm_part(A); }

inline CMat pinv(const CMat& A, double rtol = 1e-12) {
    if (A.size() == 0) return zeros(A.cols(), A.rows());
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    CMat out = zeros(A.cols(), A.rows());
    if (smax == 0.0) return out;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > rtol * smax)
            out += svd.matrixV().col(k) * (1.0 / sv(k)) * svd.matrixU().col(k).adjoint();
    }
    return out;
}

// Number of singular values above tol*max(1, sigma_max).
inline int numeric_rank(const CMat& A, double tol) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<CMat> svd(A);
    const auto& sv = svd.singularValues();
    const double cut = tol * std::max(1.0, sv(0));
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++r;
    return r;
}

// Square matrix that was checked to be Hermitian and stored symmetrized.
class HermMat {
public:
    HermMat() = default;
    explicit HermMat(const CMat& A, double herm_tol = 1e-9) {
        if (A.rows() != A.cols()) throw PreconditionError("Hermitian matrix must be square");
        if (!all_finite(A)) throw PreconditionError("matrix has non-finite entries");
        if (fro(A - A.adjoint()) > herm_tol * (1.0 + fro(A)))
            throw PreconditionError("matrix is not Hermitian within tolerance");
        m_ = herm_part(A);
    }
    const CMat& mat() const { return m_; }
    operator const CMat&() const { return m_; }
    Eigen::Index size() const { return m_.rows(); }

private:
    CMat m_;
};

inline Eigen::VectorXd herm_eigenvalues(const CMat& A) {
    if (A.size() == 0) return Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<CMat> es(herm_part(A), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double lambda_min(const CMat& A) {
    if (A.size() == 0) return 0.0;
    return herm_eigenvalues(A)(0);
}

inline double psd_scale(const CMat& A) { return std::max(1.0, spectral_norm(A)); }

inline bool is_psd(const CMat& A, double tol) {
    if (A.size() == 0) return true;
    return lambda_min(A) >= -tol * psd_scale(A);
}

inline bool is_pd(const CMat& A, double tol) {
    if (A.size() == 0) return true;
    return lambda_min(A) > tol * psd_scale(A);
}

// ran B within ran A  <=>  A A^+ B = B
inline bool range_contains(const CMat& A, const CMat& B, double tol, double rtol = 1e-12) {
    if (A.rows() != B.rows()) throw PreconditionError("range_contains: row mismatch");
    return fro(A * pinv(A, rtol) * B - B) <= tol * (1.0 + fro(B));
}

// N(A) within N(C)  <=>  C A^+ A = C
inline bool null_contains(const CMat& A, const CMat& C, double tol, double rtol = 1e-12) {
    if (A.cols() != C.cols()) throw PreconditionError("null_contains: column mismatch");
    return fro(C * pinv(A, rtol) * A - C) <= tol * (1.0 + fro(C));
}

struct LownerReport {
    bool cond_i = false;    // 0 <= B <= A
    bool cond_ii = false;   // 0 <= B+ B A+ B B+ <= B+ and N(A) in N(B)
    bool cond_iii = false;  // 0 <= B A+ B <= B and N(A) in N(B)
    bool cond_iv = false;   // [[A,B],[B,B]] >= 0
    bool null_inclusion = false;
    // Only evaluated when cond_i holds.
    bool null_bab_equals_null_b = false;
    bool range_bab_equals_range_b = false;
    bool agree() const { return cond_i == cond_ii && cond_ii == cond_iii && cond_iii == cond_iv; }
};

inline LownerReport lowner_leq_chain(const CMat& A, const CMat& B, double tol, double rtol = 1e-12) {
    const Eigen::Index q = A.rows();
    LownerReport r;
    const CMat Ap = pinv(A, rtol), Bp = pinv(B, rtol);
    r.null_inclusion = null_contains(A, B, tol, rtol);
    r.cond_i = is_psd(B, tol) && is_psd(A - B, tol);
    const CMat X = Bp * B * Ap * B * Bp;
    r.cond_ii = is_psd(X, tol) && is_psd(Bp - X, tol) && r.null_inclusion;
    const CMat Y = B * Ap * B;
    r.cond_iii = is_psd(Y, tol) && is_psd(B - Y, tol) && r.null_inclusion;
    CMat blk(2 * q, 2 * q);
    blk << A, B, B, B;
    r.cond_iv = is_psd(blk, tol);
    if (r.cond_i) {
        r.null_bab_equals_null_b = null_contains(Y, B, tol, rtol) && null_contains(B, Y, tol, rtol);
        r.range_bab_equals_range_b = range_contains(Y, B, tol, rtol) && range_contains(B, Y, tol, rtol);
    }
    return r;
}

enum class JKind { Imaginary, Real };

// Imaginary: [[0, -iI],[iI, 0]].  Real: [[0, -I],[-I, 0]].
inline CMat signature(Eigen::Index q, JKind kind) {
    CMat J = zeros(2 * q, 2 * q);
    const CMat Iq = identity(q);
    if (kind == JKind::Imaginary) {
        J.topRightCorner(q, q) = -I_unit * Iq;
        J.bottomLeftCorner(q, q) = I_unit * Iq;
    } else {
        J.topRightCorner(q, q) = -Iq;
        J.bottomLeftCorner(q, q) = -Iq;
    }
    return J;
}

// X* (-J) X for a stacked X with 2q rows.
inline CMat j_form(const CMat& X, JKind kind = JKind::Imaginary) {
    if (X.rows() % 2 != 0) throw PreconditionError("j_form: stacked matrix needs an even row count");
    const CMat J = signature(X.rows() / 2, kind);
    return herm_part(X.adjoint() * (-J) * X);
}

inline CMat block_diag(const CMat& a, const CMat& b) {
    CMat out = zeros(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

inline CMat vstack(const CMat& a, const CMat& b) {
    CMat out(a.rows() + b.rows(), a.cols());
    out << a, b;
    return out;
}

// Orthonormal basis of ran M (columns) and of its orthogonal complement.
struct RangeBasis {
    CMat U;  // q x r
    CMat V;  // q x (q - r)
    int rank = 0;
    CMat full() const {
        CMat W(U.rows(), U.cols() + V.cols());
        W << U, V;
        return W;
    }
};

inline RangeBasis range_basis(const CMat& M, double tol) {
    const Eigen::Index q = M.rows();
    RangeBasis rb;
    if (M.size() == 0) {
        rb.U = zeros(q, 0);
        rb.V = identity(q);
        return rb;
    }
    Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullU);
    rb.rank = numeric_rank(M, tol);
    rb.U = svd.matrixU().leftCols(rb.rank);
    rb.V = svd.matrixU().rightCols(q - rb.rank);
    return rb;
}

// Orthoprojector onto N(M*).
inline CMat null_adj_projector(const CMat& M, double tol) {
    const RangeBasis rb = range_basis(M, tol);
    return rb.V * rb.V.adjoint();
}

// Entries with modulus below thr are set to zero; the result is symmetrized.
inline CMat hard_threshold(const CMat& A, double thr) {
    CMat out = herm_part(A);
    for (Eigen::Index i = 0; i < out.size(); ++i)
        if (std::abs(out.data()[i]) <= thr) out.data()[i] = 0.0;
    return out;
}

// Smallest over largest singular value; 0 for a zero matrix.
// Hermitian part with eigenvalues of modulus <= thr set to zero.
inline CMat spectral_truncate(const CMat& A, double thr) {
    Eigen::SelfAdjointEigenSolver<CMat> es(herm_part(A));
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (std::abs(ev(k)) <= thr) ev(k) = 0.0;
    return herm_part(es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint());
}

inline double sigma_ratio(const CMat& A) {
    if (A.size() == 0) return 1.0;
    Eigen::JacobiSVD<CMat> svd(A);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) return 0.0;
    return sv(sv.size() - 1) / sv(0);
}

// Solves X * D = N for X, gated on the conditioning of D.
inline CMat right_divide(const CMat& N, const CMat& D, double tol, const std::string& where) {
    const double ratio = sigma_ratio(D);
    if (!(ratio >= tol))
        throw DomainError(where + ": denominator is singular (sigma_min/sigma_max = " +
                              std::to_string(ratio) + ")",
                          ratio);
    return D.transpose().partialPivLu().solve(N.transpose()).transpose();
}

}  // namespace stj
