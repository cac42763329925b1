// Matrix-valued functions of one complex variable: polynomial fractions
// N(z) D(z)^{-1}, pole sums C + sum R_k/(x_k - z), and pointwise closures
// produced by transforms.
#pragma once

#include "stj/polynomial.hpp"

#include <functional>
#include <memory>

namespace stj {

struct SimplePole {
    double x;
    CMat residue;  // contributes residue/(x - z)
};

class RationalMatFun {
public:
    enum class Kind { Fraction, PoleSum, Pointwise };
    using Eval = std::function<CMat(cd)>;

    RationalMatFun() = default;

    static RationalMatFun fraction(MatrixPolynomial num, MatrixPolynomial den) {
        if (den.rows() != den.cols() || num.cols() != den.rows())
            throw PreconditionError("fraction: numerator/denominator shape mismatch");
        RationalMatFun f;
        f.kind_ = Kind::Fraction;
        f.rows_ = num.rows();
        f.cols_ = num.cols();
        f.num_ = std::move(num);
        f.den_ = std::move(den);
        return f;
    }
    static RationalMatFun constant(const CMat& C) {
        return pole_sum(C, {});
    }
    static RationalMatFun pole_sum(const CMat& C, std::vector<SimplePole> poles) {
        RationalMatFun f;
        f.kind_ = Kind::PoleSum;
        f.rows_ = C.rows();
        f.cols_ = C.cols();
        f.constant_ = C;
        f.poles_ = std::move(poles);
        return f;
    }
    static RationalMatFun pointwise(Eigen::Index rows, Eigen::Index cols, Eval fn) {
        RationalMatFun f;
        f.kind_ = Kind::Pointwise;
        f.rows_ = rows;
        f.cols_ = cols;
        f.fn_ = std::make_shared<Eval>(std::move(fn));
        return f;
    }

    Kind kind() const { return kind_; }
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    const MatrixPolynomial& num() const { return num_; }
    const MatrixPolynomial& den() const { return den_; }
    const CMat& constant_term() const { return constant_; }
    const std::vector<SimplePole>& poles() const { return poles_; }

    CMat operator()(cd z, double lft_tol = 1e-12) const {
        switch (kind_) {
            case Kind::Fraction: return right_divide(num_(z), den_(z), lft_tol, "rational function");
            case Kind::PoleSum: {
                CMat acc = constant_;
                for (const auto& p : poles_) {
                    const cd d = p.x - z;
                    if (std::abs(d) == 0.0) throw DomainError("pole sum evaluated at a pole", 0.0);
                    acc += p.residue / d;
                }
                return acc;
            }
            default: return (*fn_)(z);
        }
    }

    bool has_fraction_form() const { return kind_ != Kind::Pointwise; }

    // Upper bound on |pole - center| for the finite poles, or -1 when unknown.
    // Fractions: eigenvalues mu of the reversed denominator in 1/(z - z0),
    // poles z = z0 + 1/mu with z0 a regular point.
    double pole_radius(double center, cd z0) const {
        if (kind_ == Kind::PoleSum) {
            double r = 0.0;
            for (const auto& p : poles_) r = std::max(r, std::abs(p.x - center));
            return r;
        }
        if (kind_ == Kind::Pointwise) return pole_hint_;
        const Eigen::Index q = den_.rows();
        const MatrixPolynomial D = den_.trimmed();
        const int d = D.degree();
        if (d <= 0) return 0.0;
        const double rc = column_reduced_pole_radius(D, center);
        if (rc >= 0.0) return rc;
        // Coefficients of D re-expanded at z0.
        std::vector<CMat> t(d + 1, zeros(q, q));
        for (int k = 0; k <= d; ++k) {
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                if (j > 0) binom = binom * (k - j + 1) / j;
                t[j] += binom * std::pow(z0, k - j) * D.coeffs()[k];
            }
        }
        Eigen::PartialPivLU<CMat> lu(t[0]);
        CMat C = zeros(q * d, q * d);
        for (int i = 1; i <= d; ++i) C.block(0, (i - 1) * q, q, q) = -lu.solve(t[i]);
        for (int i = 1; i < d; ++i) C.block(i * q, (i - 1) * q, q, q) = identity(q);
        Eigen::ComplexEigenSolver<CMat> es(C, false);
        double r = 0.0;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            const cd mu = es.eigenvalues()(k);
            if (std::abs(mu) > 1e-9) r = std::max(r, std::abs(z0 + 1.0 / mu - center));
        }
        return r;
    }
    RationalMatFun with_pole_hint(double r) const {
        auto f = *this;
        f.pole_hint_ = r;
        return f;
    }

    // Polynomial fraction with the same values; pole sums get the scalar
    // denominator prod_k (x_k - z).
    RationalMatFun to_fraction() const {
        if (kind_ == Kind::Fraction) return *this;
        if (kind_ == Kind::Pointwise) throw PreconditionError("pointwise function has no fraction form");
        std::vector<cd> d{cd(1)};
        for (const auto& p : poles_) d = scalar_poly_mul(d, {cd(p.x), cd(-1)});
        MatrixPolynomial num = MatrixPolynomial::constant(constant_) * MatrixPolynomial::scalar(d, cols_);
        for (std::size_t k = 0; k < poles_.size(); ++k) {
            std::vector<cd> dk{cd(1)};
            for (std::size_t l = 0; l < poles_.size(); ++l)
                if (l != k) dk = scalar_poly_mul(dk, {cd(poles_[l].x), cd(-1)});
            num = num + MatrixPolynomial::constant(poles_[k].residue) * MatrixPolynomial::scalar(dk, cols_);
        }
        return fraction(num, MatrixPolynomial::scalar(d, cols_));
    }

    // Conjugation by fixed matrices: L F(z) R.
    RationalMatFun sandwich(const CMat& L, const CMat& R) const {
        if (kind_ == Kind::PoleSum) {
            std::vector<SimplePole> ps;
            for (const auto& p : poles_) ps.push_back({p.x, L * p.residue * R});
            return pole_sum(L * constant_ * R, std::move(ps));
        }
        auto self = *this;
        return pointwise(L.rows(), R.cols(), [self, L, R](cd z) { return CMat(L * self(z) * R); });
    }

private:
    // Pads column k of D by (z - center)^(d - d_k) so that the column-leading
    // matrix becomes the leading coefficient; if it is well conditioned the
    // finite roots are the eigenvalues of the monic block companion and no
    // near-infinite eigenvalues appear. Returns -1 when D is not column reduced.
    static double column_reduced_pole_radius(const MatrixPolynomial& D, double center) {
        const Eigen::Index q = D.rows();
        const int d = D.degree();
        double scale = 0.0;
        for (const auto& c : D.coeffs()) scale = std::max(scale, fro(c));
        std::vector<int> deg(q, -1);
        CMat L = zeros(q, q);
        for (Eigen::Index k = 0; k < q; ++k) {
            for (int j = d; j >= 0; --j)
                if (D.coeffs()[j].col(k).norm() > 1e-14 * scale) {
                    deg[k] = j;
                    break;
                }
            if (deg[k] < 0) return -1.0;
            L.col(k) = D.coeffs()[deg[k]].col(k);
        }
        if (sigma_ratio(L) < 1e-10) return -1.0;
        // coefficients of D(z) diag((z - center)^(d - d_k)) in powers of (z - center)
        std::vector<CMat> t(d + 1, zeros(q, q));
        for (Eigen::Index k = 0; k < q; ++k) {
            const int pad = d - deg[k];
            for (int j = 0; j <= deg[k]; ++j) {
                double binom = 1.0;
                for (int i = 0; i <= j; ++i) {
                    if (i > 0) binom = binom * (j - i + 1) / i;
                    t[i + pad].col(k) += binom * std::pow(center, j - i) * D.coeffs()[j].col(k);
                }
            }
        }
        Eigen::PartialPivLU<CMat> lu(t[d]);
        CMat C = zeros(q * d, q * d);
        for (int i = 0; i < d; ++i) C.block((d - 1) * q, i * q, q, q) = -lu.solve(t[i]);
        for (int i = 0; i + 1 < d; ++i) C.block(i * q, (i + 1) * q, q, q) = identity(q);
        Eigen::ComplexEigenSolver<CMat> es(C, false);
        double r = 0.0;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) r = std::max(r, std::abs(es.eigenvalues()(k)));
        return r;
    }

    Kind kind_ = Kind::PoleSum;
    Eigen::Index rows_ = 0, cols_ = 0;
    MatrixPolynomial num_, den_;
    CMat constant_;
    std::vector<SimplePole> poles_;
    std::shared_ptr<Eval> fn_;
    double pole_hint_ = -1.0;
};

}  // namespace stj
