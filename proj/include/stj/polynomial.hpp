// Matrix polynomials with complex matrix coefficients.
#pragma once

#include "stj/matcore.hpp"

namespace stj {

class MatrixPolynomial {
public:
    MatrixPolynomial() = default;
    MatrixPolynomial(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {}
    explicit MatrixPolynomial(std::vector<CMat> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw PreconditionError("polynomial needs at least one coefficient");
        rows_ = coeffs_[0].rows();
        cols_ = coeffs_[0].cols();
        for (const auto& c : coeffs_)
            if (c.rows() != rows_ || c.cols() != cols_)
                throw PreconditionError("polynomial coefficients must share one shape");
    }
    static MatrixPolynomial constant(const CMat& c) { return MatrixPolynomial(std::vector<CMat>{c}); }
    // c0 + c1 z
    static MatrixPolynomial linear(const CMat& c0, const CMat& c1) {
        return MatrixPolynomial(std::vector<CMat>{c0, c1});
    }
    // p(z) * I_q for a scalar polynomial with ascending coefficients
    static MatrixPolynomial scalar(const std::vector<cd>& p, Eigen::Index q) {
        std::vector<CMat> c;
        for (cd a : p) c.push_back(a * identity(q));
        if (c.empty()) c.push_back(zeros(q, q));
        return MatrixPolynomial(c);
    }

    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    const std::vector<CMat>& coeffs() const { return coeffs_; }
    int length() const { return static_cast<int>(coeffs_.size()); }

    // Index of the top coefficient with norm above tol (-1 for the zero polynomial).
    int degree(double tol = 0.0) const {
        for (int d = length() - 1; d >= 0; --d)
            if (fro(coeffs_[d]) > tol) return d;
        return -1;
    }

    CMat operator()(cd z) const {
        CMat acc = zeros(rows_, cols_);
        for (int d = length() - 1; d >= 0; --d) acc = acc * z + coeffs_[d];
        return acc;
    }

    MatrixPolynomial block(Eigen::Index i, Eigen::Index j, Eigen::Index p, Eigen::Index q) const {
        std::vector<CMat> c;
        for (const auto& x : coeffs_) c.push_back(x.block(i, j, p, q));
        return MatrixPolynomial(c);
    }

    // Scalar-multiple-of-identity test for square polynomials.
    bool is_scalar(double tol = 0.0) const {
        if (rows_ != cols_) return false;
        for (const auto& c : coeffs_) {
            const cd a = rows_ ? c(0, 0) : cd(0);
            if (fro(c - a * identity(rows_)) > tol * (1.0 + std::abs(a))) return false;
        }
        return true;
    }
    // Ascending coefficients of p when this equals p(z) * I.
    std::vector<cd> scalar_coeffs() const {
        std::vector<cd> p;
        for (const auto& c : coeffs_) p.push_back(rows_ ? c(0, 0) : cd(0));
        return p;
    }

    MatrixPolynomial trimmed(double tol = 0.0) const {
        const int d = std::max(degree(tol), 0);
        return MatrixPolynomial(std::vector<CMat>(coeffs_.begin(), coeffs_.begin() + d + 1));
    }

    friend MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b) {
        if (a.cols_ != b.rows_) throw PreconditionError("polynomial product: shape mismatch");
        std::vector<CMat> c(a.length() + b.length() - 1, zeros(a.rows_, b.cols_));
        for (int i = 0; i < a.length(); ++i)
            for (int j = 0; j < b.length(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return MatrixPolynomial(c);
    }
    friend MatrixPolynomial operator+(const MatrixPolynomial& a, const MatrixPolynomial& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("polynomial sum: shape mismatch");
        const int n = std::max(a.length(), b.length());
        std::vector<CMat> c(n, zeros(a.rows_, a.cols_));
        for (int i = 0; i < a.length(); ++i) c[i] += a.coeffs_[i];
        for (int i = 0; i < b.length(); ++i) c[i] += b.coeffs_[i];
        return MatrixPolynomial(c);
    }
    friend MatrixPolynomial operator-(const MatrixPolynomial& a, const MatrixPolynomial& b) {
        return a + b * MatrixPolynomial::constant(-identity(b.cols_));
    }
    friend MatrixPolynomial operator*(const CMat& m, const MatrixPolynomial& p) {
        return MatrixPolynomial::constant(m) * p;
    }
    friend MatrixPolynomial operator*(const MatrixPolynomial& p, const CMat& m) {
        return p * MatrixPolynomial::constant(m);
    }

    // Max coefficientwise Frobenius distance (shorter side padded with zeros).
    friend double coeff_distance(const MatrixPolynomial& a, const MatrixPolynomial& b) {
        double d = 0.0;
        const int n = std::max(a.length(), b.length());
        for (int i = 0; i < n; ++i) {
            const CMat x = i < a.length() ? a.coeffs_[i] : zeros(a.rows_, a.cols_);
            const CMat y = i < b.length() ? b.coeffs_[i] : zeros(b.rows_, b.cols_);
            d = std::max(d, fro(x - y));
        }
        return d;
    }

private:
    std::vector<CMat> coeffs_;
    Eigen::Index rows_ = 0, cols_ = 0;
};

// Product of scalar polynomials (ascending coefficients).
inline std::vector<cd> scalar_poly_mul(const std::vector<cd>& a, const std::vector<cd>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<cd> c(a.size() + b.size() - 1, cd(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace stj
