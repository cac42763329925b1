// Linear fractional transformations of matrices and of matrix pairs.
#pragma once

#include "stj/matcore.hpp"

namespace stj {

// E = [[a, b], [c, d]] with a: p x p and d: q x q.
struct BlockGenerator {
    CMat a, b, c, d;

    static BlockGenerator from_matrix(const CMat& E, Eigen::Index p) {
        const Eigen::Index q = E.rows() - p;
        return {E.topLeftCorner(p, p), E.topRightCorner(p, q), E.bottomLeftCorner(q, p),
                E.bottomRightCorner(q, q)};
    }
    CMat matrix() const {
        CMat E(a.rows() + c.rows(), a.cols() + b.cols());
        E << a, b, c, d;
        return E;
    }
};

inline int lower_rank(const BlockGenerator& E, double tol) {
    CMat cd_(E.c.rows(), E.c.cols() + E.d.cols());
    cd_ << E.c, E.d;
    return numeric_rank(cd_, tol);
}

inline void require_rank(const BlockGenerator& E, double tol, const std::string& where) {
    if (lower_rank(E, tol) < E.d.rows())
        throw DomainError(where + ": rank [c, d] < q, the transform has an empty domain", 0.0);
}

// (a x + b)(c x + d)^{-1}
inline CMat lft_matrix(const BlockGenerator& E, const CMat& x, const ToleranceConfig& cfg = {}) {
    require_rank(E, cfg.zero_tol, "lft_matrix");
    return right_divide(E.a * x + E.b, E.c * x + E.d, cfg.lft_tol, "lft_matrix");
}

// (a x + b y)(c x + d y)^{-1}
inline CMat lft_pair(const BlockGenerator& E, const CMat& x, const CMat& y, const ToleranceConfig& cfg = {}) {
    require_rank(E, cfg.zero_tol, "lft_pair");
    return right_divide(E.a * x + E.b * y, E.c * x + E.d * y, cfg.lft_tol, "lft_pair");
}

inline BlockGenerator compose_generators(const BlockGenerator& E2, const BlockGenerator& E1) {
    return BlockGenerator::from_matrix(E2.matrix() * E1.matrix(), E2.a.rows());
}

struct ComposeResult {
    CMat value;                // T_{E2}(T_{E1}(x, y))
    double product_residual;   // vs T_{E2 E1}(x, y)
    double pushed_residual;    // vs T_{E2}(x~, y~) with [x~; y~] = E1 [x; y]
};

// Evaluates the staged transform and both composed forms; domain errors name
// the failing stage.
inline ComposeResult compose(const BlockGenerator& E2, const BlockGenerator& E1, const CMat& x, const CMat& y,
                             const ToleranceConfig& cfg = {}) {
    auto stage = [](const std::string& name, auto&& fn) {
        try {
            return fn();
        } catch (const DomainError& e) {
            throw DomainError(name + ": " + e.what(), e.sigma_ratio());
        }
    };
    const CMat inner = stage("stage 1", [&] { return lft_pair(E1, x, y, cfg); });
    const CMat staged = stage("stage 2", [&] { return lft_matrix(E2, inner, cfg); });
    const BlockGenerator E = compose_generators(E2, E1);
    const CMat direct = stage("composed generator", [&] { return lft_pair(E, x, y, cfg); });
    const CMat xt = E1.a * x + E1.b * y, yt = E1.c * x + E1.d * y;
    const CMat pushed = stage("pushed pair", [&] { return lft_pair(E2, xt, yt, cfg); });
    return {staged, fro(staged - direct), fro(staged - pushed)};
}

}  // namespace stj
