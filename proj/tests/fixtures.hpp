// Well-conditioned random fixtures shared by the unit and acceptance tests.
// Nonzero eigenvalues are kept in [0.5, 2] in modulus so that identity
// residuals measure the formulas rather than conditioning.
#pragma once

#include "stj/solver.hpp"

#include <random>

namespace fx {

using namespace stj;

inline CMat gaussian(std::mt19937_64& rng, Eigen::Index p, Eigen::Index q) {
    std::normal_distribution<double> nd;
    CMat X(p, q);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < q; ++j) X(i, j) = cd(nd(rng), nd(rng));
    return X;
}

inline CMat unitary(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::HouseholderQR<CMat> qr(gaussian(rng, n, n));
    return qr.householderQ() * identity(n);
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

// U diag(l) U^* with r nonzero eigenvalues of modulus in [0.5, 2].
inline CMat herm_spectrum(std::mt19937_64& rng, Eigen::Index q, Eigen::Index r, bool psd) {
    const CMat U = unitary(rng, q);
    Eigen::VectorXd l = Eigen::VectorXd::Zero(q);
    for (Eigen::Index k = 0; k < r; ++k) {
        const double v = uniform(rng, 0.5, 2.0);
        l(k) = (psd || uniform(rng, 0, 1) < 0.5) ? v : -v;
    }
    return herm_part(U * l.cast<cd>().asDiagonal() * U.adjoint());
}

inline CMat psd_rank(std::mt19937_64& rng, Eigen::Index q, Eigen::Index r) { return herm_spectrum(rng, q, r, true); }

// Hermitian matrix with range inside ran A (A Hermitian), nonzero eigenvalues
// of modulus in [0.5, 2]; so N(A) is contained in its kernel.
inline CMat herm_in_range(std::mt19937_64& rng, const CMat& A, bool psd) {
    const RangeBasis rb = range_basis(A, 1e-9);
    if (rb.rank == 0) return zeros(A.rows(), A.rows());
    const CMat V = rb.U * unitary(rng, rb.rank);
    const CMat inner = herm_spectrum(rng, rb.rank, rb.rank, psd);
    return herm_part(V * inner * V.adjoint());
}

// Point off [alpha, inf) with |z - alpha| in [0.3, 4].
inline cd point_off_axis(std::mt19937_64& rng, double alpha) {
    const double th = uniform(rng, 0.15, 2.0 * 3.141592653589793 - 0.15);
    return alpha + std::polar(uniform(rng, 0.3, 4.0), th);
}

// Measure on [alpha, alpha + 3] with the given number of atoms and weight rank.
// Nodes are stratified so that they stay apart; clustered nodes make the
// Schur complements nearly singular.
inline DiscreteMeasure measure(std::mt19937_64& rng, double alpha, Eigen::Index q, int atoms, Eigen::Index rank) {
    std::vector<Atom> at;
    const double h = 3.0 / atoms;
    for (int k = 0; k < atoms; ++k) at.push_back({alpha + h * (k + uniform(rng, 0.15, 0.85)), psd_rank(rng, q, rank)});
    return DiscreteMeasure(alpha, at, q);
}

enum class Kind { NonDegenerate, CompletelyDegenerate, PartiallyDegenerate };

// Moment sequences of measures whose top Schur entry has the requested
// degeneracy: enough full-rank atoms; few atoms; or few full-rank atoms plus
// one rank-one atom to the right of them.
inline DiscreteMeasure case_measure(std::mt19937_64& rng, Kind kind, double alpha, Eigen::Index q, int m) {
    const int n = m / 2;
    switch (kind) {
        case Kind::NonDegenerate: return measure(rng, alpha, q, n + 2, q);
        case Kind::CompletelyDegenerate: {
            if (m % 2 == 1) {
                // n + 1 atoms with one of them at alpha
                auto mu = measure(rng, alpha, q, n + 1, q);
                mu.atoms[0].x = alpha;
                return mu;
            }
            return measure(rng, alpha, q, std::max(n, 1), q);
        }
        default: {
            auto mu = m % 2 == 1 ? measure(rng, alpha, q, n + 1, q) : measure(rng, alpha, q, std::max(n, 1), q);
            if (m % 2 == 1) mu.atoms[0].x = alpha;
            mu.atoms.push_back({alpha + uniform(rng, 3.3, 4.0), psd_rank(rng, q, 1)});
            return mu;
        }
    }
}

// Stieltjes transform of a small measure compressed into ran A: a pair in P(A).
inline RationalMatFun range_function(std::mt19937_64& rng, const CMat& A, double alpha, int atoms = 2) {
    const Eigen::Index q = A.rows();
    const CMat P = A * pinv(A);
    std::vector<SimplePole> poles;
    for (int k = 0; k < atoms; ++k)
        poles.push_back({alpha + uniform(rng, 0.1, 3.0), herm_part(P * psd_rank(rng, q, q) * P)});
    return RationalMatFun::pole_sum(zeros(q, q), std::move(poles));
}

inline double max_grid_distance(const RationalMatFun& a, const RationalMatFun& b, const std::vector<cd>& pts) {
    double d = 0.0;
    for (cd z : pts) d = std::max(d, fro(a(z) - b(z)));
    return d;
}

}  // namespace fx
