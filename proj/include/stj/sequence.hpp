// Finite Hermitian moment sequence with base point alpha.
#pragma once

#include "stj/matcore.hpp"

namespace stj {

struct MomentSequence {
    double alpha = 0.0;
    std::vector<CMat> s;  // s_0 .. s_m, each q x q Hermitian

    MomentSequence() = default;
    MomentSequence(double a, std::vector<CMat> seq, double herm_tol = 1e-9) : alpha(a) {
        if (seq.empty()) throw PreconditionError("moment sequence must be nonempty");
        const Eigen::Index q = seq[0].rows();
        for (const auto& x : seq) {
            if (x.rows() != q || x.cols() != q)
                throw PreconditionError("all moments must be q x q with a common q");
            s.push_back(HermMat(x, herm_tol).mat());
        }
    }

    Eigen::Index q() const { return s.empty() ? 0 : s[0].rows(); }
    int m() const { return static_cast<int>(s.size()) - 1; }

    // s_{alpha,j} = -alpha s_j + s_{j+1}, j = 0..m-1
    std::vector<CMat> shifted() const {
        std::vector<CMat> v;
        for (int j = 0; j < m(); ++j) v.push_back(-alpha * s[j] + s[j + 1]);
        return v;
    }

    MomentSequence prefix(int l) const {
        MomentSequence out;
        out.alpha = alpha;
        out.s.assign(s.begin(), s.begin() + l + 1);
        return out;
    }
};

}  // namespace stj
