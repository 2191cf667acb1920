// linalg.hpp — Regularized solves for the ill-conditioned coherent-state
// overlap matrix. The basis is overcomplete, so the Gram matrix routinely has
// eigenvalues at round-off level; truncated spectral inversion is the
// standard cure.

#pragma once

#include <stdexcept>

#include "ccs/types.hpp"

namespace ccs {

struct RegularizedSolveInfo {
    double lambda_max{0.0};
    double lambda_min_raw{0.0};   // smallest eigenvalue before truncation
    double lambda_min_kept{0.0};  // smallest retained eigenvalue
    int truncated{0};             // number of discarded eigendirections

    double condition() const {
        return lambda_min_kept > 0.0 ? lambda_max / lambda_min_kept : 0.0;
    }
};

// Solves A x = b for Hermitian positive semidefinite A, discarding
// eigendirections with eigenvalue below eps_rel * lambda_max.
inline VectorXcd solve_hermitian_regularized(const MatrixXcd& A, const VectorXcd& b,
                                             double eps_rel,
                                             RegularizedSolveInfo* info = nullptr) {
    if (A.rows() != A.cols() || A.rows() != b.size())
        throw std::invalid_argument("solve_hermitian_regularized: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("solve_hermitian_regularized: eigendecomposition failed");
    const VectorXd& lam = es.eigenvalues();  // ascending
    const Eigen::Index n = lam.size();
    const double lmax = lam[n - 1];
    if (!(lmax > 0.0))
        throw std::runtime_error("solve_hermitian_regularized: matrix is not positive");
    const double cutoff = eps_rel * lmax;

    VectorXcd proj = es.eigenvectors().adjoint() * b;
    int dropped = 0;
    double lmin_kept = lmax;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (lam[i] > cutoff) {
            proj[i] /= lam[i];
            if (lam[i] < lmin_kept) lmin_kept = lam[i];
        } else {
            proj[i] = 0.0;
            ++dropped;
        }
    }
    if (info) {
        info->lambda_max = lmax;
        info->lambda_min_raw = lam[0];
        info->lambda_min_kept = lmin_kept;
        info->truncated = dropped;
    }
    return es.eigenvectors() * proj;
}

}  // namespace ccs
