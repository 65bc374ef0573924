#pragma once

#include <utility>

#include "ffmor/model.hpp"

namespace ffmor {

struct LyapunovSolution {
    Matrix P;              // Hermitian solution
    double residual_norm;  // Frobenius norm of the equation residual
};

/// Solves A P + P A* + W = 0 for Hurwitz A and Hermitian PSD W.
LyapunovSolution solve_lyapunov_continuous(const Matrix& A, const Matrix& W);

/// Solves A P A* - P + W = 0 for Schur-stable A and Hermitian PSD W.
LyapunovSolution solve_lyapunov_discrete(const Matrix& A, const Matrix& W);

/// Lower factor L with P = L L*.  Slightly negative eigenvalues
/// (>= -1e-10 ||P||) are clipped; uses an eigendecomposition-based
/// factor when plain Cholesky fails near rank deficiency.
Matrix cholesky_psd(const Matrix& P);

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending,
/// eigenvectors orthonormal in the columns of the returned matrix.
std::pair<Eigen::VectorXd, Matrix> eig_hermitian(const Matrix& M);

Vector eigenvalues_general(const Matrix& A);

bool is_hurwitz(const Matrix& A, double margin = 1e-12);
bool is_schur(const Matrix& A, double margin = 1e-9);
bool is_stable(const StateSpaceModel& model);

}  // namespace ffmor
