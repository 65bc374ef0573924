#include "ffmor/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

namespace ffmor {

bool is_hurwitz(const Matrix& A, double margin) {
    return eigenvalues_general(A).real().maxCoeff() < -margin;
}

bool is_schur(const Matrix& A, double margin) {
    return eigenvalues_general(A).cwiseAbs().maxCoeff() < 1.0 - margin;
}

bool is_stable(const StateSpaceModel& model) {
    return model.time_domain == TimeDomain::Continuous ? is_hurwitz(model.A)
                                                       : is_schur(model.A);
}

Vector eigenvalues_general(const Matrix& A) {
    Eigen::ComplexEigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("eigenvalue iteration failed");
    return es.eigenvalues();
}

// Schur-based solver for A P + P A* = -W (continuous) or
// A P A* - P = -W (discrete).  With A = U T U* and the substitution
// P = U Y U*, the transformed equation T Y + Y T* = -U* W U is solved
// column by column from the last: for column j,
//   (T + conj(T_jj) I) y_j = -w_j - sum_{k>j} y_k conj(T_jk),
// and in the discrete case
//   (conj(T_jj) T - I) y_j = -w_j - T sum_{k>j} y_k conj(T_jk).
static Matrix schur_lyapunov(const Matrix& A, const Matrix& W, bool discrete) {
    const Eigen::Index n = A.rows();
    Eigen::ComplexSchur<Matrix> schur(A);
    if (schur.info() != Eigen::Success)
        throw NoConvergence("Schur decomposition failed");
    const Matrix& T = schur.matrixT();
    const Matrix& U = schur.matrixU();
    Matrix Wt = U.adjoint() * W * U;
    Matrix Y = Matrix::Zero(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Vector rhs = -Wt.col(j);
        Vector acc = Vector::Zero(n);
        for (Eigen::Index k = j + 1; k < n; ++k)
            acc += Y.col(k) * std::conj(T(j, k));
        Matrix lhs;
        if (discrete) {
            rhs -= T * acc;
            lhs = std::conj(T(j, j)) * T - Matrix::Identity(n, n);
        } else {
            rhs -= acc;
            lhs = T;
            lhs.diagonal().array() += std::conj(T(j, j));
        }
        // lhs is upper triangular in both cases.
        Y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    return U * Y * U.adjoint();
}

static LyapunovSolution finish_solution(const Matrix& A, const Matrix& W,
                                        Matrix P, bool discrete) {
    P = 0.5 * (P + P.adjoint()).eval();
    Matrix residual = discrete ? Matrix(A * P * A.adjoint() - P + W)
                               : Matrix(A * P + P * A.adjoint() + W);
    const double rnorm = residual.norm();
    if (!(rnorm <= 1e-10 * std::max(1.0, W.norm())))
        throw NoConvergence("Lyapunov residual " + std::to_string(rnorm) +
                            " above tolerance");
    return {std::move(P), rnorm};
}

LyapunovSolution solve_lyapunov_continuous(const Matrix& A, const Matrix& W) {
    if (eigenvalues_general(A).real().maxCoeff() >= -1e-12)
        throw NotStable("A is not Hurwitz");
    return finish_solution(A, W, schur_lyapunov(A, W, false), false);
}

LyapunovSolution solve_lyapunov_discrete(const Matrix& A, const Matrix& W) {
    if (eigenvalues_general(A).cwiseAbs().maxCoeff() >= 1.0 - 1e-12)
        throw NotStable("A is not Schur stable");
    return finish_solution(A, W, schur_lyapunov(A, W, true), true);
}

Matrix cholesky_psd(const Matrix& P) {
    const Matrix H = 0.5 * (P + P.adjoint());
    const double scale = std::max(H.norm(), 1e-300);
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success)
        throw NoConvergence("Hermitian eigensolver failed");
    if (es.eigenvalues().minCoeff() < -1e-8 * scale)
        throw NotPsd("matrix has eigenvalue " +
                     std::to_string(es.eigenvalues().minCoeff()));
    Eigen::LLT<Matrix> llt(H);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    // Near rank deficiency: eigendecomposition-based factor of the
    // clipped matrix.
    Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
}

std::pair<Eigen::VectorXd, Matrix> eig_hermitian(const Matrix& M) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.adjoint()));
    if (es.info() != Eigen::Success)
        throw NoConvergence("Hermitian eigensolver failed");
    const Eigen::Index n = M.rows();
    Eigen::VectorXd vals(n);
    Matrix vecs(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        vals(i) = es.eigenvalues()(n - 1 - i);
        vecs.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return {vals, vecs};
}

}  // namespace ffmor
