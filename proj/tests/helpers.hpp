#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>

#include "ffmor/model.hpp"

namespace ffmor::testing {

inline std::string data_path(const std::string& name) {
    return std::string(FFMOR_DATA_DIR) + "/" + name;
}

inline Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// Independent Lyapunov oracle: (I (x) A + conj(A) (x) I) vec(P) = -vec(W).
inline Matrix kron_lyapunov_continuous(const Matrix& A, const Matrix& W) {
    const Eigen::Index n = A.rows();
    const Matrix I = Matrix::Identity(n, n);
    Matrix lhs = kron(I, A) + kron(A.conjugate(), I);
    Eigen::VectorXcd vecW = Eigen::Map<const Eigen::VectorXcd>(W.data(), n * n);
    Eigen::VectorXcd vecP = lhs.fullPivLu().solve(-vecW);
    return Eigen::Map<const Matrix>(vecP.data(), n, n);
}

// Stein oracle: (conj(A) (x) A - I) vec(P) = -vec(W).
inline Matrix kron_lyapunov_discrete(const Matrix& A, const Matrix& W) {
    const Eigen::Index n = A.rows();
    Matrix lhs = kron(A.conjugate(), A) - Matrix::Identity(n * n, n * n);
    Eigen::VectorXcd vecW = Eigen::Map<const Eigen::VectorXcd>(W.data(), n * n);
    Eigen::VectorXcd vecP = lhs.fullPivLu().solve(-vecW);
    return Eigen::Map<const Matrix>(vecP.data(), n, n);
}

// Transfer oracle with an explicit dense inverse.
inline Matrix dense_inverse_transfer(const StateSpaceModel& m, Complex s) {
    Matrix shifted = s * Matrix::Identity(m.order(), m.order()) - m.A;
    return m.C * shifted.inverse() * m.B + m.D;
}

class Rng {
  public:
    explicit Rng(unsigned seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    Eigen::Index index(Eigen::Index lo, Eigen::Index hi) {
        return std::uniform_int_distribution<Eigen::Index>(lo, hi)(gen_);
    }

    Matrix matrix(Eigen::Index rows, Eigen::Index cols, bool complex_entries) {
        std::normal_distribution<double> dist(0.0, 1.0);
        Matrix M(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                M(i, j) = Complex(dist(gen_), complex_entries ? dist(gen_) : 0.0);
        return M;
    }

    Matrix hurwitz(Eigen::Index n, bool complex_entries) {
        Matrix A = matrix(n, n, complex_entries);
        const double shift =
            Eigen::ComplexEigenSolver<Matrix>(A).eigenvalues().real().maxCoeff();
        A.diagonal().array() -= Complex(shift + uniform(0.5, 2.0), 0.0);
        return A;
    }

    Matrix schur_stable(Eigen::Index n, bool complex_entries) {
        Matrix A = matrix(n, n, complex_entries);
        const double radius =
            Eigen::ComplexEigenSolver<Matrix>(A).eigenvalues().cwiseAbs().maxCoeff();
        return A * (uniform(0.3, 0.95) / std::max(radius, 1e-12));
    }

    StateSpaceModel model(Eigen::Index n, Eigen::Index m, Eigen::Index p,
                          TimeDomain domain, bool complex_entries = false) {
        Matrix A = domain == TimeDomain::Continuous ? hurwitz(n, complex_entries)
                                                    : schur_stable(n, complex_entries);
        return make_model(A, matrix(n, m, complex_entries),
                          matrix(p, n, complex_entries),
                          matrix(p, m, complex_entries), domain);
    }

  private:
    std::mt19937 gen_;
};

inline double rel_err(const Matrix& got, const Matrix& want) {
    return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace ffmor::testing
