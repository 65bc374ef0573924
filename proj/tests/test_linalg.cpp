#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffmor/linalg.hpp"
#include "ffmor/model_io.hpp"
#include "helpers.hpp"

using namespace ffmor;
using namespace ffmor::testing;

TEST_CASE("scalar continuous Lyapunov equation") {
    Matrix A(1, 1), W(1, 1);
    A << Complex(-1.0, 0.0);
    W << 2.0;
    LyapunovSolution sol = solve_lyapunov_continuous(A, W);
    CHECK(std::abs(sol.P(0, 0).real() - 1.0) < 1e-14);
    CHECK(sol.residual_norm < 1e-12);
}

TEST_CASE("scalar discrete Stein equation") {
    Matrix A(1, 1), W(1, 1);
    A << 0.5;
    W << 0.75;
    LyapunovSolution sol = solve_lyapunov_discrete(A, W);
    CHECK(std::abs(sol.P(0, 0).real() - 1.0) < 1e-14);
}

TEST_CASE("first example Gramian matches the Kronecker oracle") {
    StateSpaceModel m = load_model(data_path("example1.json"));
    Matrix W = m.B * m.B.adjoint();
    LyapunovSolution sol = solve_lyapunov_continuous(m.A, W);
    CHECK(rel_err(sol.P, kron_lyapunov_continuous(m.A, W)) < 1e-10);
}

TEST_CASE("random instances match the Kronecker oracle in both time domains") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = rng.index(1, 6);
        const bool cplx = trial % 2 == 0;
        Matrix Bc = rng.matrix(n, 2, cplx);
        Matrix W = Bc * Bc.adjoint();

        Matrix Ac = rng.hurwitz(n, cplx);
        LyapunovSolution c = solve_lyapunov_continuous(Ac, W);
        CHECK(rel_err(c.P, kron_lyapunov_continuous(Ac, W)) < 1e-9);

        Matrix Ad = rng.schur_stable(n, cplx);
        LyapunovSolution d = solve_lyapunov_discrete(Ad, W);
        CHECK(rel_err(d.P, kron_lyapunov_discrete(Ad, W)) < 1e-9);
    }
}

TEST_CASE("unstable inputs are rejected") {
    Matrix A = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(solve_lyapunov_continuous(A, Matrix::Identity(2, 2)), NotStable);
    CHECK_THROWS_AS(solve_lyapunov_discrete(Matrix::Identity(2, 2), Matrix::Identity(2, 2)),
                    NotStable);
}

TEST_CASE("psd Cholesky factors reconstruct the input") {
    CHECK(rel_err(cholesky_psd(Matrix::Identity(3, 3)), Matrix::Identity(3, 3)) == 0.0);
    Matrix P(2, 2);
    P << 4.0, 2.0, 2.0, 2.0;
    Matrix L = cholesky_psd(P);
    CHECK(rel_err(L * L.adjoint(), P) < 1e-12);

    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(cholesky_psd(neg), NotPsd);

    // Rank-deficient but PSD.
    Matrix ones = Matrix::Ones(3, 3);
    Matrix Lr = cholesky_psd(ones);
    CHECK(rel_err(Lr * Lr.adjoint(), ones) < 1e-10);
}

TEST_CASE("Hermitian eigendecomposition is descending and reconstructs") {
    Matrix Mdiag(2, 2);
    Mdiag << 1.0, 0.0, 0.0, 3.0;
    auto [vals, vecs] = eig_hermitian(Mdiag);
    CHECK(vals(0) == 3.0);
    CHECK(vals(1) == 1.0);

    Rng rng(22);
    Matrix R = rng.matrix(6, 6, true);
    Matrix H = R + R.adjoint();
    auto [lam, V] = eig_hermitian(H);
    CHECK(rel_err(V * lam.cast<Complex>().asDiagonal() * V.adjoint(), H) <
          1e-10);
    CHECK(rel_err(V.adjoint() * V, Matrix::Identity(6, 6)) < 1e-10);
    for (int i = 1; i < 6; ++i) CHECK(lam(i - 1) >= lam(i));

    auto [zeros, Vz] = eig_hermitian(Matrix::Zero(3, 3));
    CHECK(zeros.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("general eigenvalues") {
    StateSpaceModel m = load_model(data_path("example1.json"));
    Vector lam = eigenvalues_general(m.A);
    // Quadratic-formula oracle for the 2x2 characteristic polynomial.
    const double tr = -4.1859 - 1.1872;
    const double det = 4.1859 * 1.1872 - 0.7195 * 1.7797;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    const double l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    CHECK(std::abs(std::max(lam(0).real(), lam(1).real()) - std::max(l1, l2)) < 1e-10);
    CHECK(std::abs(std::min(lam(0).real(), lam(1).real()) - std::min(l1, l2)) < 1e-10);
    CHECK(lam.real().maxCoeff() < 0.0);

    Matrix T = Matrix::Zero(3, 3);
    T(0, 0) = 1.0;
    T(1, 1) = Complex(2.0, 1.0);
    T(2, 2) = -5.0;
    T(0, 2) = 9.0;
    Vector tl = eigenvalues_general(T);
    std::sort(tl.data(), tl.data() + 3,
              [](Complex a, Complex b) { return a.real() < b.real(); });
    CHECK(std::abs(tl(0) - Complex(-5.0, 0.0)) < 1e-12);
    CHECK(std::abs(tl(2) - Complex(2.0, 1.0)) < 1e-12);

    Matrix R(2, 2);
    R << 0.0, 1.0, -1.0, 0.0;
    Vector rl = eigenvalues_general(R);
    CHECK(std::abs(rl.cwiseAbs().maxCoeff() - 1.0) < 1e-12);
    CHECK(std::abs(rl(0).real()) < 1e-12);
}
