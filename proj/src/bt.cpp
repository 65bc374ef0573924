#include "ffmor/bt.hpp"

#include <Eigen/LU>
#include <cmath>

namespace ffmor {

namespace {

std::pair<Matrix, Matrix> gramians(const StateSpaceModel& m) {
    const Matrix Wc = m.B * m.B.adjoint();
    const Matrix Wo = m.C.adjoint() * m.C;
    if (m.time_domain == TimeDomain::Continuous)
        return {solve_lyapunov_continuous(m.A, Wc).P,
                solve_lyapunov_continuous(m.A.adjoint(), Wo).P};
    return {solve_lyapunov_discrete(m.A, Wc).P,
            solve_lyapunov_discrete(m.A.adjoint(), Wo).P};
}

}  // namespace

BalancedRealization balance(const StateSpaceModel& model) {
    if (!is_stable(model))
        throw NotStable(model.time_domain == TimeDomain::Continuous
                            ? "A is not Hurwitz"
                            : "A is not Schur stable");
    const Eigen::Index n = model.order();
    auto [Pc, Po] = gramians(model);
    Matrix L = cholesky_psd(Pc);
    auto [lam, V] = eig_hermitian(L.adjoint() * Po * L);

    Eigen::VectorXd sigma = lam.cwiseMax(0.0).cwiseSqrt();
    BalancedRealization bal;
    bal.hankel_sv = sigma;
    bal.nearly_nonminimal = sigma(0) > 0.0 && sigma(n - 1) < 1e-13 * sigma(0);

    // Square-root transform T = L V S^{-1/2}, T^{-1} = S^{1/2} V* L^{-1};
    // both Gramians become diag(sigma).
    const Eigen::Index rank = [&] {
        Eigen::Index k = 0;
        while (k < n && sigma(k) > 1e-13 * sigma(0)) ++k;
        return k;
    }();
    if (rank == n) {
        Eigen::VectorXd root = sigma.cwiseSqrt();
        bal.T = L * V * root.cwiseInverse().asDiagonal();
        Matrix VstarLinv = (L.adjoint().partialPivLu().solve(V)).adjoint();
        bal.T_inv = root.asDiagonal() * VstarLinv;
    } else if (rank == 0) {
        bal.T = Matrix::Identity(n, n);
        bal.T_inv = Matrix::Identity(n, n);
    } else {
        // L is rank deficient; build the leading block from the
        // equivalent form T1^{-1} = S^{-3/2} V1* L* Po (valid because
        // L* Po L = V diag(sigma^2) V*) and complete T with a basis of
        // ker(T1^{-1}) so the leading rows of the true inverse match.
        Eigen::VectorXd lead = sigma.head(rank);
        Matrix V1 = V.leftCols(rank);
        Matrix T1 = L * V1 * lead.cwiseSqrt().cwiseInverse().asDiagonal();
        Matrix Tinv1 = lead.array().pow(-1.5).matrix().asDiagonal() *
                       (V1.adjoint() * L.adjoint() * Po);
        Matrix Q = Eigen::HouseholderQR<Matrix>(Tinv1.adjoint())
                       .householderQ() *
                   Matrix::Identity(n, n);
        bal.T = Matrix(n, n);
        bal.T.leftCols(rank) = T1;
        bal.T.rightCols(n - rank) = Q.rightCols(n - rank);
        bal.T_inv = bal.T.partialPivLu().inverse();
    }

    bal.model = model;
    bal.model.A = bal.T_inv * model.A * bal.T;
    bal.model.B = bal.T_inv * model.B;
    bal.model.C = model.C * bal.T;
    bal.model.scalar_field = ScalarField::Complex;
    if ((bal.model.A.imag().array() == 0.0).all() &&
        (bal.model.B.imag().array() == 0.0).all() &&
        (bal.model.C.imag().array() == 0.0).all() &&
        (bal.model.D.imag().array() == 0.0).all())
        bal.model.scalar_field = ScalarField::Real;
    return bal;
}

static void check_order(Eigen::Index r, Eigen::Index n) {
    if (r < 1 || r >= n)
        throw BadOrder("reduced order must satisfy 1 <= r < n, got " +
                       std::to_string(r) + " with n = " + std::to_string(n));
}

ReductionResult truncate(const BalancedRealization& bal, Eigen::Index r) {
    const Eigen::Index n = bal.model.order();
    check_order(r, n);
    const StateSpaceModel& b = bal.model;
    ReductionResult res;
    res.reduced = make_model(b.A.topLeftCorner(r, r), b.B.topRows(r),
                             b.C.leftCols(r), b.D, b.time_domain);
    res.tail_sv = bal.hankel_sv.tail(n - r);
    res.bound = 2.0 * res.tail_sv.sum();
    res.bound_kind = BoundKind::EF;
    res.method = Method::LyaBT;
    return res;
}

ReductionResult spa(const BalancedRealization& bal, Eigen::Index r) {
    const Eigen::Index n = bal.model.order();
    check_order(r, n);
    const StateSpaceModel& b = bal.model;
    const Eigen::Index k = n - r;
    Matrix A11 = b.A.topLeftCorner(r, r), A12 = b.A.topRightCorner(r, k);
    Matrix A21 = b.A.bottomLeftCorner(k, r), A22 = b.A.bottomRightCorner(k, k);
    Matrix B1 = b.B.topRows(r), B2 = b.B.bottomRows(k);
    Matrix C1 = b.C.leftCols(r), C2 = b.C.rightCols(k);

    // Residualize the discarded states: solve for their equilibrium
    // (continuous) or fixed point (discrete) and substitute.
    Matrix pivot = b.time_domain == TimeDomain::Continuous
                       ? Matrix(-A22)
                       : Matrix(Matrix::Identity(k, k) - A22);
    Eigen::PartialPivLU<Matrix> lu(pivot);
    const double scale = std::max(pivot.cwiseAbs().maxCoeff(), 1e-300);
    if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() >
          scale * 1e-14 * static_cast<double>(k)))
        throw SingularResidualization("residualized block is numerically singular");
    Matrix XA = lu.solve(A21);
    Matrix XB = lu.solve(B2);

    ReductionResult res;
    res.reduced = make_model(A11 + A12 * XA, B1 + A12 * XB, C1 + C2 * XA,
                             b.D + C2 * XB, b.time_domain);
    res.tail_sv = bal.hankel_sv.tail(k);
    res.bound = 2.0 * res.tail_sv.sum();
    res.bound_kind = BoundKind::EF;
    res.method = Method::SPA;
    return res;
}

}  // namespace ffmor
