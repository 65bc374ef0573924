#include "ffmor/mapping.hpp"

#include <Eigen/LU>
#include <cmath>

#include "ffmor/linalg.hpp"

namespace ffmor {

namespace {

const Complex kI(0.0, 1.0);

Matrix solve_shift(const Matrix& M, const Matrix& rhs, const char* what) {
    Eigen::PartialPivLU<Matrix> lu(M);
    const double scale = M.cwiseAbs().maxCoeff();
    const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot_min > scale * 1e-14 * static_cast<double>(M.rows())))
        throw SingularShift(std::string(what) + " is numerically singular");
    return lu.solve(rhs);
}

Matrix inverse_of(const Matrix& M, const char* what) {
    return solve_shift(M, Matrix::Identity(M.rows(), M.cols()), what);
}

void require_lf_mf(const FrequencyRange& band) {
    if (band.variant() != RangeVariant::LF && band.variant() != RangeVariant::MF)
        throw Error("mapping requires an LF or MF band");
}

void require_hf(const FrequencyRange& band) {
    if (band.variant() != RangeVariant::HF)
        throw Error("mapping requires an HF band");
}

void require_continuous(const StateSpaceModel& m) {
    if (m.time_domain != TimeDomain::Continuous)
        throw Error("PFD mappings apply to continuous-time models");
}

double star_formula(const Matrix& A, double w2, double center_sign_times_wc) {
    // Shared body of the two rho* diagnostics:
    // max_i (w2 - Re^2 - (offset + Im)^2) / (2 Re).
    Vector lambda = eigenvalues_general(A);
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double x = lambda(i).real();
        const double y = lambda(i).imag();
        if (std::abs(x) <= 1e-14 * std::max(1.0, std::abs(lambda(i))))
            throw DegenerateSpectrum("eigenvalue with zero real part");
        const double num =
            w2 - x * x - (center_sign_times_wc + y) * (center_sign_times_wc + y);
        best = std::max(best, num / (2.0 * x));
    }
    return best;
}

struct Quad {
    Matrix A, B, C, D;
};

// Forward mapping quadruples without admissibility checks; shared by
// the public maps and the round-trip verification.
Quad upper_mf_quad(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    const double s = std::hypot(rho, band.wd());
    Matrix Phi = -m.A;
    Phi.diagonal().array() += Complex(rho, band.wc());
    Matrix Phi_inv = inverse_of(Phi, "(rho + j wc) I - A");
    Matrix CPhi = m.C * Phi_inv;
    return {s * Phi_inv, Phi_inv * m.B, CPhi, (CPhi * m.B + m.D) / s};
}

Quad lower_mf_quad(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    const double s = std::hypot(rho, band.wd());
    const double wd = band.wd();
    Matrix Psi = -m.A;
    Psi.diagonal().array() += Complex(0.0, band.wc());
    Matrix Psi_inv = inverse_of(Psi, "j wc I - A");
    Matrix CPsi = m.C * Psi_inv;
    Matrix At = (wd * wd * Psi_inv + rho * Matrix::Identity(m.order(), m.order())) / s;
    return {At, (wd / s) * (Psi_inv * m.B), (wd / s) * CPsi, (CPsi * m.B + m.D) / s};
}

// Left/Right MF and HF share one continuous pattern
//   A_m = offset I - c (j alpha I - A)^{-1},
//   B_m = Theta^{-1} B, C_m = C Theta^{-1}, D_m = -c^{-1}(C Theta^{-1} B + D),
// realizing -c^{-1} G(j alpha + c / (w - offset)).
Quad side_quad(const StateSpaceModel& m, double alpha, Complex c, double offset) {
    Matrix Theta = -m.A;
    Theta.diagonal().array() += Complex(0.0, alpha);
    Matrix Theta_inv = inverse_of(Theta, "j alpha I - A");
    Matrix CTh = m.C * Theta_inv;
    Matrix Am = -c * Theta_inv;
    Am.diagonal().array() += offset;
    return {Am, Theta_inv * m.B, CTh, -(CTh * m.B + m.D) / c};
}

Quad upper_hf_quad(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    const double s = std::hypot(rho, band.wh());
    Matrix At = m.A;
    At.diagonal().array() += rho;
    return {At / s, m.B / s, m.C / s, m.D / s};
}

Quad lower_hf_quad(const StateSpaceModel& m, const FrequencyRange& band, double rho,
                   LowerHfVariant variant) {
    const double wh = band.wh();
    if (variant == LowerHfVariant::AsPrinted) {
        const double q = std::hypot(rho, 1.0);
        Matrix K = -rho * m.A;
        K.diagonal().array() += wh;
        Matrix K_inv = inverse_of(K, "wh I - rho A");
        Matrix CK = m.C * K_inv;
        return {q * (m.A * K_inv), K_inv * m.B, CK,
                (rho * (CK * m.B) + m.D) / (q * wh)};
    }
    const double s = std::hypot(rho, wh);
    Matrix M = rho * m.A;
    M.diagonal().array() += wh * wh;
    Matrix M_inv = inverse_of(M, "wh^2 I + rho A");
    Matrix CM = m.C * M_inv;
    return {-s * (M_inv * m.A), -wh * (M_inv * m.B), wh * CM,
            (m.D - rho * (CM * m.B)) / s};
}

Quad forward_quad(const StateSpaceModel& m, const PfdMapKind& kind) {
    const FrequencyRange& band = kind.band;
    const double rho = kind.rho;
    if (band.variant() == RangeVariant::HF) {
        switch (kind.flavor) {
            case MapFlavor::Upper: return upper_hf_quad(m, band, rho);
            case MapFlavor::Lower: return lower_hf_quad(m, band, rho, kind.lower_hf_variant);
            case MapFlavor::Left:
                return side_quad(m, band.wh(), Complex(rho, band.wh()), 0.5);
            case MapFlavor::Right:
                return side_quad(m, -band.wh(), Complex(rho, -band.wh()), 0.5);
        }
    }
    require_lf_mf(band);
    switch (kind.flavor) {
        case MapFlavor::Upper: return upper_mf_quad(m, band, rho);
        case MapFlavor::Lower: return lower_mf_quad(m, band, rho);
        case MapFlavor::Left:
            return side_quad(m, band.w1(), Complex(rho, band.wd()), -0.5);
        case MapFlavor::Right:
            return side_quad(m, band.w2(), Complex(rho, -band.wd()), -0.5);
    }
    throw Error("unreachable");
}

TimeDomain mapped_domain(MapFlavor flavor) {
    return (flavor == MapFlavor::Upper || flavor == MapFlavor::Lower)
               ? TimeDomain::Discrete
               : TimeDomain::Continuous;
}

MappedSystem finish_map(const StateSpaceModel& m, const PfdMapKind& kind) {
    require_continuous(m);
    Quad q = forward_quad(m, kind);
    StateSpaceModel mapped =
        make_model(q.A, q.B, q.C, q.D, mapped_domain(kind.flavor));
    const bool stable = mapped.time_domain == TimeDomain::Discrete
                            ? is_schur(mapped.A, 1e-9)
                            : is_hurwitz(mapped.A, 1e-12);
    if (!stable) {
        double star = std::numeric_limits<double>::quiet_NaN();
        try {
            star = kind.band.variant() == RangeVariant::HF
                       ? rho_star_hf(m.A, kind.band)
                       : rho_star_mf(m.A, kind.band);
        } catch (const DegenerateSpectrum&) {
        }
        throw NotAdmissible("mapped system is unstable at rho=" +
                                std::to_string(kind.rho),
                            kind.rho, star);
    }
    return {std::move(mapped), kind, eigenvalues_general(m.A)};
}

}  // namespace

double rho_star_mf(const Matrix& A, const FrequencyRange& band) {
    require_lf_mf(band);
    return star_formula(A, band.wd() * band.wd(), band.wc());
}

double rho_star_hf(const Matrix& A, const FrequencyRange& band) {
    require_hf(band);
    return star_formula(A, band.wh() * band.wh(), 0.0);
}

double rho_threshold(const Matrix& A, const FrequencyRange& band) {
    Vector lambda = eigenvalues_general(A);
    const bool hf = band.variant() == RangeVariant::HF;
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double x = lambda(i).real();
        const double y = lambda(i).imag();
        if (std::abs(x) <= 1e-14 * std::max(1.0, std::abs(lambda(i))))
            throw DegenerateSpectrum("eigenvalue with zero real part");
        double t;
        if (hf) {
            // Pole inside the circle through +-j wh centered at -rho:
            // rho > (wh^2 - x^2 - y^2) / (2x).
            t = (band.wh() * band.wh() - x * x - y * y) / (2.0 * x);
        } else {
            // Pole outside the circle through j w1, j w2 centered at
            // rho + j wc: rho > (wd^2 - x^2 - (y - wc)^2) / (-2x).
            const double dy = y - band.wc();
            t = (band.wd() * band.wd() - x * x - dy * dy) / (-2.0 * x);
        }
        best = std::max(best, t);
    }
    return best;
}

MappedSystem map_upper_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    require_lf_mf(band);
    return finish_map(m, {MapFlavor::Upper, band, rho});
}

MappedSystem map_lower_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    require_lf_mf(band);
    return finish_map(m, {MapFlavor::Lower, band, rho});
}

MappedSystem map_left_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    require_lf_mf(band);
    return finish_map(m, {MapFlavor::Left, band, rho});
}

MappedSystem map_right_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    require_lf_mf(band);
    return finish_map(m, {MapFlavor::Right, band, rho});
}

MappedSystem map_upper_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    require_hf(band);
    return finish_map(m, {MapFlavor::Upper, band, rho});
}

MappedSystem map_lower_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho,
                          LowerHfVariant variant) {
    require_hf(band);
    return finish_map(m, {MapFlavor::Lower, band, rho, variant});
}

MappedSystem map_left_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    require_hf(band);
    return finish_map(m, {MapFlavor::Left, band, rho});
}

MappedSystem map_right_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho) {
    require_hf(band);
    return finish_map(m, {MapFlavor::Right, band, rho});
}

MappedSystem apply_map(const StateSpaceModel& m, const PfdMapKind& kind) {
    if (kind.band.variant() == RangeVariant::EF)
        throw Error("PFD mappings are defined for finite bands only");
    return finish_map(m, kind);
}

double map_scale(const PfdMapKind& kind) {
    const double w = kind.band.variant() == RangeVariant::HF ? kind.band.wh()
                                                             : kind.band.wd();
    return std::hypot(kind.rho, w);
}

namespace {

Quad invert_quad(const StateSpaceModel& mr, const PfdMapKind& kind) {
    const FrequencyRange& band = kind.band;
    const double rho = kind.rho;
    const Eigen::Index r = mr.order();
    const Matrix I = Matrix::Identity(r, r);
    const bool hf = band.variant() == RangeVariant::HF;

    if (!hf && kind.flavor == MapFlavor::Upper) {
        const double s = std::hypot(rho, band.wd());
        Matrix Ainv = inverse_of(mr.A, "mapped A");
        Matrix A = Complex(rho, band.wc()) * I - s * Ainv;
        Matrix CAinv = mr.C * Ainv;
        return {A, s * (Ainv * mr.B), s * CAinv, s * mr.D - s * (CAinv * mr.B)};
    }
    if (!hf && kind.flavor == MapFlavor::Lower) {
        const double s = std::hypot(rho, band.wd());
        const double wd = band.wd();
        Matrix Psi = wd * wd * inverse_of(Matrix(s * mr.A - rho * I), "s A - rho I");
        Matrix A = Complex(0.0, band.wc()) * I - Psi;
        Matrix CPsi = mr.C * Psi;
        return {A, (s / wd) * (Psi * mr.B), (s / wd) * CPsi,
                s * mr.D - (s * s / (wd * wd)) * (CPsi * mr.B)};
    }
    if (hf && kind.flavor == MapFlavor::Upper) {
        const double s = std::hypot(rho, band.wh());
        Matrix A = s * mr.A - rho * I;
        return {A, s * mr.B, s * mr.C, s * mr.D};
    }
    if (hf && kind.flavor == MapFlavor::Lower) {
        const double wh = band.wh();
        if (kind.lower_hf_variant == LowerHfVariant::AsPrinted) {
            const double q = std::hypot(rho, 1.0);
            Matrix G_inv = inverse_of(Matrix(q * I + rho * mr.A), "q I + rho A");
            Matrix CG = mr.C * G_inv;
            return {wh * (G_inv * mr.A), wh * q * (G_inv * mr.B), wh * q * CG,
                    q * wh * mr.D - rho * wh * q * (CG * mr.B)};
        }
        const double s = std::hypot(rho, wh);
        Matrix G_inv = inverse_of(Matrix(s * I + rho * mr.A), "s I + rho A");
        Matrix CG = mr.C * G_inv;
        return {-wh * wh * (mr.A * G_inv), -s * wh * (G_inv * mr.B),
                s * wh * CG, s * mr.D - rho * s * (CG * mr.B)};
    }

    // Left/Right: Theta = c (offset I - A_m)^{-1}, A = j alpha I - Theta.
    double alpha, offset;
    Complex c;
    if (hf) {
        offset = 0.5;
        alpha = kind.flavor == MapFlavor::Left ? band.wh() : -band.wh();
        c = Complex(rho, alpha);
    } else {
        offset = -0.5;
        alpha = kind.flavor == MapFlavor::Left ? band.w1() : band.w2();
        c = kind.flavor == MapFlavor::Left ? Complex(rho, band.wd())
                                           : Complex(rho, -band.wd());
    }
    Matrix Theta = c * inverse_of(Matrix(offset * I - mr.A), "offset I - A_m");
    Matrix A = Complex(0.0, alpha) * I - Theta;
    Matrix CTh = mr.C * Theta;
    return {A, Theta * mr.B, CTh, -c * mr.D - CTh * mr.B};
}

}  // namespace

StateSpaceModel invert_map(const StateSpaceModel& mapped_reduced,
                           const PfdMapKind& kind) {
    if (mapped_reduced.time_domain != mapped_domain(kind.flavor))
        throw Error("mapped model's time domain does not match the map kind");
    Quad q = invert_quad(mapped_reduced, kind);
    StateSpaceModel inverted =
        make_model(q.A, q.B, q.C, q.D, TimeDomain::Continuous);

    // Round-trip verification: re-apply the forward map and compare
    // transfer functions at 50 sampled points.
    Quad fwd = forward_quad(inverted, kind);
    StateSpaceModel remapped =
        make_model(fwd.A, fwd.B, fwd.C, fwd.D, mapped_domain(kind.flavor));
    double max_diff = 0.0, max_ref = 0.0;
    for (int k = 0; k < 50; ++k) {
        Complex point;
        if (remapped.time_domain == TimeDomain::Discrete) {
            const double theta = -M_PI + (2.0 * M_PI) * (k + 0.3) / 50.0;
            point = std::polar(1.0, theta);
        } else {
            const double nu = std::tan(-M_PI / 2 + M_PI * (k + 0.3) / 50.0);
            point = Complex(0.0, nu);
        }
        try {
            Matrix a = eval_transfer(remapped, point);
            Matrix b = eval_transfer(mapped_reduced, point);
            max_diff = std::max(max_diff, (a - b).norm());
            max_ref = std::max(max_ref, b.norm());
        } catch (const SingularShift&) {
            // Evaluation point grazing a pole carries no information.
        }
    }
    if (max_diff > 1e-6 * std::max(1.0, max_ref))
        throw RoundTripFailure("inverse mapping verification residual " +
                               std::to_string(max_diff) + " exceeds tolerance");
    return inverted;
}

}  // namespace ffmor
