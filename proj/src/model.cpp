#include "ffmor/model.hpp"

#include <Eigen/LU>
#include <string>

namespace ffmor {

static bool is_real(const Matrix& M) {
    return (M.imag().array() == 0.0).all();
}

StateSpaceModel make_model(const Matrix& A, const Matrix& B, const Matrix& C,
                           const Matrix& D, TimeDomain domain) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n)
        throw DimensionMismatch("A must be square, got " + std::to_string(n) +
                                "x" + std::to_string(A.cols()));
    if (n < 1) throw DimensionMismatch("state dimension must be >= 1");
    if (B.rows() != n)
        throw DimensionMismatch("B has " + std::to_string(B.rows()) +
                                " rows, expected " + std::to_string(n));
    if (C.cols() != n)
        throw DimensionMismatch("C has " + std::to_string(C.cols()) +
                                " cols, expected " + std::to_string(n));
    if (B.cols() < 1 || C.rows() < 1)
        throw DimensionMismatch("input and output dimensions must be >= 1");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw DimensionMismatch("D is " + std::to_string(D.rows()) + "x" +
                                std::to_string(D.cols()) + ", expected " +
                                std::to_string(C.rows()) + "x" +
                                std::to_string(B.cols()));
    StateSpaceModel m{A, B, C, D, domain, ScalarField::Complex};
    if (is_real(A) && is_real(B) && is_real(C) && is_real(D))
        m.scalar_field = ScalarField::Real;
    return m;
}

FrequencyRange FrequencyRange::ef() { return {RangeVariant::EF, 0.0, 0.0}; }

FrequencyRange FrequencyRange::lf(double wl) {
    if (!(wl > 0.0)) throw Error("LF range requires wl > 0");
    return {RangeVariant::LF, -wl, wl};
}

FrequencyRange FrequencyRange::mf(double w1, double w2) {
    if (!(0.0 <= w1 && w1 < w2)) throw Error("MF range requires 0 <= w1 < w2");
    return {RangeVariant::MF, w1, w2};
}

FrequencyRange FrequencyRange::hf(double wh) {
    if (!(wh > 0.0)) throw Error("HF range requires wh > 0");
    return {RangeVariant::HF, wh, wh};
}

FrequencyRange parse_band_spec(const std::string& spec) {
    if (spec == "ef") return FrequencyRange::ef();
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error("band must be ef, lf:WL, mf:W1,W2 or hf:WH");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    try {
        if (kind == "lf") return FrequencyRange::lf(std::stod(args));
        if (kind == "hf") return FrequencyRange::hf(std::stod(args));
        if (kind == "mf") {
            const auto comma = args.find(',');
            if (comma == std::string::npos)
                throw Error("mf band needs two frequencies");
            return FrequencyRange::mf(std::stod(args.substr(0, comma)),
                                      std::stod(args.substr(comma + 1)));
        }
    } catch (const std::invalid_argument&) {
        throw Error("cannot parse band frequencies in '" + spec + "'");
    }
    throw Error("unknown band kind '" + kind + "'");
}

std::string format_band_spec(const FrequencyRange& band) {
    char buf[96];
    switch (band.variant()) {
        case RangeVariant::EF:
            return "ef";
        case RangeVariant::LF:
            std::snprintf(buf, sizeof(buf), "lf:%.17g", band.wl());
            return buf;
        case RangeVariant::MF:
            std::snprintf(buf, sizeof(buf), "mf:%.17g,%.17g", band.w1(), band.w2());
            return buf;
        case RangeVariant::HF:
            std::snprintf(buf, sizeof(buf), "hf:%.17g", band.wh());
            return buf;
    }
    return "?";
}

Matrix eval_transfer(const StateSpaceModel& model, Complex s_or_z) {
    const Eigen::Index n = model.order();
    Matrix shifted = -model.A;
    shifted.diagonal().array() += s_or_z;
    Eigen::PartialPivLU<Matrix> lu(shifted);
    const double rcond_scale = shifted.cwiseAbs().maxCoeff();
    const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot_min > rcond_scale * 1e-14 * static_cast<double>(n)))
        throw SingularShift("transfer evaluation point is numerically an eigenvalue");
    return model.C * lu.solve(model.B) + model.D;
}

}  // namespace ffmor
