#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ffmor/errors.hpp"

namespace ffmor {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class TimeDomain { Continuous, Discrete };
enum class ScalarField { Real, Complex };

/// State-space quadruple (A,B,C,D), continuous or discrete time.
/// All storage is complex; the Real tag records that every imaginary
/// part is exactly zero.
struct StateSpaceModel {
    Matrix A;  // n x n
    Matrix B;  // n x m
    Matrix C;  // p x n
    Matrix D;  // p x m
    TimeDomain time_domain = TimeDomain::Continuous;
    ScalarField scalar_field = ScalarField::Complex;

    Eigen::Index order() const { return A.rows(); }
    Eigen::Index num_inputs() const { return B.cols(); }
    Eigen::Index num_outputs() const { return C.rows(); }
};

/// Validates dimensions, detects realness, and returns the tagged model.
StateSpaceModel make_model(const Matrix& A, const Matrix& B, const Matrix& C,
                           const Matrix& D, TimeDomain domain);

enum class RangeVariant { EF, LF, MF, HF };

/// One of the four frequency ranges: entire, low [-wl,wl],
/// middle [w1,w2], or high |w| >= wh (rad/s).
class FrequencyRange {
  public:
    static FrequencyRange ef();
    static FrequencyRange lf(double wl);
    static FrequencyRange mf(double w1, double w2);
    static FrequencyRange hf(double wh);

    RangeVariant variant() const { return variant_; }
    double wl() const { return w2_; }
    double w1() const { return w1_; }
    double w2() const { return w2_; }
    double wh() const { return w2_; }

    /// Band center (w1+w2)/2; zero for LF.
    double wc() const { return 0.5 * (w1_ + w2_); }
    /// Band half-width (w2-w1)/2; equals wl for LF.
    double wd() const { return 0.5 * (w2_ - w1_); }

  private:
    FrequencyRange(RangeVariant v, double w1, double w2)
        : variant_(v), w1_(w1), w2_(w2) {}
    RangeVariant variant_;
    double w1_ = 0.0;
    double w2_ = 0.0;
};

/// Parses "ef", "lf:WL", "mf:W1,W2" or "hf:WH".
FrequencyRange parse_band_spec(const std::string& spec);
std::string format_band_spec(const FrequencyRange& band);

enum class SweepDomain { ContinuousFreq, DiscreteAngle };

/// Sampled sigma-max curve: (omega or theta, largest singular value).
struct SigmaSweep {
    SweepDomain domain_tag = SweepDomain::ContinuousFreq;
    std::vector<std::pair<double, double>> points;
};

/// Evaluates C (sI - A)^{-1} B + D by a linear solve.
Matrix eval_transfer(const StateSpaceModel& model, Complex s_or_z);

}  // namespace ffmor
