#include "ffmor/analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ffmor/linalg.hpp"

namespace ffmor {

namespace {

double sigma_max_of(const Matrix& M) {
    return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

double sigma_at(const StateSpaceModel& m, double w) {
    const Complex point = m.time_domain == TimeDomain::Continuous
                              ? Complex(0.0, w)
                              : std::polar(1.0, w);
    return sigma_max_of(eval_transfer(m, point));
}

std::vector<double> logspace(double a, double b, int k) {
    if (k <= 1) return {b};
    std::vector<double> out(k);
    for (int i = 0; i < k; ++i)
        out[i] = a * std::pow(b / a, static_cast<double>(i) / (k - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

std::vector<double> uniform(double a, double b, int k) {
    if (k <= 1) return {b};
    std::vector<double> out(k);
    for (int i = 0; i < k; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / (k - 1);
    return out;
}

// Symmetric grid: k_neg mirrored log points, optional zero, k_pos log
// points, strictly increasing.
std::vector<double> symmetric_log(double lo, double hi, int n) {
    std::vector<double> out;
    const int per_side = n / 2;
    const bool with_zero = n % 2 == 1;
    std::vector<double> pos = logspace(lo, hi, per_side);
    for (int i = per_side - 1; i >= 0; --i) out.push_back(-pos[i]);
    if (with_zero) out.push_back(0.0);
    out.insert(out.end(), pos.begin(), pos.end());
    return out;
}

std::vector<double> band_grid(const StateSpaceModel& model,
                              const FrequencyRange& band, int n_points) {
    if (model.time_domain == TimeDomain::Discrete)
        return uniform(-M_PI, M_PI, n_points);
    switch (band.variant()) {
        case RangeVariant::EF:
            return symmetric_log(1e-4, 1e6, n_points);
        case RangeVariant::LF:
            return symmetric_log(band.wl() * 1e-6, band.wl(), n_points);
        case RangeVariant::MF:
            if (band.w1() > 0.0)
                return logspace(band.w1(), band.w2(), n_points);
            else {
                std::vector<double> out{0.0};
                auto pos = logspace(band.w2() * 1e-6, band.w2(), n_points - 1);
                out.insert(out.end(), pos.begin(), pos.end());
                return out;
            }
        case RangeVariant::HF: {
            // Truncated at 1e3 * wh; the omega -> infinity limit is
            // handled analytically by callers.
            std::vector<double> out;
            const int per_side = n_points / 2;
            std::vector<double> pos =
                logspace(band.wh(), band.wh() * 1e3, n_points - per_side);
            for (int i = per_side - 1; i >= 0; --i) out.push_back(-pos[i]);
            out.insert(out.end(), pos.begin(), pos.end());
            return out;
        }
    }
    throw Error("unreachable");
}

}  // namespace

SigmaSweep sigma_sweep(const StateSpaceModel& model, const FrequencyRange& band,
                       int n_points) {
    if (n_points < 2) throw Error("sigma_sweep requires n_points >= 2");
    SigmaSweep sweep;
    sweep.domain_tag = model.time_domain == TimeDomain::Continuous
                           ? SweepDomain::ContinuousFreq
                           : SweepDomain::DiscreteAngle;
    for (double w : band_grid(model, band, n_points)) {
        try {
            sweep.points.emplace_back(w, sigma_at(model, w));
        } catch (const SingularShift&) {
            // Skip frequencies that graze a pole.
        }
    }
    return sweep;
}

namespace {

// Golden-section maximization on [a, b].
std::pair<double, double> golden_max(const StateSpaceModel& m, double a, double b) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = sigma_at(m, x1);
    double f2 = sigma_at(m, x2);
    for (int it = 0; it < 80 && b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b));
         ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = sigma_at(m, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = sigma_at(m, x1);
        }
    }
    return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

HinfResult hinf_norm(const StateSpaceModel& model) {
    if (!is_stable(model)) throw NotStable("H-infinity norm needs a stable model");
    std::vector<double> grid =
        model.time_domain == TimeDomain::Continuous
            ? symmetric_log(1e-4, 1e6, 801)
            : uniform(-M_PI, M_PI, 1025);

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = sigma_at(model, grid[i]);

    // Rank interior local maxima, refine the best few brackets.
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        if (values[i] >= values[i - 1] && values[i] >= values[i + 1])
            peaks.push_back(i);
    std::sort(peaks.begin(), peaks.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    if (peaks.size() > 5) peaks.resize(5);

    std::size_t best_idx =
        std::max_element(values.begin(), values.end()) - values.begin();
    double best_w = grid[best_idx];
    double best = values[best_idx];
    for (std::size_t i : peaks) {
        auto [w, v] = golden_max(model, grid[i - 1], grid[i + 1]);
        if (v > best) {
            best = v;
            best_w = w;
        }
    }
    if (model.time_domain == TimeDomain::Continuous) {
        const double at_inf = sigma_max_of(model.D);
        if (at_inf > best) {
            best = at_inf;
            best_w = std::numeric_limits<double>::infinity();
        }
    }
    return {best, best_w};
}

double band_gain_bound(const StateSpaceModel& model, const FrequencyRange& band,
                       double rho, MapFlavor flavor, LowerHfVariant variant) {
    PfdMapKind kind{flavor, band, rho, variant};
    MappedSystem mapped = apply_map(model, kind);
    return map_scale(kind) * hinf_norm(mapped.model).gamma;
}

StateSpaceModel error_system(const StateSpaceModel& a, const StateSpaceModel& b) {
    if (a.num_inputs() != b.num_inputs() || a.num_outputs() != b.num_outputs())
        throw DimensionMismatch("error system needs matching input/output counts");
    if (a.time_domain != b.time_domain)
        throw Error("error system needs matching time domains");
    const Eigen::Index na = a.order(), nb = b.order();
    Matrix A = Matrix::Zero(na + nb, na + nb);
    A.topLeftCorner(na, na) = a.A;
    A.bottomRightCorner(nb, nb) = b.A;
    Matrix B(na + nb, a.num_inputs());
    B.topRows(na) = a.B;
    B.bottomRows(nb) = b.B;
    Matrix C(a.num_outputs(), na + nb);
    C.leftCols(na) = a.C;
    C.rightCols(nb) = -b.C;
    return make_model(A, B, C, a.D - b.D, a.time_domain);
}

SigmaSweep band_error(const StateSpaceModel& a, const StateSpaceModel& b,
                      const FrequencyRange& band, int n_points) {
    return sigma_sweep(error_system(a, b), band, n_points);
}

}  // namespace ffmor
