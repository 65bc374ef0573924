#pragma once

#include <string>
#include <vector>

#include "ffmor/bt.hpp"

namespace ffmor {

enum class Routing { R1Upper, R2Lower };

/// Finite-frequency balanced truncation for a low (or, experimentally,
/// middle) band: map to discrete time, balance, truncate at r, invert.
/// The bound is 2 (rho^2 + wd^2)^{1/2} times the mapped tail sum.
/// R2 uses the lower mapping, which needs a negative parameter; a
/// positive rho is negated for convenience so both routings accept the
/// same magnitude.
ReductionResult pfdbt_lf(const StateSpaceModel& model, const FrequencyRange& band,
                         double rho, Eigen::Index r, Routing routing);

/// High-band counterpart; bound covers |omega| >= wh.
ReductionResult pfdbt_hf(const StateSpaceModel& model, const FrequencyRange& band,
                         double rho, Eigen::Index r, Routing routing,
                         LowerHfVariant variant = LowerHfVariant::Consistent);

ReductionResult pfdbt(const StateSpaceModel& model, const FrequencyRange& band,
                      double rho, Eigen::Index r, Routing routing,
                      LowerHfVariant variant = LowerHfVariant::Consistent);

struct RhoSweepPoint {
    double rho;
    double bound = 0.0;
    bool admissible = false;
    bool reduced_stable = false;
    std::string skip_reason;  // empty when admissible
};

struct RhoSweepResult {
    std::vector<RhoSweepPoint> points;  // sorted by rho
    double best_rho = 0.0;              // argmin bound among admissible
};

RhoSweepResult sweep_rho(const StateSpaceModel& model, const FrequencyRange& band,
                         Eigen::Index r, Routing routing,
                         const std::vector<double>& rho_grid);

/// Default search grid {t + eps, 10 max(t,eps), 100 max(t,eps)} around
/// the admissibility threshold t.
std::vector<double> default_rho_grid(const StateSpaceModel& model,
                                     const FrequencyRange& band);

/// Smallest r in [1, n-1] whose FF bound is <= tol; throws
/// NotAchievable carrying the r = n-1 bound otherwise.
Eigen::Index min_order_for_tolerance(const StateSpaceModel& model,
                                     const FrequencyRange& band, double rho,
                                     Routing routing, double tol);

/// Retry helper for the no-stability-guarantee caveat: increases rho by
/// the given factor until the reduced model is stable or max_tries runs out.
ReductionResult pfdbt_retry_stable(const StateSpaceModel& model,
                                   const FrequencyRange& band, double rho,
                                   Eigen::Index r, Routing routing,
                                   double growth = 10.0, int max_tries = 4);

}  // namespace ffmor
