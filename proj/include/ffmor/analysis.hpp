#pragma once

#include "ffmor/mapping.hpp"
#include "ffmor/model.hpp"

namespace ffmor {

/// sigma_max(G) sampled at n_points frequencies covering the band.
/// HF bands are truncated at 1e3 * wh; discrete models sample theta
/// uniformly on [-pi, pi].
SigmaSweep sigma_sweep(const StateSpaceModel& model, const FrequencyRange& band,
                       int n_points);

struct HinfResult {
    double gamma;
    double omega_peak;  // omega (continuous) or theta (discrete)
};

/// sup of sigma_max over the entire range, by coarse grid plus
/// golden-section refinement around the top peaks; includes the
/// omega = infinity limit sigma_max(D) for continuous models.
HinfResult hinf_norm(const StateSpaceModel& model);

/// Guaranteed band gain estimate (rho^2 + w^2)^{1/2} * ||mapped||_inf.
double band_gain_bound(const StateSpaceModel& model, const FrequencyRange& band,
                       double rho, MapFlavor flavor,
                       LowerHfVariant variant = LowerHfVariant::Consistent);

/// Difference realization blkdiag(A_a, A_b) with output C_a x_a - C_b x_b.
StateSpaceModel error_system(const StateSpaceModel& a, const StateSpaceModel& b);

SigmaSweep band_error(const StateSpaceModel& a, const StateSpaceModel& b,
                      const FrequencyRange& band, int n_points);

}  // namespace ffmor
