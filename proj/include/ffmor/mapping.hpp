#pragma once

#include "ffmor/model.hpp"

namespace ffmor {

enum class MapFlavor { Upper, Lower, Left, Right };

/// Which published form of the lower HF mapping to use.  The printed
/// definition scales by (rho^2+1)^{1/2}, which only matches the bound
/// theory at wh = 1; Consistent uses the (rho^2+wh^2)^{1/2} scaling
/// that the bound theorem assumes and is the default.
enum class LowerHfVariant { Consistent, AsPrinted };

struct PfdMapKind {
    MapFlavor flavor;
    FrequencyRange band;  // LF/MF or HF
    double rho;
    LowerHfVariant lower_hf_variant = LowerHfVariant::Consistent;
};

struct MappedSystem {
    StateSpaceModel model;
    PfdMapKind kind;
    Vector source_spectrum;  // eigenvalues of the source A
};

/// Admissibility diagnostic for LF/MF bands:
/// max_i (wd^2 - Re(l_i)^2 - (wc + Im(l_i))^2) / (2 Re(l_i)).
double rho_star_mf(const Matrix& A, const FrequencyRange& band);

/// Admissibility diagnostic for HF bands:
/// max_i (wh^2 - Re(l_i)^2 - Im(l_i)^2) / (2 Re(l_i)).
double rho_star_hf(const Matrix& A, const FrequencyRange& band);

/// Exact spectral admissibility threshold: Upper/Left/Right maps are
/// stable iff rho > this value, Lower maps iff rho < -this value.
/// Used for search ranges; enforcement is by the numerical stability
/// check inside the map constructors.
double rho_threshold(const Matrix& A, const FrequencyRange& band);

MappedSystem map_upper_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho);
MappedSystem map_lower_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho);
MappedSystem map_left_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho);
MappedSystem map_right_mf(const StateSpaceModel& m, const FrequencyRange& band, double rho);
MappedSystem map_upper_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho);
MappedSystem map_lower_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho,
                          LowerHfVariant variant = LowerHfVariant::Consistent);
MappedSystem map_left_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho);
MappedSystem map_right_hf(const StateSpaceModel& m, const FrequencyRange& band, double rho);

/// Dispatch on kind.flavor and band variant.
MappedSystem apply_map(const StateSpaceModel& m, const PfdMapKind& kind);

/// Gain scale (rho^2 + wd^2)^{1/2} for LF/MF, (rho^2 + wh^2)^{1/2} for HF.
double map_scale(const PfdMapKind& kind);

/// Closed-form algebraic inverse of the forward mapping recorded in
/// kind.  Verifies the round trip: re-applying the forward map to the
/// result reproduces mapped_reduced's transfer function at 50 angles.
StateSpaceModel invert_map(const StateSpaceModel& mapped_reduced, const PfdMapKind& kind);

}  // namespace ffmor
