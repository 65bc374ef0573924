#pragma once

#include <optional>

#include "ffmor/linalg.hpp"
#include "ffmor/mapping.hpp"
#include "ffmor/model.hpp"

namespace ffmor {

struct BalancedRealization {
    StateSpaceModel model;
    Eigen::VectorXd hankel_sv;  // descending
    Matrix T;                   // balancing transform
    Matrix T_inv;
    bool nearly_nonminimal = false;  // sigma_n / sigma_1 < 1e-13
};

enum class BoundKind { EF, LF, MF, HF };
enum class Method { LyaBT, SPA, PFDBT_R1, PFDBT_R2 };

struct ReductionResult {
    StateSpaceModel reduced;
    Eigen::VectorXd tail_sv;  // sigma_{r+1..n} of the balanced object
    double bound = 0.0;
    BoundKind bound_kind = BoundKind::EF;
    Method method = Method::LyaBT;
    std::optional<double> rho;
    FrequencyRange band = FrequencyRange::ef();
    bool stability_lost = false;
    // Intermediate discrete reduced model of the PFDBT pipeline.
    std::optional<StateSpaceModel> mapped_reduced;
};

/// Square-root balancing: Gramians, Cholesky factor, Hermitian
/// eigendecomposition, transform.  Both Gramians of the result equal
/// diag(hankel_sv).
BalancedRealization balance(const StateSpaceModel& model);

/// Keeps the r dominant balanced states; EF bound 2 * sum of tail.
ReductionResult truncate(const BalancedRealization& bal, Eigen::Index r);

/// Singular perturbation approximation: residualizes the discarded
/// balanced block, matching the DC gain; same EF bound.
ReductionResult spa(const BalancedRealization& bal, Eigen::Index r);

}  // namespace ffmor
