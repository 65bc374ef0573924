#include "ffmor/pfdbt.hpp"

#include <algorithm>
#include <cmath>

namespace ffmor {

namespace {

ReductionResult run_pipeline(const StateSpaceModel& model, const PfdMapKind& kind,
                             Eigen::Index r, Routing routing) {
    MappedSystem mapped = apply_map(model, kind);
    BalancedRealization bal = balance(mapped.model);
    ReductionResult inner = truncate(bal, r);

    ReductionResult res;
    res.mapped_reduced = inner.reduced;
    res.reduced = invert_map(inner.reduced, kind);
    res.tail_sv = inner.tail_sv;
    res.bound = 2.0 * map_scale(kind) * res.tail_sv.sum();
    res.bound_kind = kind.band.variant() == RangeVariant::HF ? BoundKind::HF
                     : kind.band.variant() == RangeVariant::MF ? BoundKind::MF
                                                               : BoundKind::LF;
    res.method = routing == Routing::R1Upper ? Method::PFDBT_R1 : Method::PFDBT_R2;
    res.rho = kind.rho;
    res.band = kind.band;
    res.stability_lost = !is_hurwitz(res.reduced.A);
    return res;
}

double routed_rho(double rho, Routing routing) {
    // The lower mappings need a negative parameter; accept the usual
    // positive magnitude for routing R2 as well.
    return routing == Routing::R2Lower && rho > 0.0 ? -rho : rho;
}

}  // namespace

ReductionResult pfdbt_lf(const StateSpaceModel& model, const FrequencyRange& band,
                         double rho, Eigen::Index r, Routing routing) {
    if (band.variant() != RangeVariant::LF && band.variant() != RangeVariant::MF)
        throw Error("pfdbt_lf requires an LF or MF band");
    PfdMapKind kind{routing == Routing::R1Upper ? MapFlavor::Upper : MapFlavor::Lower,
                    band, routed_rho(rho, routing)};
    return run_pipeline(model, kind, r, routing);
}

ReductionResult pfdbt_hf(const StateSpaceModel& model, const FrequencyRange& band,
                         double rho, Eigen::Index r, Routing routing,
                         LowerHfVariant variant) {
    if (band.variant() != RangeVariant::HF)
        throw Error("pfdbt_hf requires an HF band");
    PfdMapKind kind{routing == Routing::R1Upper ? MapFlavor::Upper : MapFlavor::Lower,
                    band, routed_rho(rho, routing), variant};
    return run_pipeline(model, kind, r, routing);
}

ReductionResult pfdbt(const StateSpaceModel& model, const FrequencyRange& band,
                      double rho, Eigen::Index r, Routing routing,
                      LowerHfVariant variant) {
    return band.variant() == RangeVariant::HF
               ? pfdbt_hf(model, band, rho, r, routing, variant)
               : pfdbt_lf(model, band, rho, r, routing);
}

RhoSweepResult sweep_rho(const StateSpaceModel& model, const FrequencyRange& band,
                         Eigen::Index r, Routing routing,
                         const std::vector<double>& rho_grid) {
    if (rho_grid.empty()) throw Error("rho grid must be nonempty");
    std::vector<double> grid = rho_grid;
    std::sort(grid.begin(), grid.end());

    RhoSweepResult result;
    double best_bound = std::numeric_limits<double>::infinity();
    for (double rho : grid) {
        RhoSweepPoint pt;
        pt.rho = rho;
        try {
            ReductionResult red = pfdbt(model, band, rho, r, routing);
            pt.admissible = true;
            pt.bound = red.bound;
            pt.reduced_stable = !red.stability_lost;
            if (red.bound < best_bound) {
                best_bound = red.bound;
                result.best_rho = rho;
            }
        } catch (const Error& e) {
            pt.skip_reason = e.what();
        }
        result.points.push_back(std::move(pt));
    }
    if (!std::isfinite(best_bound))
        throw NoAdmissiblePoint("no admissible rho in the supplied grid");
    return result;
}

std::vector<double> default_rho_grid(const StateSpaceModel& model,
                                     const FrequencyRange& band) {
    // Start from whichever admissibility estimate is larger; the exact
    // spectral threshold can sit well below the conservative formula.
    const double star = band.variant() == RangeVariant::HF
                            ? rho_star_hf(model.A, band)
                            : rho_star_mf(model.A, band);
    const double t = std::max(rho_threshold(model.A, band), star);
    const double base = std::max(t, 1e-3);
    const double eps = 1e-2 * std::max(1.0, std::abs(t));
    return {t + eps, 10.0 * base, 100.0 * base};
}

Eigen::Index min_order_for_tolerance(const StateSpaceModel& model,
                                     const FrequencyRange& band, double rho,
                                     Routing routing, double tol) {
    if (!(tol > 0.0)) throw Error("tolerance must be positive");
    const Eigen::Index n = model.order();
    if (n < 2)
        throw NotAchievable("model order 1 cannot be reduced", std::numeric_limits<double>::infinity());

    // One mapping + balance gives every bound; 2 * scale * tail(r) is
    // monotone nonincreasing in r, so scan from the smallest order.
    PfdMapKind kind{routing == Routing::R1Upper ? MapFlavor::Upper : MapFlavor::Lower,
                    band,
                    routing == Routing::R2Lower && rho > 0.0 ? -rho : rho};
    MappedSystem mapped = apply_map(model, kind);
    BalancedRealization bal = balance(mapped.model);
    const double scale = map_scale(kind);
    for (Eigen::Index r = 1; r < n; ++r) {
        const double bound = 2.0 * scale * bal.hankel_sv.tail(n - r).sum();
        if (bound <= tol) return r;
    }
    const double last = 2.0 * scale * bal.hankel_sv.tail(1).sum();
    throw NotAchievable("no order r < n meets the tolerance; best bound " +
                            std::to_string(last),
                        last);
}

ReductionResult pfdbt_retry_stable(const StateSpaceModel& model,
                                   const FrequencyRange& band, double rho,
                                   Eigen::Index r, Routing routing,
                                   double growth, int max_tries) {
    ReductionResult res = pfdbt(model, band, rho, r, routing);
    for (int attempt = 1; res.stability_lost && attempt < max_tries; ++attempt) {
        rho *= growth;
        res = pfdbt(model, band, rho, r, routing);
    }
    return res;
}

}  // namespace ffmor
