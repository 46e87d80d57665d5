#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mapdist/grid.hpp"
#include "mapdist/map_metric.hpp"
#include "mapdist/target_metric.hpp"

namespace mapdist {

/// Finite sampling of a one-parameter family: times strictly decreasing toward
/// the limit parameter, one partial map per time, all on one grid layout.
struct FamilySample {
    GridPtr grid;
    std::vector<double> times;
    std::vector<PartialMap> maps;
    double limit_param = 0.0;

    std::size_t size() const { return maps.size(); }
    std::vector<DomainMask> masks() const;
    void validate() const;
};

enum class Verdict { cauchy, converges, diverges, inconclusive };

const char* verdict_name(Verdict v);

struct DistanceEntry {
    std::size_t first = 0;
    std::size_t second = 0;  // kTargetIndex when the distance is to a fixed target map
    double value = 0.0;
};

inline constexpr std::size_t kTargetIndex = static_cast<std::size_t>(-1);

struct ConvergenceReport {
    Verdict verdict = Verdict::inconclusive;
    /// tail_oscillation[i]: max distance among samples with index >= i
    /// (pairwise for Cauchy checks, to the target for convergence checks).
    /// Non-increasing in i by construction.
    std::vector<double> tail_oscillation;
    std::vector<DistanceEntry> details;
    double threshold = 0.0;
    std::size_t window_start = 0;
};

struct ConvergenceOptions {
    double threshold = 1e-6;
    /// Fraction of trailing samples whose oscillation decides the verdict.
    double window_fraction = 0.25;
    /// Oscillation above threshold but below decay_ratio * initial oscillation
    /// reads as "still decaying": inconclusive rather than diverges.
    double decay_ratio = 0.5;
    unsigned jobs = 1;
};

/// Tail Cauchy diagnostic: all pairwise exhaustion distances, suffix
/// oscillation curve, verdict from the final window.
ConvergenceReport is_cauchy(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                            const ConvergenceOptions& opts = {});

/// Distance of every sample to a candidate limit; verdict from the final window.
ConvergenceReport converges_to(const FamilySample& f, const PartialMap& target,
                               const Exhaustion& e, const TargetMetric& d,
                               const ConvergenceOptions& opts = {});

struct DomainConvergence {
    bool converged = false;
    DomainMask liminf;
    DomainMask limsup;
};

/// Set convergence of the sampled domains: liminf and limsup agree exactly
/// (equal cell sets; every cell has positive volume).
DomainConvergence domains_converge(const FamilySample& f);

/// Almost-everywhere pointwise limit at sample scale: cells of the domain
/// liminf whose value sequences settle within cell_tol over the final window.
/// Returns nothing when the settled cells miss a positive-volume part of the
/// domain limsup.
std::optional<PartialMap> ae_limit(const FamilySample& f, const TargetMetric& d,
                                   double cell_tol);

/// Encodes a partial map as a total map on `cover` into R^(k+1): in-domain
/// values become (0, v_1..v_k), missing cells the sentinel (1, 0, .., 0). The
/// clamped distance between two lifts over `cover` equals the distance between
/// the original maps, so the lift is an isometry for dist_on.
PartialMap lift_sentinel(const PartialMap& map, const DomainMask& cover,
                         const TargetMetric& d);

/// Inverts lift_sentinel: cells whose first coordinate differs from 1 are
/// in-domain with the remaining coordinates as value.
PartialMap decode_sentinel(const PartialMap& lifted);

struct ConstructDiagnostics {
    std::size_t levels_used = 0;
    std::size_t glue_conflicts = 0;
};

/// Limit of a Cauchy family by the completeness construction at sample scale:
/// per dyadic level pick the anchor time whose tail oscillates below 2^-n,
/// lift everything with the sentinel, clamp the tail to the radius-1/2 ball
/// around the anchor, estimate the inner L1 limit by the componentwise median
/// of the clamped tail, keep cells where the estimate stays within 1/4 of the
/// anchor, glue levels (largest level wins), decode the sentinel, and clip the
/// domain to the sampled limsup.
PartialMap construct_limit(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                           const ConvergenceOptions& opts = {},
                           ConstructDiagnostics* diag = nullptr);

/// Convergent perturbation by tail reparametrization: samples at t >= T are
/// untouched; below T values come from the sample nearest above the
/// bump-reparametrized time, restricted to the sample's own domain. Requires
/// the domains below T to be nested into their source domains.
FamilySample freeze_tail(const FamilySample& f, double freeze_time);

}  // namespace mapdist
