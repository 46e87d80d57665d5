#pragma once

#include <limits>
#include <optional>
#include <string>

#include "mapdist/convergence.hpp"

namespace mapdist {

/// Two-sided bracket on the radius of convergence. `upper` is +infinity when
/// no convergent perturbation certificate is available. The bracket depends on
/// the chosen target metric and exhaustion, so both are recorded. Only the
/// existence of an almost-everywhere limit is certified for the perturbation;
/// whether that limit is an embedding is not checked, hence the fixed note.
struct RadiusReport {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::size_t witness_first = 0;   // sample indices of the maximizing pair
    std::size_t witness_second = 0;
    double witness_time_first = 0.0;
    double witness_time_second = 0.0;
    std::string certificate = "none";  // "supplied" | "freeze_tail(T=...)" | "none"
    std::string metric_desc;
    std::string exhaustion_desc;
    std::string note = "limit-exists-only";

    bool upper_finite() const { return upper != std::numeric_limits<double>::infinity(); }
    /// "removable" when the certificate drives the upper bound under the given
    /// threshold, "singular" when even the lower bound clears it.
    std::string verdict(double removable_threshold = 1e-3) const;
};

struct OscWitness {
    std::size_t first = 0;
    std::size_t second = 0;
};

/// Half of the largest pairwise exhaustion distance over the trailing window.
/// Any family converging within epsilon of this family at every time forces
/// epsilon at least this value (up to the perturbed family's own tail
/// oscillation), so it lower-bounds the radius of convergence at sample scale.
double osc_lower_bound(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                       double window_fraction = 0.25, OscWitness* witness = nullptr);

/// Largest per-time distance between the family and a supplied convergent
/// perturbation with the same times and domains. Validates that the
/// perturbation is Cauchy and has an almost-everywhere limit.
double perturb_upper_bound(const FamilySample& f, const FamilySample& g, const Exhaustion& e,
                           const TargetMetric& d, const ConvergenceOptions& opts = {});

struct RadiusOptions {
    ConvergenceOptions convergence;
    double window_fraction = 0.25;
    double cell_tol = 1e-6;  // settles the perturbation's a.e. limit check
};

/// Combines the oscillation lower bound with a certificate upper bound. With
/// no supplied perturbation, tail-frozen variants of the family itself are
/// tried at successively later freeze times; each valid one certifies an upper
/// bound and the smallest is kept.
RadiusReport radius_report(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                           const FamilySample* perturbation = nullptr,
                           const RadiusOptions& opts = {});

}  // namespace mapdist
