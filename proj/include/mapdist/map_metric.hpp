#pragma once

#include "mapdist/grid.hpp"
#include "mapdist/target_metric.hpp"

namespace mapdist {

/// Per-cell penalty values over a whole grid: alpha on the symmetric
/// difference of the two domains, min(alpha, d) on the intersection, zero
/// outside both.
class PenaltyField {
public:
    PenaltyField(GridPtr grid, std::vector<double> values, double alpha);

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double alpha() const { return alpha_; }
    double at(std::size_t cell) const { return values_[cell]; }

private:
    GridPtr grid_;
    std::vector<double> values_;
    double alpha_;
};

PenaltyField penalty_field(const PartialMap& a, const PartialMap& b,
                           const TargetMetric& d, double alpha = 1.0);

/// Integral of the penalty over the window mask: the L1-type distance between
/// partial maps restricted to a finite-volume set. Map values are constant per
/// cell, so the sum over cells is the exact integral of the stored fields.
/// Maps on refinement-compatible grids are resampled to the common refinement
/// first.
double dist_on(const DomainMask& window, const PartialMap& a, const PartialMap& b,
               const TargetMetric& d, double alpha = 1.0);

struct ExhaustionDistance {
    double value = 0.0;
    double tail_bound = 0.0;
};

/// Truncated weighted series sum_n 2^-n dist_on(S_n)/vol(S_n). Each normalized
/// term is at most 1, so the truncation error is bounded by 2^-K; the untruncated
/// value lies in [value, value + tail_bound]. For a full-domain (finite volume)
/// exhaustion the distance is the plain unweighted integral and the tail is 0.
ExhaustionDistance dist_exhaustion(const Exhaustion& e, const PartialMap& a,
                                   const PartialMap& b, const TargetMetric& d);

/// Zero-distance test: identical cell sets and values within tol everywhere on
/// the (shared) domain. On grids every cell has positive volume, so this is
/// exactly "distance zero" up to tol.
bool equivalent(const PartialMap& a, const PartialMap& b, const TargetMetric& d,
                double tol = 1e-9);

/// Value-replication resampling onto a refining grid. Exact for the piecewise
/// constant maps stored here.
PartialMap resample(const PartialMap& map, const GridPtr& fine);
DomainMask resample(const DomainMask& mask, const GridPtr& fine);

/// Common refinement of two layouts with equal extents (per-axis lcm of cell
/// counts). Returns the first grid when the layouts already agree.
GridPtr common_refinement(const GridPtr& a, const GridPtr& b);

}  // namespace mapdist
