#include "mapdist/map_metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mapdist/compensated.hpp"

namespace mapdist {

PenaltyField::PenaltyField(GridPtr grid, std::vector<double> values, double alpha)
    : grid_(std::move(grid)), values_(std::move(values)), alpha_(alpha) {
    if (values_.size() != grid_->cell_count()) throw input_error("penalty field size mismatch");
}

namespace {

void require_compatible(const PartialMap& a, const PartialMap& b, const TargetMetric& d) {
    if (a.target_dim() != b.target_dim() || a.target_dim() != d.dimension()) {
        throw input_error("target dimension mismatch");
    }
}

/// Walks the three sorted member lists (window, mask a, mask b) and hands each
/// window cell to `fn` with flags telling whether it lies in a and in b.
template <typename Fn>
void for_each_window_cell(const std::vector<std::size_t>& window,
                          const std::vector<std::size_t>& in_a,
                          const std::vector<std::size_t>& in_b, Fn&& fn) {
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (std::size_t cell : window) {
        while (ia < in_a.size() && in_a[ia] < cell) ++ia;
        while (ib < in_b.size() && in_b[ib] < cell) ++ib;
        bool a_has = ia < in_a.size() && in_a[ia] == cell;
        bool b_has = ib < in_b.size() && in_b[ib] == cell;
        fn(cell, a_has, b_has);
    }
}

struct AlignedPair {
    PartialMap a;
    PartialMap b;
};

}  // namespace

GridPtr common_refinement(const GridPtr& a, const GridPtr& b) {
    if (same_layout(*a, *b)) return a;
    if (a->dims() != b->dims()) throw input_error("grid dimension mismatch");
    std::vector<Axis> axes;
    axes.reserve(a->dims());
    for (std::size_t i = 0; i < a->dims(); ++i) {
        const Axis& x = a->axes()[i];
        const Axis& y = b->axes()[i];
        double scale = std::max({std::abs(x.lo), std::abs(x.hi), 1.0});
        if (std::abs(x.lo - y.lo) > 1e-12 * scale || std::abs(x.hi - y.hi) > 1e-12 * scale) {
            throw input_error("grids cover different extents; no common refinement");
        }
        axes.push_back(Axis{x.lo, x.hi, std::lcm(x.cells, y.cells)});
    }
    return make_grid(std::move(axes));
}

DomainMask resample(const DomainMask& mask, const GridPtr& fine) {
    if (same_layout(*mask.grid(), *fine)) return DomainMask(fine, mask.members());
    if (!refines(*mask.grid(), *fine)) throw input_error("grid is not a refinement");
    const GridDomain& coarse = *mask.grid();
    std::size_t dims = coarse.dims();
    std::vector<std::size_t> factor(dims);
    std::size_t block = 1;
    for (std::size_t i = 0; i < dims; ++i) {
        factor[i] = fine->axes()[i].cells / coarse.axes()[i].cells;
        block *= factor[i];
    }
    std::vector<std::size_t> out;
    out.reserve(mask.size() * block);
    std::vector<std::size_t> sub(dims, 0);
    std::vector<std::size_t> fine_coords(dims);
    for (std::size_t cell : mask.members()) {
        std::vector<std::size_t> coords = coarse.cell_coords(cell);
        std::fill(sub.begin(), sub.end(), 0);
        for (std::size_t n = 0; n < block; ++n) {
            for (std::size_t i = 0; i < dims; ++i) {
                fine_coords[i] = coords[i] * factor[i] + sub[i];
            }
            out.push_back(fine->cell_index(fine_coords));
            for (std::size_t i = dims; i-- > 0;) {
                if (++sub[i] < factor[i]) break;
                sub[i] = 0;
            }
        }
    }
    return DomainMask(fine, std::move(out));
}

PartialMap resample(const PartialMap& map, const GridPtr& fine) {
    if (same_layout(*map.grid(), *fine)) {
        return PartialMap(DomainMask(fine, map.mask().members()), map.target_dim(), map.values());
    }
    DomainMask fine_mask = resample(map.mask(), fine);
    std::size_t k = map.target_dim();
    std::vector<double> values(fine_mask.size() * k);
    const GridDomain& coarse = *map.grid();
    std::vector<std::size_t> factor(coarse.dims());
    for (std::size_t i = 0; i < coarse.dims(); ++i) {
        factor[i] = fine->axes()[i].cells / coarse.axes()[i].cells;
    }
    for (std::size_t slot = 0; slot < fine_mask.size(); ++slot) {
        std::vector<std::size_t> fc = fine->cell_coords(fine_mask.members()[slot]);
        for (std::size_t i = 0; i < fc.size(); ++i) fc[i] /= factor[i];
        std::size_t coarse_cell = coarse.cell_index(fc);
        std::size_t coarse_slot = map.slot_of(coarse_cell);
        std::span<const double> v = map.value_at_slot(coarse_slot);
        std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(slot * k));
    }
    return PartialMap(std::move(fine_mask), k, std::move(values));
}

namespace {

/// Brings a window and two maps onto one layout, resampling through the common
/// refinement as needed.
struct AlignedInputs {
    DomainMask window;
    PartialMap a;
    PartialMap b;
};

AlignedInputs align(const DomainMask& window, const PartialMap& a, const PartialMap& b) {
    GridPtr common = common_refinement(a.grid(), b.grid());
    common = common_refinement(common, window.grid());
    return AlignedInputs{resample(window, common), resample(a, common), resample(b, common)};
}

}  // namespace

PenaltyField penalty_field(const PartialMap& a, const PartialMap& b, const TargetMetric& d,
                           double alpha) {
    require_compatible(a, b, d);
    if (alpha <= 0.0) throw input_error("alpha must be positive");
    if (!same_layout(*a.grid(), *b.grid())) {
        GridPtr common = common_refinement(a.grid(), b.grid());
        return penalty_field(resample(a, common), resample(b, common), d, alpha);
    }
    std::vector<double> values(a.grid()->cell_count(), 0.0);
    std::size_t sa = 0;
    std::size_t sb = 0;
    const auto& ma = a.mask().members();
    const auto& mb = b.mask().members();
    while (sa < ma.size() || sb < mb.size()) {
        if (sb == mb.size() || (sa < ma.size() && ma[sa] < mb[sb])) {
            values[ma[sa]] = alpha;
            ++sa;
        } else if (sa == ma.size() || mb[sb] < ma[sa]) {
            values[mb[sb]] = alpha;
            ++sb;
        } else {
            values[ma[sa]] = std::min(alpha, d.distance(a.value_at_slot(sa), b.value_at_slot(sb)));
            ++sa;
            ++sb;
        }
    }
    return PenaltyField(a.grid(), std::move(values), alpha);
}

double dist_on(const DomainMask& window, const PartialMap& a, const PartialMap& b,
               const TargetMetric& d, double alpha) {
    require_compatible(a, b, d);
    if (alpha <= 0.0) throw input_error("alpha must be positive");
    if (!same_layout(*window.grid(), *a.grid()) || !same_layout(*a.grid(), *b.grid())) {
        AlignedInputs in = align(window, a, b);
        return dist_on(in.window, in.a, in.b, d, alpha);
    }
    CompensatedSum sum;
    for_each_window_cell(window.members(), a.mask().members(), b.mask().members(),
                         [&](std::size_t cell, bool a_has, bool b_has) {
                             if (a_has && b_has) {
                                 double dd = d.distance(a.value_at_slot(a.slot_of(cell)),
                                                        b.value_at_slot(b.slot_of(cell)));
                                 sum.add(std::min(alpha, dd));
                             } else if (a_has != b_has) {
                                 sum.add(alpha);
                             }
                         });
    return sum.value() * window.grid()->cell_volume();
}

ExhaustionDistance dist_exhaustion(const Exhaustion& e, const PartialMap& a,
                                   const PartialMap& b, const TargetMetric& d) {
    if (e.depth() == 0) throw input_error("empty exhaustion");
    if (e.finite_volume_shortcut()) {
        return ExhaustionDistance{dist_on(e.levels().front(), a, b, d), 0.0};
    }
    CompensatedSum sum;
    for (std::size_t n = 0; n < e.depth(); ++n) {
        const DomainMask& level = e.levels()[n];
        double normalized = dist_on(level, a, b, d) / level.volume();
        sum.add(std::ldexp(normalized, -static_cast<int>(n + 1)));
    }
    return ExhaustionDistance{sum.value(), e.tail_bound()};
}

bool equivalent(const PartialMap& a, const PartialMap& b, const TargetMetric& d, double tol) {
    require_compatible(a, b, d);
    if (!same_layout(*a.grid(), *b.grid())) {
        GridPtr common = common_refinement(a.grid(), b.grid());
        return equivalent(resample(a, common), resample(b, common), d, tol);
    }
    if (a.mask().members() != b.mask().members()) return false;
    for (std::size_t slot = 0; slot < a.mask().size(); ++slot) {
        if (d.distance(a.value_at_slot(slot), b.value_at_slot(slot)) > tol) return false;
    }
    return true;
}

}  // namespace mapdist
