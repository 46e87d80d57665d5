#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapdist {

/// Raised when inputs violate a documented precondition (bad files, mismatched
/// grids, malformed specs). The CLI maps it to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t cells = 1;
};

/// Uniform axis-aligned box discretization of the ambient manifold. The
/// measure is the Lebesgue volume of each cell; all cells share one volume.
/// Immutable after construction.
class GridDomain {
public:
    explicit GridDomain(std::vector<Axis> axes);

    std::size_t dims() const { return axes_.size(); }
    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t cell_count() const { return cell_count_; }
    double cell_volume() const { return cell_volume_; }
    double total_volume() const { return total_volume_; }

    /// Row-major cell index <-> per-axis index, axis 0 slowest.
    std::vector<std::size_t> cell_coords(std::size_t index) const;
    std::size_t cell_index(std::span<const std::size_t> coords) const;
    std::vector<double> cell_midpoint(std::size_t index) const;

private:
    std::vector<Axis> axes_;
    std::size_t cell_count_ = 0;
    double cell_volume_ = 0.0;
    double total_volume_ = 0.0;
};

using GridPtr = std::shared_ptr<const GridDomain>;

GridPtr make_grid(std::vector<Axis> axes);

/// Convenience for 1-d grids over [lo, hi).
GridPtr make_interval_grid(double lo, double hi, std::size_t cells);

/// True when the two grids describe the same discretization (same axes up to
/// 1e-12 relative on the extents).
bool same_layout(const GridDomain& a, const GridDomain& b);

/// True when `fine` subdivides `coarse`: equal extents and every axis cell
/// count of `fine` is a positive multiple of the matching count in `coarse`.
bool refines(const GridDomain& coarse, const GridDomain& fine);

/// Measurable subset of a grid, stored as a sorted set of cell indices.
class DomainMask {
public:
    DomainMask(GridPtr grid, std::vector<std::size_t> members);

    static DomainMask full(GridPtr grid);
    static DomainMask empty(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    const std::vector<std::size_t>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool contains(std::size_t cell) const;
    bool covers_grid() const { return members_.size() == grid_->cell_count(); }

    double volume() const;

private:
    GridPtr grid_;
    std::vector<std::size_t> members_;  // sorted, unique, < grid cell count
};

double mask_volume(const DomainMask& m);
DomainMask mask_symdiff(const DomainMask& a, const DomainMask& b);
DomainMask mask_intersect(const DomainMask& a, const DomainMask& b);
DomainMask mask_union(const DomainMask& a, const DomainMask& b);
DomainMask mask_difference(const DomainMask& a, const DomainMask& b);
bool mask_subset(const DomainMask& inner, const DomainMask& outer);

/// Discrete set limits of an ordered family of masks (ordered by parameter
/// decreasing toward the limit). Nested families are resolved exactly via the
/// set identity (liminf = limsup = last mask); general families use tails with
/// at least two samples, so the degenerate one-element tail cannot force every
/// cell of the last mask into the limits.
DomainMask mask_liminf(const std::vector<DomainMask>& masks);
DomainMask mask_limsup(const std::vector<DomainMask>& masks);

/// Partial map: a mask plus one target point per member cell. Values are
/// stored row-per-member in mask order.
class PartialMap {
public:
    PartialMap(DomainMask mask, std::size_t target_dim, std::vector<double> values);

    const DomainMask& mask() const { return mask_; }
    const GridPtr& grid() const { return mask_.grid(); }
    std::size_t target_dim() const { return target_dim_; }
    const std::vector<double>& values() const { return values_; }

    std::span<const double> value_at_slot(std::size_t slot) const {
        return {values_.data() + slot * target_dim_, target_dim_};
    }
    /// Slot of a cell in the mask order, or npos when the cell is outside.
    std::size_t slot_of(std::size_t cell) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    DomainMask mask_;
    std::size_t target_dim_;
    std::vector<double> values_;
};

/// Nested finite-volume exhaustion S_1 c S_2 c ... c S_K with weights
/// 2^-n / vol(S_n). When the grid itself is the whole (finite volume) ambient
/// space, `full_domain` builds the single-level shortcut whose distance is the
/// plain integral over the grid with no weighting and no truncation tail.
class Exhaustion {
public:
    static Exhaustion nested(std::vector<DomainMask> levels, std::string description = "masks");
    static Exhaustion full_domain(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    const std::vector<DomainMask>& levels() const { return levels_; }
    std::size_t depth() const { return levels_.size(); }
    bool finite_volume_shortcut() const { return finite_shortcut_; }
    double tail_bound() const;
    const std::string& description() const { return description_; }

private:
    Exhaustion() = default;

    GridPtr grid_;
    std::vector<DomainMask> levels_;
    bool finite_shortcut_ = false;
    std::string description_;
};

}  // namespace mapdist
