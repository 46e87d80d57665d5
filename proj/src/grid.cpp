#include "mapdist/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mapdist/compensated.hpp"

namespace mapdist {

GridDomain::GridDomain(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw input_error("grid needs at least one axis");
    cell_count_ = 1;
    cell_volume_ = 1.0;
    total_volume_ = 1.0;
    for (const Axis& ax : axes_) {
        if (!(ax.lo < ax.hi)) throw input_error("grid axis must satisfy lo < hi");
        if (ax.cells == 0) throw input_error("grid axis needs a positive cell count");
        cell_count_ *= ax.cells;
        cell_volume_ *= (ax.hi - ax.lo) / static_cast<double>(ax.cells);
        total_volume_ *= ax.hi - ax.lo;
    }
}

std::vector<std::size_t> GridDomain::cell_coords(std::size_t index) const {
    std::vector<std::size_t> coords(axes_.size());
    for (std::size_t a = axes_.size(); a-- > 0;) {
        coords[a] = index % axes_[a].cells;
        index /= axes_[a].cells;
    }
    return coords;
}

std::size_t GridDomain::cell_index(std::span<const std::size_t> coords) const {
    std::size_t index = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        index = index * axes_[a].cells + coords[a];
    }
    return index;
}

std::vector<double> GridDomain::cell_midpoint(std::size_t index) const {
    std::vector<std::size_t> coords = cell_coords(index);
    std::vector<double> mid(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        double step = (axes_[a].hi - axes_[a].lo) / static_cast<double>(axes_[a].cells);
        mid[a] = axes_[a].lo + (static_cast<double>(coords[a]) + 0.5) * step;
    }
    return mid;
}

GridPtr make_grid(std::vector<Axis> axes) {
    return std::make_shared<GridDomain>(std::move(axes));
}

GridPtr make_interval_grid(double lo, double hi, std::size_t cells) {
    return make_grid({Axis{lo, hi, cells}});
}

namespace {

bool close(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

bool same_layout(const GridDomain& a, const GridDomain& b) {
    if (&a == &b) return true;
    if (a.dims() != b.dims()) return false;
    for (std::size_t i = 0; i < a.dims(); ++i) {
        const Axis& x = a.axes()[i];
        const Axis& y = b.axes()[i];
        if (x.cells != y.cells || !close(x.lo, y.lo) || !close(x.hi, y.hi)) return false;
    }
    return true;
}

bool refines(const GridDomain& coarse, const GridDomain& fine) {
    if (coarse.dims() != fine.dims()) return false;
    for (std::size_t i = 0; i < coarse.dims(); ++i) {
        const Axis& c = coarse.axes()[i];
        const Axis& f = fine.axes()[i];
        if (!close(c.lo, f.lo) || !close(c.hi, f.hi)) return false;
        if (f.cells == 0 || f.cells % c.cells != 0) return false;
    }
    return true;
}

DomainMask::DomainMask(GridPtr grid, std::vector<std::size_t> members)
    : grid_(std::move(grid)), members_(std::move(members)) {
    if (!grid_) throw input_error("mask needs a grid");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.back() >= grid_->cell_count()) {
        throw input_error("mask member out of range");
    }
}

DomainMask DomainMask::full(GridPtr grid) {
    std::vector<std::size_t> all(grid->cell_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return DomainMask(std::move(grid), std::move(all));
}

DomainMask DomainMask::empty(GridPtr grid) { return DomainMask(std::move(grid), {}); }

bool DomainMask::contains(std::size_t cell) const {
    return std::binary_search(members_.begin(), members_.end(), cell);
}

double DomainMask::volume() const {
    return static_cast<double>(members_.size()) * grid_->cell_volume();
}

double mask_volume(const DomainMask& m) { return m.volume(); }

namespace {

void require_same_grid(const DomainMask& a, const DomainMask& b) {
    if (!same_layout(*a.grid(), *b.grid())) throw input_error("mask grid mismatch");
}

}  // namespace

DomainMask mask_symdiff(const DomainMask& a, const DomainMask& b) {
    require_same_grid(a, b);
    std::vector<std::size_t> out;
    std::set_symmetric_difference(a.members().begin(), a.members().end(),
                                  b.members().begin(), b.members().end(),
                                  std::back_inserter(out));
    return DomainMask(a.grid(), std::move(out));
}

DomainMask mask_intersect(const DomainMask& a, const DomainMask& b) {
    require_same_grid(a, b);
    std::vector<std::size_t> out;
    std::set_intersection(a.members().begin(), a.members().end(),
                          b.members().begin(), b.members().end(), std::back_inserter(out));
    return DomainMask(a.grid(), std::move(out));
}

DomainMask mask_union(const DomainMask& a, const DomainMask& b) {
    require_same_grid(a, b);
    std::vector<std::size_t> out;
    std::set_union(a.members().begin(), a.members().end(), b.members().begin(),
                   b.members().end(), std::back_inserter(out));
    return DomainMask(a.grid(), std::move(out));
}

DomainMask mask_difference(const DomainMask& a, const DomainMask& b) {
    require_same_grid(a, b);
    std::vector<std::size_t> out;
    std::set_difference(a.members().begin(), a.members().end(), b.members().begin(),
                        b.members().end(), std::back_inserter(out));
    return DomainMask(a.grid(), std::move(out));
}

bool mask_subset(const DomainMask& inner, const DomainMask& outer) {
    require_same_grid(inner, outer);
    return std::includes(outer.members().begin(), outer.members().end(),
                         inner.members().begin(), inner.members().end());
}

namespace {

enum class Nesting { none, non_increasing, non_decreasing };

Nesting detect_nesting(const std::vector<DomainMask>& masks) {
    bool shrinking = true;
    bool growing = true;
    for (std::size_t j = 0; j + 1 < masks.size(); ++j) {
        if (!mask_subset(masks[j + 1], masks[j])) shrinking = false;
        if (!mask_subset(masks[j], masks[j + 1])) growing = false;
        if (!shrinking && !growing) break;
    }
    if (shrinking) return Nesting::non_increasing;
    if (growing) return Nesting::non_decreasing;
    return Nesting::none;
}

void require_nonempty(const std::vector<DomainMask>& masks) {
    if (masks.empty()) throw input_error("set limit of an empty mask family");
    for (std::size_t j = 1; j < masks.size(); ++j) {
        if (!same_layout(*masks[j].grid(), *masks[0].grid())) {
            throw input_error("mask grid mismatch in family");
        }
    }
}

}  // namespace

DomainMask mask_liminf(const std::vector<DomainMask>& masks) {
    require_nonempty(masks);
    if (detect_nesting(masks) != Nesting::none) return masks.back();
    // Union over tails (of >= 2 samples) of the tail intersections. Suffix
    // intersections grow with the start index, so the widest valid tail is the
    // one starting at J-2.
    DomainMask tail = mask_intersect(masks[masks.size() - 2], masks.back());
    return tail;
}

DomainMask mask_limsup(const std::vector<DomainMask>& masks) {
    require_nonempty(masks);
    if (detect_nesting(masks) != Nesting::none) return masks.back();
    // Intersection over tails (of >= 2 samples) of the tail unions. Suffix
    // unions shrink as the start index grows, so the binding tail starts at J-2.
    DomainMask tail = mask_union(masks[masks.size() - 2], masks.back());
    return tail;
}

PartialMap::PartialMap(DomainMask mask, std::size_t target_dim, std::vector<double> values)
    : mask_(std::move(mask)), target_dim_(target_dim), values_(std::move(values)) {
    if (target_dim_ == 0) throw input_error("target dimension must be positive");
    if (values_.size() != mask_.size() * target_dim_) {
        throw input_error("value count does not match mask size");
    }
}

std::size_t PartialMap::slot_of(std::size_t cell) const {
    const auto& m = mask_.members();
    auto it = std::lower_bound(m.begin(), m.end(), cell);
    if (it == m.end() || *it != cell) return npos;
    return static_cast<std::size_t>(it - m.begin());
}

Exhaustion Exhaustion::nested(std::vector<DomainMask> levels, std::string description) {
    if (levels.empty()) throw input_error("exhaustion needs at least one level");
    for (std::size_t n = 0; n < levels.size(); ++n) {
        if (!same_layout(*levels[n].grid(), *levels[0].grid())) {
            throw input_error("exhaustion levels on mismatched grids");
        }
        if (levels[n].size() == 0) throw input_error("exhaustion level has zero volume");
        if (n > 0 && !mask_subset(levels[n - 1], levels[n])) {
            throw input_error("exhaustion levels are not nested");
        }
    }
    Exhaustion e;
    e.grid_ = levels[0].grid();
    e.levels_ = std::move(levels);
    e.finite_shortcut_ = false;
    e.description_ = std::move(description);
    return e;
}

Exhaustion Exhaustion::full_domain(GridPtr grid) {
    Exhaustion e;
    e.levels_.push_back(DomainMask::full(grid));
    e.grid_ = std::move(grid);
    e.finite_shortcut_ = true;
    e.description_ = "full";
    return e;
}

double Exhaustion::tail_bound() const {
    if (finite_shortcut_) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(levels_.size()));
}

}  // namespace mapdist
