#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "mapdist/convergence.hpp"
#include "mapdist/grid.hpp"
#include "mapdist/map_metric.hpp"
#include "mapdist/target_metric.hpp"

namespace mapdist_test {

using namespace mapdist;

/// Seed for randomized property suites; override with MAPDIST_SEED.
inline std::uint64_t suite_seed() {
    if (const char* env = std::getenv("MAPDIST_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 20260811ull;
}

inline std::mt19937_64 make_rng(std::uint64_t salt = 0) {
    return std::mt19937_64(suite_seed() + salt);
}

inline DomainMask random_mask(const GridPtr& grid, std::mt19937_64& rng, double density = 0.5) {
    std::bernoulli_distribution keep(density);
    std::vector<std::size_t> members;
    for (std::size_t c = 0; c < grid->cell_count(); ++c) {
        if (keep(rng)) members.push_back(c);
    }
    return DomainMask(grid, std::move(members));
}

inline PartialMap random_map(const GridPtr& grid, std::size_t k, std::mt19937_64& rng,
                             double density = 0.5, double scale = 2.0) {
    DomainMask mask = random_mask(grid, rng, density);
    std::uniform_real_distribution<double> value(-scale, scale);
    std::vector<double> values(mask.size() * k);
    for (double& v : values) v = value(rng);
    return PartialMap(std::move(mask), k, std::move(values));
}

/// Independent oracle for dist_on: the split form
///   integral of min(alpha, d) over (B_a n B_b n S)  +  alpha vol((B_a ^ B_b) n S)
/// computed with plain loops and naive summation.
inline double dist_split_oracle(const DomainMask& window, const PartialMap& a,
                                const PartialMap& b, const TargetMetric& d,
                                double alpha = 1.0) {
    double inter = 0.0;
    double sym = 0.0;
    for (std::size_t cell : window.members()) {
        std::size_t sa = a.slot_of(cell);
        std::size_t sb = b.slot_of(cell);
        bool in_a = sa != PartialMap::npos;
        bool in_b = sb != PartialMap::npos;
        if (in_a && in_b) {
            inter += std::min(alpha, d.distance(a.value_at_slot(sa), b.value_at_slot(sb)));
        } else if (in_a != in_b) {
            sym += 1.0;
        }
    }
    double vol = window.grid()->cell_volume();
    return inter * vol + alpha * sym * vol;
}

struct SyntheticFamily {
    FamilySample family;
    PartialMap target;
};

/// Cauchy family contracting geometrically onto a random target map. Sample j
/// sits at distance about 2^-j in values; the domain churns by at most 2^-j in
/// volume per step (nested_masks = false) or shrinks through nested prefixes
/// onto the target domain (nested_masks = true). Churn is quantized to cells,
/// so deep tails stabilize exactly.
inline SyntheticFamily make_contracting_family(std::mt19937_64& rng, std::size_t cells,
                                               std::size_t k, std::size_t samples,
                                               bool nested_masks) {
    GridPtr grid = make_interval_grid(0.0, 1.0, cells);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::vector<double> field(cells * k);
    for (double& v : field) v = value(rng);

    std::size_t base_count = cells / 2 + (rng() % (cells / 4));
    std::vector<std::size_t> base_cells;
    if (nested_masks) {
        for (std::size_t c = 0; c < base_count; ++c) base_cells.push_back(c);
    } else {
        std::bernoulli_distribution keep(0.7);
        for (std::size_t c = 0; c < cells; ++c) {
            if (keep(rng)) base_cells.push_back(c);
        }
    }
    DomainMask base(grid, base_cells);

    double cell_vol = grid->cell_volume();
    FamilySample f;
    f.grid = grid;
    for (std::size_t j = 0; j < samples; ++j) {
        double contraction = std::ldexp(1.0, -static_cast<int>(j));
        std::vector<std::size_t> members;
        if (nested_masks) {
            // Shrinks onto the base prefix as extra cells fall below churn volume.
            std::size_t extra = static_cast<std::size_t>(contraction / cell_vol);
            extra = std::min(extra, cells - base_count);
            for (std::size_t c = 0; c < base_count + extra; ++c) members.push_back(c);
        } else {
            members = base.members();
            std::size_t churn = static_cast<std::size_t>(contraction / cell_vol);
            for (std::size_t n = 0; n < churn; ++n) {
                std::size_t cell = rng() % cells;
                auto it = std::lower_bound(members.begin(), members.end(), cell);
                if (it != members.end() && *it == cell) {
                    members.erase(it);
                } else {
                    members.insert(it, cell);
                }
            }
        }
        DomainMask mask(grid, std::move(members));
        std::vector<double> values(mask.size() * k);
        for (std::size_t slot = 0; slot < mask.size(); ++slot) {
            std::size_t cell = mask.members()[slot];
            for (std::size_t c = 0; c < k; ++c) {
                values[slot * k + c] = field[cell * k + c] + contraction * value(rng);
            }
        }
        f.times.push_back(1.0 / static_cast<double>(j + 1));
        f.maps.push_back(PartialMap(std::move(mask), k, std::move(values)));
    }
    f.validate();

    std::vector<double> target_values(base.size() * k);
    for (std::size_t slot = 0; slot < base.size(); ++slot) {
        std::size_t cell = base.members()[slot];
        for (std::size_t c = 0; c < k; ++c) {
            target_values[slot * k + c] = field[cell * k + c];
        }
    }
    return SyntheticFamily{std::move(f), PartialMap(base, k, std::move(target_values))};
}

}  // namespace mapdist_test
