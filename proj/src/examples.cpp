#include "mapdist/examples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mapdist/compensated.hpp"

namespace mapdist {

FamilySample gen_wave(const std::vector<unsigned>& m_list, std::size_t cells) {
    if (m_list.empty()) throw input_error("wave family needs at least one height");
    for (unsigned m : m_list) {
        if (m == 0 || cells % m != 0) {
            throw input_error("wave grid cells must be divisible by every height");
        }
    }
    GridPtr grid = make_interval_grid(0.0, 1.0, cells);
    DomainMask full = DomainMask::full(grid);

    FamilySample f;
    f.grid = grid;
    std::size_t index = 0;
    for (unsigned m : m_list) {
        std::size_t width = cells / m;
        for (unsigned k = 0; k < m; ++k) {
            std::vector<double> values(cells, 0.0);
            for (std::size_t c = k * width; c < (k + 1) * width; ++c) {
                values[c] = static_cast<double>(m);
            }
            ++index;
            f.times.push_back(1.0 / static_cast<double>(index));
            f.maps.push_back(PartialMap(full, 1, std::move(values)));
        }
    }
    f.validate();
    return f;
}

FamilySample gen_oscillation(double q, std::size_t depth, std::size_t cells,
                             std::vector<double> extra_times) {
    if (q <= 0.0) throw input_error("oscillation amplitude q must be positive");
    if (depth == 0) throw input_error("oscillation family needs positive depth");
    std::vector<double> times = std::move(extra_times);
    for (std::size_t n = 1; n <= depth; ++n) {
        double dn = static_cast<double>(n);
        times.push_back(2.0 / ((4.0 * dn + 1.0) * std::numbers::pi));
        times.push_back(2.0 / ((4.0 * dn + 3.0) * std::numbers::pi));
    }
    std::sort(times.begin(), times.end(), std::greater<>());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    GridPtr grid = make_interval_grid(0.0, 3.0 * q, cells);
    DomainMask full = DomainMask::full(grid);

    FamilySample f;
    f.grid = grid;
    for (double t : times) {
        double swing = std::sin(1.0 / t) / 3.0;
        std::vector<double> values(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            double x = grid->cell_midpoint(c)[0];
            values[c] = x / (9.0 * q) + swing;
        }
        f.times.push_back(t);
        f.maps.push_back(PartialMap(full, 1, std::move(values)));
    }
    f.validate();
    return f;
}

StripExample gen_strip(const std::vector<double>& t_list, std::size_t n_levels,
                       std::size_t cells_per_unit) {
    if (t_list.empty()) throw input_error("strip family needs times");
    if (n_levels == 0) throw input_error("strip family needs at least one level");
    double extent = static_cast<double>(n_levels);
    std::size_t cells = 2 * n_levels * cells_per_unit;
    GridPtr grid = make_interval_grid(-extent, extent, cells);
    DomainMask full = DomainMask::full(grid);

    auto strip_map = [&](double height) {
        std::vector<double> values(cells * 2);
        for (std::size_t c = 0; c < cells; ++c) {
            values[2 * c] = grid->cell_midpoint(c)[0];
            values[2 * c + 1] = height;
        }
        return PartialMap(full, 2, std::move(values));
    };

    FamilySample f;
    f.grid = grid;
    std::vector<double> times = t_list;
    std::sort(times.begin(), times.end(), std::greater<>());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (double t : times) {
        f.times.push_back(t);
        f.maps.push_back(strip_map(t));
    }
    f.validate();

    // Centered boxes [-n, n]; cells_per_unit keeps every boundary cell-exact.
    std::vector<DomainMask> levels;
    for (std::size_t n = 1; n <= n_levels; ++n) {
        std::vector<std::size_t> members;
        for (std::size_t c = 0; c < cells; ++c) {
            double x = grid->cell_midpoint(c)[0];
            if (std::abs(x) < static_cast<double>(n)) members.push_back(c);
        }
        levels.push_back(DomainMask(grid, std::move(members)));
    }
    return StripExample{std::move(f), Exhaustion::nested(std::move(levels), "boxes:" + std::to_string(n_levels)),
                        strip_map(0.0)};
}

FamilySample gen_shrinking(double power, const std::vector<double>& t_list, std::size_t cells) {
    if (t_list.empty()) throw input_error("shrinking family needs times");
    GridPtr grid = make_interval_grid(0.0, 1.0, cells);
    std::vector<double> times = t_list;
    std::sort(times.begin(), times.end(), std::greater<>());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    FamilySample f;
    f.grid = grid;
    for (double t : times) {
        std::vector<std::size_t> members;
        std::vector<double> values;
        for (std::size_t c = 0; c < cells; ++c) {
            double x = grid->cell_midpoint(c)[0];
            if (x >= 1.0 - t) continue;
            members.push_back(c);
            values.push_back(std::pow(x, power));
        }
        f.times.push_back(t);
        f.maps.push_back(PartialMap(DomainMask(grid, std::move(members)), 1, std::move(values)));
    }
    f.validate();
    return f;
}

FamilySample gen_constant(const PartialMap& map, const std::vector<double>& t_list) {
    FamilySample f;
    f.grid = map.grid();
    std::vector<double> times = t_list;
    std::sort(times.begin(), times.end(), std::greater<>());
    for (double t : times) {
        f.times.push_back(t);
        f.maps.push_back(map);
    }
    f.validate();
    return f;
}

double lp_norm(const PartialMap& map, double p) {
    if (p < 1.0) throw input_error("lp norm needs p >= 1");
    CompensatedSum sum;
    for (std::size_t slot = 0; slot < map.mask().size(); ++slot) {
        std::span<const double> v = map.value_at_slot(slot);
        double sq = 0.0;
        for (double x : v) sq += x * x;
        sum.add(std::pow(std::sqrt(sq), p));
    }
    return std::pow(sum.value() * map.grid()->cell_volume(), 1.0 / p);
}

}  // namespace mapdist
