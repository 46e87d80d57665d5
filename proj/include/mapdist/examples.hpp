#pragma once

#include <vector>

#include "mapdist/convergence.hpp"
#include "mapdist/grid.hpp"

namespace mapdist {

/// Traveling-wave family on (0,1): for each m in m_list and each offset
/// k = 0..m-1 one total map equal to m on (k/m, (k+1)/m) and 0 elsewhere, in
/// that enumeration order, at times 1/j. Every member integrates to 1 while
/// its support volume shrinks like 1/m. The grid cell count must be divisible
/// by every m so supports are unions of cells.
FamilySample gen_wave(const std::vector<unsigned>& m_list, std::size_t cells = 240);

/// Oscillating family on (0, 3q): phi_t(x) = x/(9q) + (1/3) sin(1/t). Sampled
/// at the extremal times 2/((4n+1)pi) and 2/((4n+3)pi) for n = 1..depth, where
/// sin(1/t) is exactly +1 / -1, plus any extra times supplied. These are the
/// witnesses for the oscillation lower bound.
FamilySample gen_oscillation(double q, std::size_t depth, std::size_t cells = 600,
                             std::vector<double> extra_times = {});

struct StripExample {
    FamilySample family;
    Exhaustion exhaustion;
    PartialMap limit;  // x -> (x, 0)
};

/// Strip family phi_t(x) = (x, t) on [-L, L] (L = n_levels) with the centered
/// exhaustion S_n = [-n, n]. Per-level distances to the limit grow linearly in
/// n while the exhaustion distance stays bounded by 1.
StripExample gen_strip(const std::vector<double>& t_list, std::size_t n_levels,
                       std::size_t cells_per_unit = 10);

/// Growing-domain family on (0,1): domain (0, 1-t) with values x^power,
/// converging almost everywhere pointwise to x^power on (0,1).
FamilySample gen_shrinking(double power, const std::vector<double>& t_list,
                           std::size_t cells = 200);

/// Constant family: the same map at every time.
FamilySample gen_constant(const PartialMap& map, const std::vector<double>& t_list);

/// L^p norm of a euclidean-valued map: (sum |phi|^p vol)^{1/p}.
double lp_norm(const PartialMap& map, double p);

}  // namespace mapdist
