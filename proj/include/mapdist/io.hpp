#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mapdist/convergence.hpp"
#include "mapdist/grid.hpp"

namespace mapdist {

/// Full round-trip decimal formatting (%.17g) used for every numeric output.
std::string format_full(double x);

/// Map file format, line oriented:
///   grid <dims> <lo_1> <hi_1> <n_1> ... <lo_d> <hi_d> <n_d> target <k>
///   <cell_index> <v_1> ... <v_k>
/// Cells absent from the body are outside the domain. `#` starts a comment.
PartialMap read_map(std::istream& in);
PartialMap read_map(const std::filesystem::path& path);
void write_map(const PartialMap& map, std::ostream& out);
void write_map(const PartialMap& map, const std::filesystem::path& path);

struct ManifestEntry {
    double time = 0.0;
    std::filesystem::path path;
};

/// Family manifest: lines `t <time> <mapfile>`, times strictly decreasing,
/// paths relative to the manifest location. grid_consistent records whether
/// every referenced map shares one grid header.
struct Manifest {
    std::vector<ManifestEntry> entries;
    bool grid_consistent = true;
};

Manifest read_manifest(const std::filesystem::path& path);

/// Loads a family from a manifest file, or from a directory containing one
/// file named `manifest`.
FamilySample load_family(const std::filesystem::path& manifest_or_dir);

/// Writes one map file per sample plus a manifest into `dir`.
void write_family(const FamilySample& f, const std::filesystem::path& dir,
                  const std::string& prefix);

/// Exhaustion specs: `full` (whole finite-volume grid, unweighted),
/// `boxes:<K>` (K centered nested boxes snapped to cells, the last covering
/// the grid), `masks:<file,...>` (explicit mask files, verified nested).
Exhaustion parse_exhaustion_spec(std::string_view spec, const GridPtr& grid);

/// `full` or a map file whose cell set is the mask (values ignored).
DomainMask parse_mask_spec(std::string_view spec, const GridPtr& grid);

}  // namespace mapdist
