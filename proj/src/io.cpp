#include "mapdist/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mapdist {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

/// Strips comments and returns whitespace tokens.
std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_double(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw input_error(std::string("bad number in ") + what + ": " + tok);
    }
    if (pos != tok.size()) throw input_error(std::string("bad number in ") + what + ": " + tok);
    return v;
}

std::size_t parse_index(const std::string& tok, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw input_error(std::string("bad index in ") + what + ": " + tok);
    }
    return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace

PartialMap read_map(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        header = tokenize(line);
        if (!header.empty()) break;
    }
    if (header.empty()) throw input_error("map file: missing header");
    if (header[0] != "grid" || header.size() < 2) throw input_error("map file: malformed header");
    std::size_t dims = parse_index(header[1], "header");
    if (dims == 0 || header.size() != 2 + 3 * dims + 2) {
        throw input_error("map file: malformed header");
    }
    std::vector<Axis> axes;
    for (std::size_t a = 0; a < dims; ++a) {
        Axis ax;
        ax.lo = parse_double(header[2 + 3 * a], "header");
        ax.hi = parse_double(header[3 + 3 * a], "header");
        ax.cells = parse_index(header[4 + 3 * a], "header");
        axes.push_back(ax);
    }
    if (header[2 + 3 * dims] != "target") throw input_error("map file: malformed header");
    std::size_t target_dim = parse_index(header[3 + 3 * dims], "header");
    if (target_dim == 0) throw input_error("map file: target dimension must be positive");

    GridPtr grid = make_grid(std::move(axes));
    std::vector<std::pair<std::size_t, std::vector<double>>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 1 + target_dim) {
            throw input_error("map file: cell line needs index plus " +
                              std::to_string(target_dim) + " values");
        }
        std::size_t cell = parse_index(tokens[0], "cell line");
        if (cell >= grid->cell_count()) throw input_error("map file: out-of-range index");
        std::vector<double> v(target_dim);
        for (std::size_t i = 0; i < target_dim; ++i) v[i] = parse_double(tokens[1 + i], "cell line");
        rows.push_back({cell, std::move(v)});
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i].first == rows[i + 1].first) {
            throw input_error("map file: duplicate cell index " + std::to_string(rows[i].first));
        }
    }
    std::vector<std::size_t> cells;
    std::vector<double> values;
    cells.reserve(rows.size());
    values.reserve(rows.size() * target_dim);
    for (auto& r : rows) {
        cells.push_back(r.first);
        values.insert(values.end(), r.second.begin(), r.second.end());
    }
    return PartialMap(DomainMask(std::move(grid), std::move(cells)), target_dim,
                      std::move(values));
}

PartialMap read_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open map file: " + path.string());
    return read_map(in);
}

void write_map(const PartialMap& map, std::ostream& out) {
    const GridDomain& grid = *map.grid();
    out << "grid " << grid.dims();
    for (const Axis& ax : grid.axes()) {
        out << ' ' << format_full(ax.lo) << ' ' << format_full(ax.hi) << ' ' << ax.cells;
    }
    out << " target " << map.target_dim() << '\n';
    for (std::size_t slot = 0; slot < map.mask().size(); ++slot) {
        out << map.mask().members()[slot];
        for (double v : map.value_at_slot(slot)) out << ' ' << format_full(v);
        out << '\n';
    }
}

void write_map(const PartialMap& map, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write map file: " + path.string());
    write_map(map, out);
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open manifest: " + path.string());
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 3 || tokens[0] != "t") {
            throw input_error("manifest: expected `t <time> <mapfile>`");
        }
        ManifestEntry entry;
        entry.time = parse_double(tokens[1], "manifest");
        entry.path = path.parent_path() / tokens[2];
        if (!m.entries.empty() && !(entry.time < m.entries.back().time)) {
            throw input_error("manifest: times must strictly decrease");
        }
        m.entries.push_back(std::move(entry));
    }
    if (m.entries.empty()) throw input_error("manifest: no entries");
    return m;
}

FamilySample load_family(const std::filesystem::path& manifest_or_dir) {
    std::filesystem::path manifest_path = manifest_or_dir;
    if (std::filesystem::is_directory(manifest_path)) manifest_path /= "manifest";
    Manifest manifest = read_manifest(manifest_path);

    FamilySample f;
    for (const ManifestEntry& entry : manifest.entries) {
        PartialMap map = read_map(entry.path);
        if (f.maps.empty()) {
            f.grid = map.grid();
        } else if (!same_layout(*map.grid(), *f.grid)) {
            throw input_error("manifest: maps use inconsistent grid headers");
        }
        f.times.push_back(entry.time);
        f.maps.push_back(std::move(map));
    }
    f.validate();
    return f;
}

void write_family(const FamilySample& f, const std::filesystem::path& dir,
                  const std::string& prefix) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest");
    if (!manifest) throw input_error("cannot write manifest in " + dir.string());
    for (std::size_t j = 0; j < f.size(); ++j) {
        char name[64];
        std::snprintf(name, sizeof(name), "%s_%03zu.map", prefix.c_str(), j);
        write_map(f.maps[j], dir / name);
        manifest << "t " << format_full(f.times[j]) << ' ' << name << '\n';
    }
}

namespace {

/// Centered nested boxes snapped to cell midpoints; level K covers the grid.
Exhaustion boxes_exhaustion(std::size_t levels, const GridPtr& grid) {
    if (levels == 0) throw input_error("boxes exhaustion needs at least one level");
    std::vector<DomainMask> masks;
    for (std::size_t n = 1; n <= levels; ++n) {
        double frac = static_cast<double>(n) / static_cast<double>(levels);
        std::vector<std::size_t> members;
        for (std::size_t c = 0; c < grid->cell_count(); ++c) {
            std::vector<double> mid = grid->cell_midpoint(c);
            bool inside = true;
            for (std::size_t a = 0; a < grid->dims(); ++a) {
                const Axis& ax = grid->axes()[a];
                double center = 0.5 * (ax.lo + ax.hi);
                double half = 0.5 * (ax.hi - ax.lo) * frac;
                if (std::abs(mid[a] - center) >= half) {
                    inside = false;
                    break;
                }
            }
            if (inside) members.push_back(c);
        }
        if (members.empty()) {
            // Snap the innermost level to the central cell so volumes stay positive.
            std::vector<std::size_t> coords(grid->dims());
            for (std::size_t a = 0; a < grid->dims(); ++a) coords[a] = grid->axes()[a].cells / 2;
            members.push_back(grid->cell_index(coords));
        }
        masks.push_back(DomainMask(grid, std::move(members)));
    }
    return Exhaustion::nested(std::move(masks), "boxes:" + std::to_string(levels));
}

}  // namespace

Exhaustion parse_exhaustion_spec(std::string_view spec, const GridPtr& grid) {
    if (spec == "full") return Exhaustion::full_domain(grid);
    if (spec.rfind("boxes:", 0) == 0) {
        std::string count(spec.substr(6));
        return boxes_exhaustion(parse_index(count, "exhaustion spec"), grid);
    }
    if (spec.rfind("masks:", 0) == 0) {
        std::string_view rest = spec.substr(6);
        std::vector<DomainMask> masks;
        while (!rest.empty()) {
            std::size_t comma = rest.find(',');
            std::string file(rest.substr(0, comma));
            PartialMap m = read_map(file);
            if (!same_layout(*m.grid(), *grid)) {
                throw input_error("exhaustion mask grid does not match the maps");
            }
            masks.push_back(DomainMask(grid, m.mask().members()));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return Exhaustion::nested(std::move(masks));
    }
    throw input_error("unknown exhaustion spec: " + std::string(spec));
}

DomainMask parse_mask_spec(std::string_view spec, const GridPtr& grid) {
    if (spec == "full") return DomainMask::full(grid);
    PartialMap m = read_map(std::filesystem::path(std::string(spec)));
    if (!same_layout(*m.grid(), *grid)) throw input_error("mask grid does not match the maps");
    return DomainMask(grid, m.mask().members());
}

}  // namespace mapdist
