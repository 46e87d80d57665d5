#include "mapdist/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <utility>

namespace mapdist {

std::vector<DomainMask> FamilySample::masks() const {
    std::vector<DomainMask> out;
    out.reserve(maps.size());
    for (const PartialMap& m : maps) out.push_back(m.mask());
    return out;
}

void FamilySample::validate() const {
    if (!grid) throw input_error("family needs a grid");
    if (times.size() != maps.size()) throw input_error("family times/maps size mismatch");
    if (maps.size() < 2) throw input_error("family needs at least two samples");
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        if (!(times[j] > times[j + 1])) throw input_error("family times must strictly decrease");
    }
    if (!times.empty() && !(times.back() > limit_param)) {
        throw input_error("family times must stay above the limit parameter");
    }
    for (const PartialMap& m : maps) {
        if (!same_layout(*m.grid(), *grid)) throw input_error("family grid mismatch");
        if (m.target_dim() != maps.front().target_dim()) {
            throw input_error("family target dimension mismatch");
        }
    }
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::cauchy: return "cauchy";
        case Verdict::converges: return "converges";
        case Verdict::diverges: return "diverges";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

void run_indexed(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& work) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    unsigned n = std::min<unsigned>(jobs, std::thread::hardware_concurrency() > 0
                                              ? std::thread::hardware_concurrency()
                                              : jobs);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += n) work(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

std::vector<DistanceEntry> pairwise_table(const FamilySample& f, const Exhaustion& e,
                                          const TargetMetric& d, unsigned jobs) {
    std::vector<DistanceEntry> entries;
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            entries.push_back(DistanceEntry{i, j, 0.0});
        }
    }
    run_indexed(entries.size(), jobs, [&](std::size_t n) {
        entries[n].value =
            dist_exhaustion(e, f.maps[entries[n].first], f.maps[entries[n].second], d).value;
    });
    return entries;
}

/// suffix_osc[i] = max of entry values among entries fully inside [i, J).
std::vector<double> suffix_oscillation(const std::vector<DistanceEntry>& entries,
                                       std::size_t count) {
    std::vector<double> osc(count, 0.0);
    for (const DistanceEntry& en : entries) {
        std::size_t start = en.second == kTargetIndex ? en.first
                                                      : std::min(en.first, en.second);
        osc[start] = std::max(osc[start], en.value);
    }
    for (std::size_t i = count; i-- > 1;) {
        osc[i - 1] = std::max(osc[i - 1], osc[i]);
    }
    return osc;
}

std::size_t window_start_index(std::size_t count, double fraction, std::size_t min_window) {
    std::size_t w = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(count)));
    w = std::clamp<std::size_t>(std::max(w, min_window), 1, count);
    return count - w;
}

Verdict decide(const std::vector<double>& osc, std::size_t window_start,
               const ConvergenceOptions& opts, Verdict pass_verdict) {
    double at_window = osc[window_start];
    if (at_window <= opts.threshold) return pass_verdict;
    if (at_window <= opts.decay_ratio * osc.front()) return Verdict::inconclusive;
    return Verdict::diverges;
}

}  // namespace

ConvergenceReport is_cauchy(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                            const ConvergenceOptions& opts) {
    f.validate();
    ConvergenceReport report;
    report.details = pairwise_table(f, e, d, opts.jobs);
    report.tail_oscillation = suffix_oscillation(report.details, f.size());
    report.threshold = opts.threshold;
    // A pairwise window needs two samples.
    report.window_start = window_start_index(f.size(), opts.window_fraction, 2);
    report.verdict = decide(report.tail_oscillation, report.window_start, opts, Verdict::cauchy);
    return report;
}

ConvergenceReport converges_to(const FamilySample& f, const PartialMap& target,
                               const Exhaustion& e, const TargetMetric& d,
                               const ConvergenceOptions& opts) {
    f.validate();
    ConvergenceReport report;
    report.details.resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        report.details[j] = DistanceEntry{j, kTargetIndex, 0.0};
    }
    run_indexed(f.size(), opts.jobs, [&](std::size_t j) {
        report.details[j].value = dist_exhaustion(e, f.maps[j], target, d).value;
    });
    report.tail_oscillation = suffix_oscillation(report.details, f.size());
    report.threshold = opts.threshold;
    report.window_start = window_start_index(f.size(), opts.window_fraction, 1);
    report.verdict =
        decide(report.tail_oscillation, report.window_start, opts, Verdict::converges);
    return report;
}

DomainConvergence domains_converge(const FamilySample& f) {
    f.validate();
    std::vector<DomainMask> masks = f.masks();
    DomainMask lo = mask_liminf(masks);
    DomainMask hi = mask_limsup(masks);
    bool converged = lo.members() == hi.members();
    return DomainConvergence{converged, std::move(lo), std::move(hi)};
}

std::optional<PartialMap> ae_limit(const FamilySample& f, const TargetMetric& d,
                                   double cell_tol) {
    f.validate();
    if (f.size() < 3) throw input_error("ae_limit needs at least three samples");
    std::vector<DomainMask> masks = f.masks();
    DomainMask lo = mask_liminf(masks);
    DomainMask hi = mask_limsup(masks);

    std::size_t window_start = window_start_index(f.size(), 0.25, 2);
    std::size_t k = f.maps.front().target_dim();

    std::vector<std::size_t> settled;
    std::vector<double> values;
    for (std::size_t cell : lo.members()) {
        // Observations of this cell over the final window.
        std::vector<std::span<const double>> obs;
        for (std::size_t j = window_start; j < f.size(); ++j) {
            std::size_t slot = f.maps[j].slot_of(cell);
            if (slot != PartialMap::npos) obs.push_back(f.maps[j].value_at_slot(slot));
        }
        if (obs.empty()) continue;
        bool cauchy = true;
        for (std::size_t a = 0; a < obs.size() && cauchy; ++a) {
            for (std::size_t b = a + 1; b < obs.size(); ++b) {
                if (d.distance(obs[a], obs[b]) > cell_tol) {
                    cauchy = false;
                    break;
                }
            }
        }
        if (!cauchy) continue;
        settled.push_back(cell);
        values.insert(values.end(), obs.back().begin(), obs.back().end());
    }

    DomainMask recorded(f.grid, settled);
    if (mask_difference(hi, recorded).size() != 0) return std::nullopt;
    return PartialMap(std::move(recorded), k, std::move(values));
}

PartialMap lift_sentinel(const PartialMap& map, const DomainMask& cover,
                         const TargetMetric& d) {
    if (!d.is_euclidean()) throw input_error("sentinel lift requires a euclidean target");
    if (!same_layout(*map.grid(), *cover.grid())) throw input_error("lift grid mismatch");
    std::size_t k = map.target_dim();
    std::vector<double> values(cover.size() * (k + 1), 0.0);
    for (std::size_t slot = 0; slot < cover.size(); ++slot) {
        std::size_t cell = cover.members()[slot];
        std::size_t src = map.slot_of(cell);
        double* out = values.data() + slot * (k + 1);
        if (src == PartialMap::npos) {
            out[0] = 1.0;
        } else {
            std::span<const double> v = map.value_at_slot(src);
            std::copy(v.begin(), v.end(), out + 1);
        }
    }
    return PartialMap(cover, k + 1, std::move(values));
}

PartialMap decode_sentinel(const PartialMap& lifted) {
    if (lifted.target_dim() < 2) throw input_error("decode needs a lifted map");
    std::size_t k = lifted.target_dim() - 1;
    std::vector<std::size_t> cells;
    std::vector<double> values;
    for (std::size_t slot = 0; slot < lifted.mask().size(); ++slot) {
        std::span<const double> v = lifted.value_at_slot(slot);
        if (v[0] == 1.0) continue;
        cells.push_back(lifted.mask().members()[slot]);
        values.insert(values.end(), v.begin() + 1, v.end());
    }
    return PartialMap(DomainMask(lifted.grid(), std::move(cells)), k, std::move(values));
}

namespace {

constexpr int kLevelMin = 3;   // 2^-n must sit below the 1/4 acceptance radius
constexpr int kLevelMax = 48;  // below double-precision noise

double norm_diff(std::span<const double> a, std::span<const double> b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

/// Component c of the clamp of `v` onto the radius-1/2 ball around `anchor`:
/// unchanged within the ball, otherwise pulled radially onto it.
double clamp_component(std::span<const double> anchor, std::span<const double> v,
                       std::size_t c) {
    double n = norm_diff(anchor, v);
    if (n <= 0.5) return v[c];
    return anchor[c] + (v[c] - anchor[c]) / (2.0 * n);
}

double median_of(std::vector<double>& scratch) {
    std::size_t n = scratch.size();
    auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(scratch.begin(), mid, scratch.end());
    if (n % 2 == 1) return *mid;
    double hi = *mid;
    double lo = *std::max_element(scratch.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

PartialMap construct_limit(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                           const ConvergenceOptions& opts, ConstructDiagnostics* diag) {
    f.validate();
    ConvergenceReport cauchy_report = is_cauchy(f, e, d, opts);
    if (cauchy_report.verdict != Verdict::cauchy) {
        throw input_error("construct_limit requires a Cauchy family");
    }

    const std::size_t count = f.size();
    std::size_t k = f.maps.front().target_dim();
    std::vector<DomainMask> masks = f.masks();
    DomainMask cover = masks.front();
    for (std::size_t j = 1; j < masks.size(); ++j) cover = mask_union(cover, masks[j]);

    // Per dyadic level, every sample index whose tail oscillates below 2^-n
    // (and has at least one later sample) is a usable anchor. The primary one
    // is the largest such time; the later ones only extend coverage to cells
    // where the primary anchor still carries a passing excursion.
    std::vector<std::pair<int, std::size_t>> levels;  // (n, first valid anchor)
    for (int n = kLevelMin; n <= kLevelMax; ++n) {
        double bound = std::ldexp(1.0, -n);
        std::size_t first = PartialMap::npos;
        for (std::size_t i = 0; i + 1 < count; ++i) {
            if (cauchy_report.tail_oscillation[i] < bound) {
                first = i;
                break;
            }
        }
        if (first == PartialMap::npos) continue;
        levels.push_back({n, first});
    }
    if (diag != nullptr) *diag = ConstructDiagnostics{levels.size(), 0};

    // Lift every sample onto the cover once. Non-euclidean targets are lifted
    // through their coordinate representation.
    TargetMetric coord_metric = d.is_euclidean() ? d : TargetMetric::euclidean(k);
    std::vector<PartialMap> lifted;
    lifted.reserve(count);
    for (const PartialMap& m : f.maps) lifted.push_back(lift_sentinel(m, cover, coord_metric));

    std::size_t lifted_dim = k + 1;
    std::vector<double> glued(cover.size() * lifted_dim, 0.0);
    std::vector<signed char> assigned(cover.size(), 0);
    std::size_t conflicts = 0;

    std::vector<double> scratch;
    std::vector<double> limit(lifted_dim);
    // Inner-limit estimate for one cell against one anchor: componentwise
    // median of the clamped tail. Returns false when the estimate strays 1/4
    // or more from the anchor.
    auto level_limit = [&](std::size_t anchor_index, std::size_t slot) {
        std::span<const double> av = lifted[anchor_index].value_at_slot(slot);
        for (std::size_t c = 0; c < lifted_dim; ++c) {
            scratch.clear();
            for (std::size_t j = anchor_index + 1; j < count; ++j) {
                std::span<const double> tv = lifted[j].value_at_slot(slot);
                scratch.push_back(clamp_component(av, tv, c));
            }
            limit[c] = median_of(scratch);
        }
        return norm_diff(av, limit) < 0.25;
    };

    // Largest level first so the tightest bound wins the glue.
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        std::size_t first_anchor = it->second;
        for (std::size_t anchor = first_anchor; anchor + 1 < count; ++anchor) {
            bool any_open = false;
            for (std::size_t slot = 0; slot < cover.size(); ++slot) {
                if (assigned[slot]) {
                    // Flag disagreements between this level's primary anchor
                    // and what a larger level already glued.
                    if (anchor == first_anchor && level_limit(anchor, slot) &&
                        norm_diff({glued.data() + slot * lifted_dim, lifted_dim}, limit) > 0.25) {
                        ++conflicts;
                    }
                    continue;
                }
                any_open = true;
                if (!level_limit(anchor, slot)) continue;
                std::copy(limit.begin(), limit.end(),
                          glued.begin() + static_cast<std::ptrdiff_t>(slot * lifted_dim));
                assigned[slot] = 1;
            }
            if (!any_open) break;
        }
    }
    if (diag != nullptr) diag->glue_conflicts = conflicts;

    std::vector<std::size_t> kept_cells;
    std::vector<double> kept_values;
    for (std::size_t slot = 0; slot < cover.size(); ++slot) {
        if (!assigned[slot]) continue;
        kept_cells.push_back(cover.members()[slot]);
        kept_values.insert(kept_values.end(), glued.begin() + static_cast<std::ptrdiff_t>(slot * lifted_dim),
                           glued.begin() + static_cast<std::ptrdiff_t>((slot + 1) * lifted_dim));
    }
    PartialMap glued_map(DomainMask(f.grid, std::move(kept_cells)), lifted_dim,
                         std::move(kept_values));
    PartialMap decoded = decode_sentinel(glued_map);

    // The limit's domain never exceeds the set limsup of the sampled domains;
    // enforce that exactly.
    DomainMask limsup = mask_limsup(masks);
    if (!mask_subset(decoded.mask(), limsup)) {
        std::vector<std::size_t> cells;
        std::vector<double> values;
        for (std::size_t slot = 0; slot < decoded.mask().size(); ++slot) {
            std::size_t cell = decoded.mask().members()[slot];
            if (!limsup.contains(cell)) continue;
            cells.push_back(cell);
            std::span<const double> v = decoded.value_at_slot(slot);
            values.insert(values.end(), v.begin(), v.end());
        }
        decoded = PartialMap(DomainMask(f.grid, std::move(cells)), k, std::move(values));
    }
    return decoded;
}

namespace {

/// C1 cubic bump: 0 at and above T, 1 at and below mid.
double bump(double t, double freeze_time, double mid) {
    if (t >= freeze_time) return 0.0;
    if (t <= mid) return 1.0;
    double u = (freeze_time - t) / (freeze_time - mid);
    return u * u * (3.0 - 2.0 * u);
}

}  // namespace

FamilySample freeze_tail(const FamilySample& f, double freeze_time) {
    f.validate();
    double mid = 0.5 * (freeze_time + f.limit_param);
    FamilySample out;
    out.grid = f.grid;
    out.times = f.times;
    out.limit_param = f.limit_param;
    out.maps.reserve(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        double t = f.times[j];
        if (t >= freeze_time) {
            out.maps.push_back(f.maps[j]);
            continue;
        }
        double b = bump(t, freeze_time, mid);
        double reparam = (1.0 - b) * t + b * mid;
        // Nearest sampled time at or above the reparametrized one.
        std::size_t src = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f.times[i] >= reparam) src = i;
        }
        const PartialMap& source = f.maps[src];
        const DomainMask& own = f.maps[j].mask();
        std::vector<double> values;
        values.reserve(own.size() * f.maps[j].target_dim());
        for (std::size_t cell : own.members()) {
            std::size_t slot = source.slot_of(cell);
            if (slot == PartialMap::npos) {
                throw input_error("freeze_tail: domain nesting violated below the freeze point");
            }
            std::span<const double> v = source.value_at_slot(slot);
            values.insert(values.end(), v.begin(), v.end());
        }
        out.maps.push_back(PartialMap(own, f.maps[j].target_dim(), std::move(values)));
    }
    return out;
}

}  // namespace mapdist
