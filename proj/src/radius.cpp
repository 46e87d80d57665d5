#include "mapdist/radius.hpp"

#include <algorithm>
#include <cmath>

namespace mapdist {

std::string RadiusReport::verdict(double removable_threshold) const {
    if (upper_finite() && upper <= removable_threshold) return "removable";
    if (lower > removable_threshold) return "singular";
    return "undetermined";
}

double osc_lower_bound(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                       double window_fraction, OscWitness* witness) {
    f.validate();
    std::size_t count = f.size();
    std::size_t w = static_cast<std::size_t>(
        std::ceil(window_fraction * static_cast<double>(count)));
    w = std::clamp<std::size_t>(std::max<std::size_t>(w, 2), 2, count);
    std::size_t start = count - w;

    double best = 0.0;
    OscWitness arg{start, start};
    for (std::size_t i = start; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            double v = dist_exhaustion(e, f.maps[i], f.maps[j], d).value;
            if (v > best) {
                best = v;
                arg = OscWitness{i, j};
            }
        }
    }
    if (witness != nullptr) *witness = arg;
    return 0.5 * best;
}

double perturb_upper_bound(const FamilySample& f, const FamilySample& g, const Exhaustion& e,
                           const TargetMetric& d, const ConvergenceOptions& opts) {
    f.validate();
    g.validate();
    if (f.size() != g.size()) throw input_error("perturbation must share the family's times");
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (f.times[j] != g.times[j]) {
            throw input_error("perturbation must share the family's times");
        }
        if (f.maps[j].mask().members() != g.maps[j].mask().members()) {
            throw input_error("perturbation must share the family's domains");
        }
    }
    if (is_cauchy(g, e, d, opts).verdict != Verdict::cauchy) {
        throw input_error("perturbation is not Cauchy; not a valid certificate");
    }
    if (!ae_limit(g, d, opts.threshold).has_value()) {
        throw input_error("perturbation has no almost-everywhere limit; not a valid certificate");
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        worst = std::max(worst, dist_exhaustion(e, f.maps[j], g.maps[j], d).value);
    }
    return worst;
}

RadiusReport radius_report(const FamilySample& f, const Exhaustion& e, const TargetMetric& d,
                           const FamilySample* perturbation, const RadiusOptions& opts) {
    RadiusReport report;
    report.metric_desc = d.spec_string();
    report.exhaustion_desc = e.description();

    OscWitness witness;
    report.lower = osc_lower_bound(f, e, d, opts.window_fraction, &witness);
    report.witness_first = witness.first;
    report.witness_second = witness.second;
    report.witness_time_first = f.times[witness.first];
    report.witness_time_second = f.times[witness.second];

    ConvergenceOptions conv = opts.convergence;
    conv.threshold = std::max(conv.threshold, opts.cell_tol);

    if (perturbation != nullptr) {
        report.upper = perturb_upper_bound(f, *perturbation, e, d, conv);
        report.certificate = "supplied";
        return report;
    }

    // Self-certification: freeze the tail at a ladder of successively later
    // sampled times; every variant that validates is a certificate and
    // tightens the bound.
    std::size_t count = f.size();
    std::vector<std::size_t> candidates{1, count / 4, count / 2, (3 * count) / 4, count - 2};
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (std::size_t i : candidates) {
        if (i + 1 >= count) continue;
        double freeze_time = f.times[i];
        try {
            FamilySample frozen = freeze_tail(f, freeze_time);
            double u = perturb_upper_bound(f, frozen, e, d, conv);
            if (u < report.upper) {
                report.upper = u;
                report.certificate = "freeze_tail(T=" + std::to_string(freeze_time) + ")";
            }
        } catch (const input_error&) {
            // nesting violation or an unconverged freeze; try a later time
        }
    }
    return report;
}

}  // namespace mapdist
