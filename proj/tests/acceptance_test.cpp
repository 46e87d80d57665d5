// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Tolerances are fixed here, not tuned at runtime.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mapdist/convergence.hpp"
#include "mapdist/examples.hpp"
#include "mapdist/map_metric.hpp"
#include "mapdist/radius.hpp"
#include "support.hpp"

using namespace mapdist;
using mapdist_test::make_contracting_family;
using mapdist_test::make_rng;
using mapdist_test::random_map;
using mapdist_test::random_mask;

namespace {

const TargetMetric kLine = TargetMetric::euclidean(1);

struct Criterion {
    int id;
    const char* title;
    bool ok = true;

    void expect(bool cond) {
        ok = ok && cond;
        CHECK(cond);
    }
    ~Criterion() {
        std::printf("%s criterion %2d: %s\n", ok ? "[PASS]" : "[FAIL]", id, title);
        std::fflush(stdout);
    }
};

PartialMap zero_map(const GridPtr& g) {
    return PartialMap(DomainMask::full(g), 1, std::vector<double>(g->cell_count(), 0.0));
}

Exhaustion prefix_exhaustion(const GridPtr& g, const std::vector<std::size_t>& counts) {
    std::vector<DomainMask> levels;
    for (std::size_t count : counts) {
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < count; ++c) cells.push_back(c);
        levels.push_back(DomainMask(g, cells));
    }
    return Exhaustion::nested(std::move(levels));
}

Exhaustion centered_boxes(const GridPtr& g, std::size_t levels) {
    std::vector<DomainMask> masks;
    for (std::size_t n = 1; n <= levels; ++n) {
        double frac = static_cast<double>(n) / static_cast<double>(levels);
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < g->cell_count(); ++c) {
            double x = g->cell_midpoint(c)[0];
            double center = 0.5 * (g->axes()[0].lo + g->axes()[0].hi);
            double half = 0.5 * (g->axes()[0].hi - g->axes()[0].lo) * frac;
            if (std::abs(x - center) < half) cells.push_back(c);
        }
        masks.push_back(DomainMask(g, std::move(cells)));
    }
    return Exhaustion::nested(std::move(masks), "boxes:" + std::to_string(levels));
}

}  // namespace

TEST_CASE("criterion 1: alpha sandwich") {
    Criterion crit{1, "alpha sandwich D^a <= D^b <= (b/a) D^a, 1000 pairs, <=1e-12 rel"};
    auto rng = make_rng(101);
    GridPtr g = make_interval_grid(0.0, 1.0, 200);
    DomainMask window = DomainMask::full(g);
    std::uniform_real_distribution<double> pick(1e-6, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        PartialMap a = random_map(g, 1, rng);
        PartialMap b = random_map(g, 1, rng);
        double alpha = pick(rng);
        double beta = pick(rng);
        if (alpha > beta) std::swap(alpha, beta);
        if (alpha == beta) continue;
        double da = dist_on(window, a, b, kLine, alpha);
        double db = dist_on(window, a, b, kLine, beta);
        crit.expect(da <= db * (1.0 + 1e-12));
        crit.expect(db <= (beta / alpha) * da * (1.0 + 1e-12));
    }
}

TEST_CASE("criterion 2: metric axioms and zero-distance characterization") {
    Criterion crit{2, "penalty/distance triangle + symmetry, 1000 triples; D=0 iff equivalent"};
    auto rng = make_rng(102);
    GridPtr g = make_interval_grid(0.0, 1.0, 200);
    Exhaustion e = prefix_exhaustion(g, {50, 100, 200});
    for (int trial = 0; trial < 1000; ++trial) {
        PartialMap a = random_map(g, 1, rng);
        PartialMap b = random_map(g, 1, rng);
        PartialMap c = random_map(g, 1, rng);
        PenaltyField ab = penalty_field(a, b, kLine, 1.0);
        PenaltyField ac = penalty_field(a, c, kLine, 1.0);
        PenaltyField cb = penalty_field(c, b, kLine, 1.0);
        bool pointwise = true;
        for (std::size_t cell = 0; cell < g->cell_count(); ++cell) {
            pointwise = pointwise && ab.at(cell) <= ac.at(cell) + cb.at(cell) + 1e-12;
        }
        crit.expect(pointwise);
        double dab = dist_exhaustion(e, a, b, kLine).value;
        double dba = dist_exhaustion(e, b, a, kLine).value;
        double dac = dist_exhaustion(e, a, c, kLine).value;
        double dcb = dist_exhaustion(e, c, b, kLine).value;
        crit.expect(dab >= 0.0);
        crit.expect(std::abs(dab - dba) <= 1e-12 * std::max(1.0, dab));
        crit.expect(dab <= dac + dcb + 1e-12);

        bool eq = equivalent(a, b, kLine, 0.0);
        crit.expect(eq == (dab == 0.0));
    }
    // Exact zero-distance cases: identity, a nudged value, a nudged mask.
    PartialMap a = random_map(g, 1, rng, 0.8);
    crit.expect(equivalent(a, a, kLine, 0.0));
    crit.expect(dist_exhaustion(e, a, a, kLine).value == 0.0);
    std::vector<double> nudged = a.values();
    nudged[0] += 1e-8;
    PartialMap b(a.mask(), 1, nudged);
    crit.expect(!equivalent(a, b, kLine, 0.0));
    crit.expect(dist_exhaustion(e, a, b, kLine).value > 0.0);
    std::vector<std::size_t> cells(a.mask().members().begin(), a.mask().members().end() - 1);
    std::vector<double> values(a.values().begin(), a.values().end() - 1);
    PartialMap c(DomainMask(g, cells), 1, values);
    crit.expect(!equivalent(a, c, kLine, 0.0));
    crit.expect(dist_exhaustion(e, a, c, kLine).value > 0.0);
}

TEST_CASE("criterion 3: wave example distances and L1 norms") {
    Criterion crit{3, "wave on 240 cells: dist to zero = 1/m (<=1e-12), L1 norm = 1"};
    FamilySample wave = gen_wave({2, 4, 8, 16}, 240);
    PartialMap zero = zero_map(wave.grid);
    DomainMask full = DomainMask::full(wave.grid);
    std::size_t j = 0;
    for (unsigned m : {2u, 4u, 8u, 16u}) {
        for (unsigned k = 0; k < m; ++k, ++j) {
            double dist = dist_on(full, wave.maps[j], zero, kLine);
            double expect = 1.0 / static_cast<double>(m);
            crit.expect(std::abs(dist - expect) <= 1e-12 * expect);
            double l1 = lp_norm(wave.maps[j], 1.0);
            crit.expect(std::abs(l1 - 1.0) <= 1e-12);
        }
    }
    crit.expect(j == wave.size());
}

TEST_CASE("criterion 4: strip example per-level and exhaustion distances") {
    Criterion crit{4, "strip t=0.5, K=30: dist_on(S_n)=n for n<=5; series = 0.5(1-2^-30)"};
    StripExample strip = gen_strip({0.5, 0.25}, 30, 10);
    TargetMetric plane = TargetMetric::euclidean(2);
    const PartialMap& at_half = strip.family.maps[0];
    REQUIRE(strip.family.times[0] == 0.5);
    for (std::size_t n = 1; n <= 5; ++n) {
        double level = dist_on(strip.exhaustion.levels()[n - 1], at_half, strip.limit, plane);
        crit.expect(std::abs(level - static_cast<double>(n)) <=
                    1e-12 * static_cast<double>(n));
    }
    ExhaustionDistance r = dist_exhaustion(strip.exhaustion, at_half, strip.limit, plane);
    double expect = 0.5 * (1.0 - std::ldexp(1.0, -30));
    crit.expect(std::abs(r.value - expect) <= 1e-9);
    crit.expect(r.tail_bound == std::ldexp(1.0, -30));
}

TEST_CASE("criterion 5: radius bracket for the oscillating family") {
    Criterion crit{5, "oscillation q in {0.5,1,2}, 600 cells, depth 20: bracket within 0.02"};
    for (double q : {0.5, 1.0, 2.0}) {
        FamilySample osc = gen_oscillation(q, 20, 600);
        Exhaustion e = Exhaustion::full_domain(osc.grid);

        double lower = osc_lower_bound(osc, e, kLine, 0.25);
        crit.expect(lower >= q - 0.02);

        FamilySample line;
        line.grid = osc.grid;
        line.times = osc.times;
        std::vector<double> values(osc.grid->cell_count());
        for (std::size_t c = 0; c < osc.grid->cell_count(); ++c) {
            values[c] = osc.grid->cell_midpoint(c)[0] / (9.0 * q);
        }
        for (std::size_t j = 0; j < osc.size(); ++j) {
            line.maps.push_back(PartialMap(DomainMask::full(osc.grid), 1, values));
        }
        double upper = perturb_upper_bound(osc, line, e, kLine);
        crit.expect(upper <= q + 0.02);
        crit.expect(lower <= upper + 2e-2);
    }
}

TEST_CASE("criterion 6: sentinel lift is an isometry") {
    Criterion crit{6, "200 random pairs with differing masks: lifted dist_on matches, <=1e-12"};
    auto rng = make_rng(106);
    GridPtr g = make_interval_grid(0.0, 1.0, 60);
    TargetMetric plane = TargetMetric::euclidean(2);
    TargetMetric lifted_metric = TargetMetric::euclidean(3);
    DomainMask cover = DomainMask::full(g);
    for (int trial = 0; trial < 200; ++trial) {
        PartialMap a = random_map(g, 2, rng, 0.5);
        PartialMap b = random_map(g, 2, rng, 0.7);
        DomainMask window = random_mask(g, rng, 0.8);
        double plain = dist_on(window, a, b, plane);
        double lifted = dist_on(window, lift_sentinel(a, cover, plane),
                                lift_sentinel(b, cover, plane), lifted_metric);
        crit.expect(std::abs(plain - lifted) <= 1e-12 * std::max(1.0, plain));
    }
}

TEST_CASE("criterion 7: constructive completeness") {
    Criterion crit{7, "construct_limit on 50 Cauchy families (<=1e-3) and the wave (exact zero)"};
    auto rng = make_rng(107);
    ConvergenceOptions opts;
    opts.threshold = 1e-3;
    for (int trial = 0; trial < 50; ++trial) {
        auto synth = make_contracting_family(rng, 100, 1, 16, false);
        Exhaustion e = centered_boxes(synth.family.grid, 6);
        PartialMap limit = construct_limit(synth.family, e, kLine, opts);
        double dist = dist_exhaustion(e, synth.family.maps.back(), limit, kLine).value;
        crit.expect(dist <= 1e-3);
        crit.expect(converges_to(synth.family, limit, e, kLine, opts).verdict ==
                    Verdict::converges);
    }

    FamilySample wave = gen_wave({2, 4, 8, 16, 32, 64}, 192);
    Exhaustion we = Exhaustion::full_domain(wave.grid);
    ConvergenceOptions wopts;
    wopts.threshold = 0.05;
    PartialMap wave_limit = construct_limit(wave, we, kLine, wopts);
    crit.expect(equivalent(wave_limit, zero_map(wave.grid), kLine, 1e-6));
}

TEST_CASE("criterion 8: a.e. limits converge in distance") {
    Criterion crit{8, "30 a.e.-convergent families: ae_limit implies converges_to"};
    auto rng = make_rng(108);
    ConvergenceOptions opts;
    opts.threshold = 0.02;
    double cell_tol = 0.02;
    std::size_t found = 0;

    auto check_family = [&](const FamilySample& f, const Exhaustion& e) {
        auto limit = ae_limit(f, kLine, cell_tol);
        crit.expect(limit.has_value());
        if (!limit.has_value()) return;
        ++found;
        crit.expect(converges_to(f, *limit, e, kLine, opts).verdict == Verdict::converges);
    };

    // Growing domains (0, 1-t) with x^p values.
    std::vector<double> times;
    for (int j = 2; j <= 41; ++j) times.push_back(1.0 / j);
    for (double p : {1.0, 2.0, 3.0}) {
        for (std::size_t cells : {120u, 200u}) {
            FamilySample f = gen_shrinking(p, times, cells);
            check_family(f, Exhaustion::full_domain(f.grid));
        }
    }
    // Fixed-mask families converging pointwise: g(x) (1 + c t).
    GridPtr g = make_interval_grid(0.0, 1.0, 150);
    for (int variant = 0; variant < 14; ++variant) {
        DomainMask mask = random_mask(g, rng, 0.8);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> base(mask.size());
        for (double& v : base) v = u(rng);
        double c = 0.1 + 0.05 * variant;
        FamilySample f;
        f.grid = g;
        for (int j = 2; j <= 41; ++j) {
            double t = 1.0 / j;
            std::vector<double> values(mask.size());
            for (std::size_t s = 0; s < mask.size(); ++s) values[s] = base[s] * (1.0 + c * t);
            f.times.push_back(t);
            f.maps.push_back(PartialMap(mask, 1, std::move(values)));
        }
        check_family(f, Exhaustion::full_domain(g));
    }
    // Constant families and nested contracting families.
    for (int variant = 0; variant < 5; ++variant) {
        FamilySample f = gen_constant(random_map(g, 1, rng), {1.0, 0.5, 0.25, 0.125});
        check_family(f, Exhaustion::full_domain(g));
    }
    for (int variant = 0; variant < 5; ++variant) {
        auto synth = make_contracting_family(rng, 100, 1, 16, true);
        check_family(synth.family, Exhaustion::full_domain(synth.family.grid));
    }
    crit.expect(found == 30);
}

TEST_CASE("criterion 9: tail freezing realizes the removable-singularity converse") {
    Criterion crit{9, "20 nested convergent families: freeze certificate <= 2x tail osc, upper < 1e-3"};
    auto rng = make_rng(109);
    ConvergenceOptions conv;
    conv.threshold = 1e-3;
    for (int trial = 0; trial < 20; ++trial) {
        auto synth = make_contracting_family(rng, 100, 1, 16, true);
        const FamilySample& f = synth.family;
        Exhaustion e = Exhaustion::full_domain(f.grid);
        ConvergenceReport base = is_cauchy(f, e, kLine, conv);
        crit.expect(base.verdict == Verdict::cauchy);

        std::size_t mid_index = f.size() / 2;
        double freeze_time = f.times[mid_index];
        FamilySample frozen = freeze_tail(f, freeze_time);
        double upper = perturb_upper_bound(f, frozen, e, kLine, conv);
        double osc_at_t = base.tail_oscillation[mid_index];
        crit.expect(upper <= 2.0 * osc_at_t + 1e-12);

        RadiusOptions ropts;
        ropts.convergence = conv;
        RadiusReport report = radius_report(f, e, kLine, nullptr, ropts);
        crit.expect(report.upper_finite());
        crit.expect(report.upper <= 1e-3);
    }
}

TEST_CASE("criterion 10: verdicts agree across target metrics and exhaustions") {
    Criterion crit{10, "family suite: circle arc vs chord and two exhaustions, 0 disagreements"};

    struct Suite {
        FamilySample family;
        double threshold;
    };
    std::vector<Suite> suite;

    suite.push_back({gen_wave({2, 4, 8, 16, 32}, 160), 0.25});
    suite.push_back({gen_oscillation(0.3, 6, 90), 0.25});
    {
        std::vector<double> times;
        for (int j = 2; j <= 41; ++j) times.push_back(1.0 / j);
        suite.push_back({gen_shrinking(2.0, times, 120), 0.05});
    }
    {
        // Rotating circle-valued family converging to theta(x) = 2 pi x.
        GridPtr g = make_interval_grid(0.0, 1.0, 100);
        FamilySample f;
        f.grid = g;
        for (int j = 1; j <= 24; ++j) {
            double t = 1.0 / j;
            std::vector<double> values(g->cell_count());
            for (std::size_t c = 0; c < g->cell_count(); ++c) {
                values[c] = 2.0 * std::numbers::pi * g->cell_midpoint(c)[0] + 0.2 * t;
            }
            f.times.push_back(t);
            f.maps.push_back(PartialMap(DomainMask::full(g), 1, std::move(values)));
        }
        suite.push_back({std::move(f), 0.05});
    }
    {
        // Swinging circle-valued family with no limit.
        GridPtr g = make_interval_grid(0.0, 1.0, 100);
        FamilySample f;
        f.grid = g;
        for (int j = 1; j <= 24; ++j) {
            double t = 1.0 / j;
            std::vector<double> values(g->cell_count());
            double swing = 0.8 * std::sin(1.0 / t);
            for (std::size_t c = 0; c < g->cell_count(); ++c) {
                values[c] = 2.0 * std::numbers::pi * g->cell_midpoint(c)[0] + swing;
            }
            f.times.push_back(t);
            f.maps.push_back(PartialMap(DomainMask::full(g), 1, std::move(values)));
        }
        suite.push_back({std::move(f), 0.05});
    }

    std::size_t disagreements = 0;
    for (const Suite& s : suite) {
        Exhaustion coarse = centered_boxes(s.family.grid, 4);
        Exhaustion fine = centered_boxes(s.family.grid, 7);
        ConvergenceOptions opts;
        opts.threshold = s.threshold;

        std::vector<Verdict> verdicts;
        std::vector<Verdict> to_last;
        for (const TargetMetric& d : {TargetMetric::circle_arc(), TargetMetric::circle_chord()}) {
            for (const Exhaustion* e : {&coarse, &fine}) {
                verdicts.push_back(is_cauchy(s.family, *e, d, opts).verdict);
                // Candidate limit: the deepest sample. Convergent families
                // accept it, divergent ones reject it, under every config.
                to_last.push_back(
                    converges_to(s.family, s.family.maps.back(), *e, d, opts).verdict);
            }
        }
        for (std::size_t i = 1; i < verdicts.size(); ++i) {
            if (verdicts[i] != verdicts.front()) ++disagreements;
            if (to_last[i] != to_last.front()) ++disagreements;
        }
    }
    crit.expect(disagreements == 0);
}
