#include <doctest.h>

#include <numbers>
#include <random>

#include "mapdist/target_metric.hpp"
#include "mapdist/grid.hpp"
#include "support.hpp"

using namespace mapdist;
using mapdist_test::make_rng;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> random_point(std::size_t dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    std::vector<double> p(dim);
    for (double& x : p) x = u(rng);
    return p;
}

}  // namespace

TEST_CASE("euclidean distance") {
    TargetMetric d = TargetMetric::euclidean(2);
    std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(d.distance(a, b) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d.distance(a, a) == 0.0);
}

TEST_CASE("circle arc wraps around") {
    TargetMetric arc = TargetMetric::circle_arc();
    std::vector<double> a{0.1}, b{kTwoPi - 0.1};
    CHECK(arc.distance(a, b) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(arc.distance(b, b) == 0.0);
}

TEST_CASE("chord stays under arc and matches its closed form") {
    TargetMetric arc = TargetMetric::circle_arc();
    TargetMetric chord = TargetMetric::circle_chord();
    auto rng = make_rng(11);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> a{angle(rng)}, b{angle(rng)};
        double da = arc.distance(a, b);
        double dc = chord.distance(a, b);
        CHECK(dc <= da + 1e-12);
        CHECK(dc == doctest::Approx(2.0 * std::sin(0.5 * da)).epsilon(1e-12));
    }
}

TEST_CASE("metric axioms on random triples") {
    auto rng = make_rng(12);
    std::vector<TargetMetric> metrics;
    metrics.push_back(TargetMetric::euclidean(3));
    metrics.push_back(TargetMetric::circle_arc());
    metrics.push_back(TargetMetric::circle_chord());
    metrics.push_back(TargetMetric::product(
        {TargetMetric::euclidean(2), TargetMetric::circle_arc()}));
    for (const TargetMetric& d : metrics) {
        for (int trial = 0; trial < 500; ++trial) {
            auto x = random_point(d.dimension(), rng);
            auto y = random_point(d.dimension(), rng);
            auto z = random_point(d.dimension(), rng);
            double xy = d.distance(x, y);
            double yx = d.distance(y, x);
            double xz = d.distance(x, z);
            double yz = d.distance(y, z);
            CHECK(xy >= 0.0);
            CHECK(xy == doctest::Approx(yx).epsilon(1e-12));
            CHECK(xz <= xy + yz + 1e-12);
            CHECK(d.distance(x, x) == 0.0);
        }
    }
}

TEST_CASE("spec parsing") {
    CHECK(TargetMetric::parse("euclidean:3").dimension() == 3);
    CHECK(TargetMetric::parse("circle:arc").kind() == TargetMetric::Kind::circle_arc);
    CHECK(TargetMetric::parse("circle:chord").kind() == TargetMetric::Kind::circle_chord);
    TargetMetric prod = TargetMetric::parse("product:euclidean:2,circle:chord");
    CHECK(prod.dimension() == 3);
    CHECK(prod.spec_string() == "product:euclidean:2,circle:chord");
    CHECK(TargetMetric::parse("euclidean:1").spec_string() == "euclidean:1");

    CHECK_THROWS_AS(TargetMetric::parse("euclidean:0"), input_error);
    CHECK_THROWS_AS(TargetMetric::parse("euclidean:x"), input_error);
    CHECK_THROWS_AS(TargetMetric::parse("circle:geodesic"), input_error);
    CHECK_THROWS_AS(TargetMetric::parse("sphere:2"), input_error);
}

TEST_CASE("dimension mismatch is an error") {
    TargetMetric d = TargetMetric::euclidean(2);
    std::vector<double> a{1.0, 2.0}, b{1.0};
    CHECK_THROWS_AS(d.distance(a, b), input_error);
}
