#include "mapdist/target_metric.hpp"

#include <cmath>
#include <numbers>

#include "mapdist/grid.hpp"

namespace mapdist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

double arc_distance(double a, double b) {
    double diff = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(diff, kTwoPi - diff);
}

}  // namespace

TargetMetric TargetMetric::euclidean(std::size_t k) {
    if (k == 0) throw input_error("euclidean target needs positive dimension");
    return TargetMetric(Kind::euclidean, k);
}

TargetMetric TargetMetric::circle_arc() { return TargetMetric(Kind::circle_arc, 1); }

TargetMetric TargetMetric::circle_chord() { return TargetMetric(Kind::circle_chord, 1); }

TargetMetric TargetMetric::product(std::vector<TargetMetric> components) {
    if (components.empty()) throw input_error("product target needs components");
    std::size_t dim = 0;
    for (const TargetMetric& c : components) dim += c.dimension();
    TargetMetric m(Kind::product, dim);
    m.components_ = std::move(components);
    return m;
}

double TargetMetric::distance(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != dimension_ || y.size() != dimension_) {
        throw input_error("target point dimension mismatch");
    }
    switch (kind_) {
        case Kind::euclidean: {
            double sq = 0.0;
            for (std::size_t i = 0; i < dimension_; ++i) {
                double d = x[i] - y[i];
                sq += d * d;
            }
            return std::sqrt(sq);
        }
        case Kind::circle_arc:
            return arc_distance(x[0], y[0]);
        case Kind::circle_chord:
            return 2.0 * std::sin(0.5 * arc_distance(x[0], y[0]));
        case Kind::product: {
            double sum = 0.0;
            std::size_t offset = 0;
            for (const TargetMetric& c : components_) {
                sum += c.distance(x.subspan(offset, c.dimension()),
                                  y.subspan(offset, c.dimension()));
                offset += c.dimension();
            }
            return sum;
        }
    }
    return 0.0;
}

std::string TargetMetric::spec_string() const {
    switch (kind_) {
        case Kind::euclidean:
            return "euclidean:" + std::to_string(dimension_);
        case Kind::circle_arc:
            return "circle:arc";
        case Kind::circle_chord:
            return "circle:chord";
        case Kind::product: {
            std::string s = "product:";
            for (std::size_t i = 0; i < components_.size(); ++i) {
                if (i > 0) s += ',';
                s += components_[i].spec_string();
            }
            return s;
        }
    }
    return {};
}

TargetMetric TargetMetric::parse(std::string_view spec) {
    if (spec.rfind("euclidean:", 0) == 0) {
        std::string_view num = spec.substr(10);
        std::size_t k = 0;
        for (char c : num) {
            if (c < '0' || c > '9') throw input_error("bad euclidean dimension in target spec");
            k = k * 10 + static_cast<std::size_t>(c - '0');
        }
        if (num.empty()) throw input_error("bad euclidean dimension in target spec");
        return euclidean(k);
    }
    if (spec == "circle:arc") return circle_arc();
    if (spec == "circle:chord") return circle_chord();
    if (spec.rfind("product:", 0) == 0) {
        std::string_view rest = spec.substr(8);
        std::vector<TargetMetric> comps;
        // Components are simple specs, split on commas. `euclidean:<k>` and the
        // circle variants contain no commas so the split is unambiguous.
        while (!rest.empty()) {
            std::size_t comma = rest.find(',');
            std::string_view piece = rest.substr(0, comma);
            comps.push_back(parse(piece));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return product(std::move(comps));
    }
    throw input_error("unknown target spec: " + std::string(spec));
}

}  // namespace mapdist
