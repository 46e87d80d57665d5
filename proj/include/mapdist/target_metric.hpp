#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mapdist {

/// Distance oracle on the target manifold. The oracle set is closed: Euclidean
/// R^k, the circle with arc or chord distance (both on angle coordinates), and
/// finite products combined by summing component distances. Every built-in
/// target is complete as a metric space.
class TargetMetric {
public:
    enum class Kind { euclidean, circle_arc, circle_chord, product };

    static TargetMetric euclidean(std::size_t k);
    static TargetMetric circle_arc();
    static TargetMetric circle_chord();
    static TargetMetric product(std::vector<TargetMetric> components);

    Kind kind() const { return kind_; }
    std::size_t dimension() const { return dimension_; }
    bool is_euclidean() const { return kind_ == Kind::euclidean; }

    double distance(std::span<const double> x, std::span<const double> y) const;

    /// Spec string as accepted by parse(); used in reports.
    std::string spec_string() const;

    /// Parses `euclidean:<k> | circle:arc | circle:chord | product:<spec,...>`.
    static TargetMetric parse(std::string_view spec);

private:
    TargetMetric(Kind kind, std::size_t dimension) : kind_(kind), dimension_(dimension) {}

    Kind kind_;
    std::size_t dimension_;
    std::vector<TargetMetric> components_;
};

}  // namespace mapdist
