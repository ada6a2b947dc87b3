#pragma once

#include <span>
#include <vector>

#include "vesselforge/random.hpp"

namespace vesselforge {

struct Point2 {
    double x{};
    double y{};

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Bezier curve of order n = control_points().size() - 1, n >= 1.
class BezierCurve {
public:
    /// Throws DomainError for fewer than two points or non-finite coordinates.
    explicit BezierCurve(std::vector<Point2> control_points);

    const std::vector<Point2>& control_points() const { return points_; }
    int order() const { return static_cast<int>(points_.size()) - 1; }

    /// Length of the polyline through the control points.
    double control_polygon_length() const;

private:
    std::vector<Point2> points_;
};

/// Sampling configuration for one curve.
struct CurveParams {
    int order_plus_one = 2;
    double displacement_scale_delta = 0.0;
    int image_width = 1;
    int image_height = 1;
};

/// Maximum supported number of control points (Bernstein weights stay exact).
inline constexpr int kMaxControlPoints = 20;

/// Bernstein-form evaluation, sum_i C(n,i) (1-t)^(n-i) t^i p_i.
/// Throws DomainError when t is outside [0, 1].
Point2 evaluate(const BezierCurve& curve, double t);

/// Samples a random curve.
///
/// Draw order: p_0.x, p_0.y, p_n.x, p_n.y (p_n redrawn while it coincides
/// with p_0, at most 16 times), then one displacement per intermediate point,
/// in order. Intermediate point k (1 <= k < n) starts at chord fraction k/n and
/// is moved along the +90 degree rotation of the unit chord vector by a
/// displacement uniform in [-delta, delta]. Points are not clipped to the image.
BezierCurve sample_curve(const CurveParams& params, RandomStream& rng);

/// Uniform-t samples c(k / (m-1)), k = 0..m-1, with
/// m = max(2, ceil(2 * control polygon length)).
std::vector<Point2> discretize(const BezierCurve& curve);

}  // namespace vesselforge
