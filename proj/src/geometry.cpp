#include "vesselforge/geometry.hpp"

#include <array>
#include <cmath>
#include <string>

#include "vesselforge/error.hpp"

namespace vesselforge {

namespace {

constexpr int kMaxEndpointRedraws = 16;
constexpr double kDegenerateChord = 1e-9;
constexpr double kSamplesPerPixel = 2.0;

using BinomialTable = std::array<std::array<double, kMaxControlPoints>, kMaxControlPoints>;

// Pascal's triangle in double; all entries for n <= 19 are exact integers.
const BinomialTable& binomials() {
    static const BinomialTable table = [] {
        BinomialTable t{};
        for (int n = 0; n < kMaxControlPoints; ++n) {
            t[n][0] = 1.0;
            for (int i = 1; i <= n; ++i) t[n][i] = t[n - 1][i - 1] + (i < n ? t[n - 1][i] : 0.0);
        }
        return t;
    }();
    return table;
}

}  // namespace

BezierCurve::BezierCurve(std::vector<Point2> control_points) : points_(std::move(control_points)) {
    if (points_.size() < 2) {
        throw DomainError("Bezier curve needs at least 2 control points, got " +
                          std::to_string(points_.size()));
    }
    for (const auto& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw DomainError("Bezier control point is not finite");
        }
    }
}

double BezierCurve::control_polygon_length() const {
    double length = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        length += std::hypot(points_[i].x - points_[i - 1].x, points_[i].y - points_[i - 1].y);
    }
    return length;
}

Point2 evaluate(const BezierCurve& curve, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("Bezier parameter t must lie in [0, 1], got " + std::to_string(t));
    }
    const auto& pts = curve.control_points();
    const int n = curve.order();
    if (n + 1 > kMaxControlPoints) {
        throw DomainError("Bezier curve exceeds " + std::to_string(kMaxControlPoints) +
                          " control points");
    }
    // Endpoints are returned bit-exactly.
    if (t == 0.0) return pts.front();
    if (t == 1.0) return pts.back();

    std::array<double, kMaxControlPoints> t_pow{};
    std::array<double, kMaxControlPoints> s_pow{};
    const double s = 1.0 - t;
    t_pow[0] = 1.0;
    s_pow[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        t_pow[i] = t_pow[i - 1] * t;
        s_pow[i] = s_pow[i - 1] * s;
    }
    const auto& row = binomials()[n];
    Point2 out;
    for (int i = 0; i <= n; ++i) {
        const double w = row[i] * s_pow[n - i] * t_pow[i];
        out.x += w * pts[i].x;
        out.y += w * pts[i].y;
    }
    return out;
}

BezierCurve sample_curve(const CurveParams& params, RandomStream& rng) {
    if (params.order_plus_one < 2 || params.order_plus_one > kMaxControlPoints) {
        throw DomainError("order_plus_one must lie in [2, " + std::to_string(kMaxControlPoints) +
                          "], got " + std::to_string(params.order_plus_one));
    }
    if (!(params.displacement_scale_delta >= 0.0)) {
        throw DomainError("displacement scale must be >= 0");
    }
    if (params.image_width < 1 || params.image_height < 1) {
        throw DomainError("image dimensions must be >= 1");
    }
    const double w = params.image_width;
    const double h = params.image_height;

    const Point2 first{rng.uniform(0.0, w), rng.uniform(0.0, h)};
    Point2 last{rng.uniform(0.0, w), rng.uniform(0.0, h)};
    int redraws = 0;
    while (std::hypot(last.x - first.x, last.y - first.y) <= kDegenerateChord) {
        if (++redraws > kMaxEndpointRedraws) {
            throw DomainError("could not sample a non-degenerate curve chord");
        }
        last = {rng.uniform(0.0, w), rng.uniform(0.0, h)};
    }

    const int n = params.order_plus_one - 1;
    const double dx = last.x - first.x;
    const double dy = last.y - first.y;
    const double len = std::hypot(dx, dy);
    const Point2 normal{-dy / len, dx / len};
    const double delta = params.displacement_scale_delta;

    std::vector<Point2> points;
    points.reserve(n + 1);
    points.push_back(first);
    for (int k = 1; k < n; ++k) {
        const double f = static_cast<double>(k) / n;
        const double d = rng.uniform(-delta, delta);
        points.push_back({first.x + f * dx + d * normal.x, first.y + f * dy + d * normal.y});
    }
    points.push_back(last);
    return BezierCurve(std::move(points));
}

std::vector<Point2> discretize(const BezierCurve& curve) {
    const double m_real = std::ceil(kSamplesPerPixel * curve.control_polygon_length());
    const std::size_t m = m_real < 2.0 ? 2 : static_cast<std::size_t>(m_real);
    std::vector<Point2> samples;
    samples.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double t = k + 1 == m ? 1.0 : static_cast<double>(k) / static_cast<double>(m - 1);
        samples.push_back(evaluate(curve, t));
    }
    return samples;
}

}  // namespace vesselforge
