// Test-only helpers and independent oracles. Nothing here calls into the
// implementation paths it is used to check.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "vesselforge/geometry.hpp"
#include "vesselforge/image.hpp"
#include "vesselforge/metrics.hpp"

namespace vesselforge::testing {

class TempDir {
public:
    explicit TempDir(const std::string& tag = "vf") {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

private:
    std::filesystem::path path_;
};

/// Repeated linear interpolation of the control polygon.
inline Point2 de_casteljau(std::vector<Point2> pts, double t) {
    for (std::size_t level = pts.size() - 1; level > 0; --level) {
        for (std::size_t i = 0; i < level; ++i) {
            pts[i] = {(1.0 - t) * pts[i].x + t * pts[i + 1].x, (1.0 - t) * pts[i].y + t * pts[i + 1].y};
        }
    }
    return pts[0];
}

/// Distance from q to the convex hull of pts (0 when inside).
inline double distance_to_hull(std::vector<Point2> pts, Point2 q) {
    std::sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    auto cross = [](Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
    std::vector<Point2> hull;
    for (int pass = 0; pass < 2; ++pass) {
        const std::size_t start = hull.size();
        for (const auto& p : pts) {
            while (hull.size() >= start + 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
            hull.push_back(p);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
    }
    auto seg_dist = [](Point2 a, Point2 b, Point2 p) {
        const double dx = b.x - a.x, dy = b.y - a.y;
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::hypot(a.x + t * dx - p.x, a.y + t * dy - p.y);
    };
    if (hull.empty()) return std::hypot(pts[0].x - q.x, pts[0].y - q.y);
    if (hull.size() < 3) return seg_dist(hull.front(), hull.back(), q);
    bool inside = true;
    double best = 1e300;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2 a = hull[i];
        const Point2 b = hull[(i + 1) % hull.size()];
        if (cross(a, b, q) < 0) inside = false;
        best = std::min(best, seg_dist(a, b, q));
    }
    return inside ? 0.0 : best;
}

/// Pixel q is set iff some skeleton pixel p has |q - p|^2 <= r0^2.
inline MaskRaster brute_force_dilation(const MaskRaster& skeleton, int r0) {
    MaskRaster out(skeleton.width(), skeleton.height());
    std::vector<std::pair<int, int>> on;
    for (int y = 0; y < skeleton.height(); ++y)
        for (int x = 0; x < skeleton.width(); ++x)
            if (skeleton.at(x, y)) on.emplace_back(x, y);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            for (const auto& [px, py] : on) {
                if ((x - px) * (x - px) + (y - py) * (y - py) <= r0 * r0) {
                    out.at(x, y) = 1;
                    break;
                }
            }
        }
    }
    return out;
}

/// Direct 2-D convolution with the outer product of a truncated (4 sigma),
/// renormalized Gaussian, half-sample symmetric borders, then max-normalized.
inline AlphaMatte dense_matte_oracle(const MaskRaster& mask, double sigma) {
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> g;
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        g.push_back(std::exp(-(i * i) / (2.0 * sigma * sigma)));
        sum += g.back();
    }
    for (double& v : g) v /= sum;
    auto reflect = [](int i, int n) {
        while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
        return i;
    };
    const int w = mask.width(), h = mask.height();
    AlphaMatte out(w, h);
    double peak = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j)
                for (int i = -radius; i <= radius; ++i)
                    acc += g[j + radius] * g[i + radius] * mask.at(reflect(x + i, w), reflect(y + j, h));
            out.at(x, y) = acc;
            peak = std::max(peak, acc);
        }
    }
    if (peak > 0)
        for (double& v : out.data()) v /= peak;
    return out;
}

inline ConfusionCounts pixel_loop_confusion(const MaskRaster& pred, const MaskRaster& gt) {
    ConfusionCounts c;
    for (int y = 0; y < pred.height(); ++y) {
        for (int x = 0; x < pred.width(); ++x) {
            const bool p = pred.at(x, y) != 0;
            const bool g = gt.at(x, y) != 0;
            if (p && g) ++c.tp;
            else if (p) ++c.fp;
            else if (g) ++c.fn;
            else ++c.tn;
        }
    }
    return c;
}

inline MaskRaster random_mask(int w, int h, double density, std::mt19937_64& gen) {
    std::bernoulli_distribution on(density);
    MaskRaster m(w, h);
    for (auto& v : m.data()) v = on(gen) ? 1 : 0;
    return m;
}

inline BezierCurve random_curve(int control_points, double extent, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> coord(-0.25 * extent, 1.25 * extent);
    std::vector<Point2> pts;
    for (int i = 0; i < control_points; ++i) pts.push_back({coord(gen), coord(gen)});
    return BezierCurve(std::move(pts));
}

}  // namespace vesselforge::testing
