#include "vesselforge/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace vesselforge {

namespace {

std::int64_t round_half_away(double v) { return static_cast<std::int64_t>(std::llround(v)); }

void draw_line(std::int64_t x0, std::int64_t y0, std::int64_t x1, std::int64_t y1, MaskRaster& mask) {
    const std::int64_t w = mask.width();
    const std::int64_t h = mask.height();
    if (std::max(x0, x1) < 0 || std::max(y0, y1) < 0 || std::min(x0, x1) >= w ||
        std::min(y0, y1) >= h) {
        return;
    }
    const std::int64_t dx = std::llabs(x1 - x0);
    const std::int64_t dy = -std::llabs(y1 - y0);
    const std::int64_t sx = x0 < x1 ? 1 : -1;
    const std::int64_t sy = y0 < y1 ? 1 : -1;
    std::int64_t err = dx + dy;
    for (;;) {
        if (x0 >= 0 && y0 >= 0 && x0 < w && y0 < h) {
            mask.at(static_cast<int>(x0), static_cast<int>(y0)) = 1;
        }
        if (x0 == x1 && y0 == y1) break;
        const std::int64_t e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

// floor(sqrt(v)) for small non-negative v.
int isqrt(int v) {
    int r = static_cast<int>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace

void draw_polyline(std::span<const Point2> points, MaskRaster& mask) {
    if (points.size() < 2) {
        throw DomainError("polyline needs at least 2 points");
    }
    std::int64_t px = round_half_away(points[0].x);
    std::int64_t py = round_half_away(points[0].y);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const std::int64_t qx = round_half_away(points[i].x);
        const std::int64_t qy = round_half_away(points[i].y);
        draw_line(px, py, qx, qy, mask);
        px = qx;
        py = qy;
    }
}

MaskRaster rasterize_polyline(std::span<const Point2> points, int width, int height) {
    MaskRaster mask(width, height);
    draw_polyline(points, mask);
    return mask;
}

MaskRaster dilate_disk(const MaskRaster& mask, int r0) {
    if (r0 < 0) throw DomainError("dilation radius must be >= 0");
    if (mask.channels() != 1) throw DomainError("dilation expects a single-channel mask");
    if (r0 == 0) return mask;

    const int w = mask.width();
    const int h = mask.height();
    const int cap = r0 + 1;

    // Horizontal distance from each pixel to the nearest set pixel of its row, capped.
    std::vector<int> hdist(static_cast<std::size_t>(w) * h, cap);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* src = mask.row(y);
        int* d = hdist.data() + static_cast<std::size_t>(y) * w;
        int run = cap;
        for (int x = 0; x < w; ++x) {
            run = src[x] ? 0 : std::min(run + 1, cap);
            d[x] = run;
        }
        run = cap;
        for (int x = w - 1; x >= 0; --x) {
            run = src[x] ? 0 : std::min(run + 1, cap);
            d[x] = std::min(d[x], run);
        }
    }

    std::vector<int> half_width(2 * r0 + 1);
    for (int dy = -r0; dy <= r0; ++dy) half_width[dy + r0] = isqrt(r0 * r0 - dy * dy);

    MaskRaster out(w, h);
    for (int y = 0; y < h; ++y) {
        std::uint8_t* dst = out.row(y);
        const int y_lo = std::max(0, y - r0);
        const int y_hi = std::min(h - 1, y + r0);
        for (int sy = y_lo; sy <= y_hi; ++sy) {
            const int reach = half_width[sy - y + r0];
            const int* d = hdist.data() + static_cast<std::size_t>(sy) * w;
            for (int x = 0; x < w; ++x) {
                dst[x] |= static_cast<std::uint8_t>(d[x] <= reach);
            }
        }
    }
    return out;
}

MaskRaster build_mask(std::span<const BezierCurve> curves, int r0, int width, int height) {
    if (curves.empty()) throw DomainError("build_mask needs at least one curve");
    MaskRaster skeleton(width, height);
    for (const auto& curve : curves) {
        const auto samples = discretize(curve);
        draw_polyline(samples, skeleton);
    }
    return dilate_disk(skeleton, r0);
}

}  // namespace vesselforge
