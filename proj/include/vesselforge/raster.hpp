#pragma once

#include <span>
#include <vector>

#include "vesselforge/geometry.hpp"
#include "vesselforge/image.hpp"

namespace vesselforge {

/// Draws the polyline through `points` with 8-connected integer lines.
/// Vertices are rounded half away from zero; pixels outside the grid are dropped.
/// Throws DomainError for fewer than two points.
MaskRaster rasterize_polyline(std::span<const Point2> points, int width, int height);

/// Sets every pixel of `mask` on the polyline; the in-place form of rasterize_polyline.
void draw_polyline(std::span<const Point2> points, MaskRaster& mask);

/// Binary dilation by the disk {(dx, dy) : dx^2 + dy^2 <= r0^2}. r0 = 0 is the identity.
MaskRaster dilate_disk(const MaskRaster& mask, int r0);

/// Union of the rasterized curves, dilated once by a disk of radius r0.
MaskRaster build_mask(std::span<const BezierCurve> curves, int r0, int width, int height);

}  // namespace vesselforge
