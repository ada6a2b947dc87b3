#pragma once

#include <vector>

#include "vesselforge/image.hpp"

namespace vesselforge {

/// Normalized 1-D Gaussian taps for offsets -R..R, R = ceil(4 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Maps any integer index onto [0, n) by half-sample symmetric reflection
/// (d c b a | a b c d | d c b a), repeating for indices far outside.
int reflect_index(int i, int n);

/// Separable Gaussian blur of M (reflect padding), divided by its maximum.
/// An all-zero mask gives an all-zero matte. Throws DomainError for sigma <= 0.
AlphaMatte make_matte(const MaskRaster& mask, double sigma);

/// I = round(A F + (1 - A) B) per pixel and channel, half away from zero,
/// clamped to [0, 255]. Throws DomainError on shape mismatch.
CompositeImage blend(const AlphaMatte& matte, const TextureTile& fg, const TextureTile& bg);

}  // namespace vesselforge
