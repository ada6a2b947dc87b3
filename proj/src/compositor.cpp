#include "vesselforge/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vesselforge {

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("Gaussian sigma must be > 0, got " + std::to_string(sigma));
    }
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        taps[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += taps[i + radius];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

AlphaMatte make_matte(const MaskRaster& mask, double sigma) {
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = mask.width();
    const int h = mask.height();
    AlphaMatte out(w, h);
    if (std::none_of(mask.data().begin(), mask.data().end(), [](auto v) { return v != 0; })) {
        return out;
    }

    // Horizontal pass.
    AlphaMatte tmp(w, h);
    std::vector<int> xmap(static_cast<std::size_t>(w + 2 * radius));
    for (int x = -radius; x < w + radius; ++x) xmap[x + radius] = reflect_index(x, w);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* src = mask.row(y);
        double* dst = tmp.row(y);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                if (src[xmap[x + k + radius]]) acc += kernel[k + radius];
            }
            dst[x] = acc;
        }
    }

    // Vertical pass.
    std::vector<int> ymap(static_cast<std::size_t>(h + 2 * radius));
    for (int y = -radius; y < h + radius; ++y) ymap[y + radius] = reflect_index(y, h);
    for (int y = 0; y < h; ++y) {
        double* dst = out.row(y);
        for (int k = -radius; k <= radius; ++k) {
            const double weight = kernel[k + radius];
            const double* src = tmp.row(ymap[y + k + radius]);
            for (int x = 0; x < w; ++x) dst[x] += weight * src[x];
        }
    }

    const double peak = *std::max_element(out.data().begin(), out.data().end());
    if (peak > 0.0) {
        for (double& v : out.data()) v = std::min(1.0, v / peak);
    }
    return out;
}

CompositeImage blend(const AlphaMatte& matte, const TextureTile& fg, const TextureTile& bg) {
    if (!fg.same_shape(bg)) throw DomainError("foreground and background tiles differ in shape");
    if (fg.width() != matte.width() || fg.height() != matte.height() || matte.channels() != 1) {
        throw DomainError("matte and texture dimensions differ");
    }
    const int c = fg.channels();
    CompositeImage out(fg.width(), fg.height(), c);
    const auto& a = matte.data();
    const auto& f = fg.data();
    const auto& b = bg.data();
    auto& o = out.data();
    for (std::size_t p = 0; p < a.size(); ++p) {
        const double alpha = a[p];
        for (int ch = 0; ch < c; ++ch) {
            const std::size_t i = p * c + ch;
            const double v = alpha * f[i] + (1.0 - alpha) * b[i];
            o[i] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
        }
    }
    return out;
}

}  // namespace vesselforge
