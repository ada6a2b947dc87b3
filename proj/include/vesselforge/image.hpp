#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vesselforge/error.hpp"

namespace vesselforge {

/// Row-major, channel-interleaved H x W x C grid.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, int channels = 1, T fill = T{})
        : width_(width), height_(height), channels_(channels) {
        if (width < 0 || height < 0 || channels < 1) {
            throw DomainError("invalid grid shape " + std::to_string(width) + "x" +
                              std::to_string(height) + "x" + std::to_string(channels));
        }
        data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    bool same_shape(const Grid& o) const {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }

    T& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
    const T& at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

    T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_ * channels_; }
    const T* row(int y) const {
        return data_.data() + static_cast<std::size_t>(y) * width_ * channels_;
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 1;
    std::vector<T> data_;
};

/// Binary mask M, values in {0, 1}.
using MaskRaster = Grid<std::uint8_t>;

/// Alpha matte A, values in [0, 1].
using AlphaMatte = Grid<double>;

/// 8-bit image with 1 (gray) or 3 (RGB) channels. Used for texture tiles and composites.
using Image8 = Grid<std::uint8_t>;
using TextureTile = Image8;
using CompositeImage = Image8;

}  // namespace vesselforge
