#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vesselforge/image.hpp"

namespace vesselforge {

/// Decodes any OpenCV-supported file into 8-bit RGB (3 channels) or gray
/// (1 channel, when the file itself is single-channel). Throws IoError.
Image8 read_image(const std::filesystem::path& path);

/// PNG bytes for a 1- or 3-channel (RGB) image. Output is deterministic.
std::vector<std::uint8_t> encode_png(const Image8& image);

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(const std::string& text);

/// ITU-R BT.601 luma, rounded half away from zero. 1-channel input is returned as is.
Image8 to_grayscale(const Image8& image);

/// Mask {0,1} -> 8-bit {0,255}.
Image8 mask_to_image(const MaskRaster& mask);

/// Any 8-bit image -> {0,1} mask: luma >= threshold is 1.
MaskRaster image_to_mask(const Image8& image, int threshold = 128);

}  // namespace vesselforge
