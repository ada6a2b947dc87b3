#include "vesselforge/image_io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace vesselforge {

Image8 read_image(const std::filesystem::path& path) {
    cv::Mat mat;
    try {
        mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    } catch (const cv::Exception& e) {
        throw IoError("cannot decode " + path.string() + ": " + e.what());
    }
    if (mat.empty()) throw IoError("cannot decode " + path.string());
    if (mat.depth() == CV_16U) {
        mat.convertTo(mat, CV_8U, 1.0 / 257.0);
    } else if (mat.depth() != CV_8U) {
        throw IoError("unsupported pixel depth in " + path.string());
    }

    const int channels = mat.channels();
    if (channels != 1 && channels != 3 && channels != 4) {
        throw IoError("unsupported channel count in " + path.string());
    }
    const int out_channels = channels == 1 ? 1 : 3;
    Image8 out(mat.cols, mat.rows, out_channels);
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* src = mat.ptr<std::uint8_t>(y);
        std::uint8_t* dst = out.row(y);
        for (int x = 0; x < mat.cols; ++x) {
            if (channels == 1) {
                dst[x] = src[x];
            } else {
                // OpenCV stores BGR(A); alpha is dropped.
                const std::uint8_t* px = src + static_cast<std::size_t>(x) * channels;
                dst[3 * x + 0] = px[2];
                dst[3 * x + 1] = px[1];
                dst[3 * x + 2] = px[0];
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_png(const Image8& image) {
    if (image.channels() != 1 && image.channels() != 3) {
        throw DomainError("PNG encoding supports 1 or 3 channels");
    }
    const int type = image.channels() == 1 ? CV_8UC1 : CV_8UC3;
    cv::Mat mat(image.height(), image.width(), type);
    for (int y = 0; y < image.height(); ++y) {
        const std::uint8_t* src = image.row(y);
        std::uint8_t* dst = mat.ptr<std::uint8_t>(y);
        if (image.channels() == 1) {
            std::copy(src, src + image.width(), dst);
        } else {
            for (int x = 0; x < image.width(); ++x) {
                dst[3 * x + 0] = src[3 * x + 2];
                dst[3 * x + 1] = src[3 * x + 1];
                dst[3 * x + 2] = src[3 * x + 0];
            }
        }
    }
    std::vector<std::uint8_t> bytes;
    const std::vector<int> flags{cv::IMWRITE_PNG_COMPRESSION, 3};
    if (!cv::imencode(".png", mat, bytes, flags)) throw IoError("PNG encoding failed");
    return bytes;
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string sha256_hex(const std::string& text) {
    return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Image8 to_grayscale(const Image8& image) {
    if (image.channels() == 1) return image;
    if (image.channels() != 3) throw DomainError("grayscale conversion expects 3 channels");
    Image8 out(image.width(), image.height(), 1);
    for (int y = 0; y < image.height(); ++y) {
        const std::uint8_t* src = image.row(y);
        std::uint8_t* dst = out.row(y);
        for (int x = 0; x < image.width(); ++x) {
            const double luma = 0.299 * src[3 * x] + 0.587 * src[3 * x + 1] + 0.114 * src[3 * x + 2];
            dst[x] = static_cast<std::uint8_t>(std::min(255.0, std::round(luma)));
        }
    }
    return out;
}

Image8 mask_to_image(const MaskRaster& mask) {
    Image8 out(mask.width(), mask.height(), 1);
    for (std::size_t i = 0; i < mask.size(); ++i) out.data()[i] = mask.data()[i] ? 255 : 0;
    return out;
}

MaskRaster image_to_mask(const Image8& image, int threshold) {
    const Image8 gray = to_grayscale(image);
    MaskRaster out(gray.width(), gray.height());
    for (std::size_t i = 0; i < gray.size(); ++i) out.data()[i] = gray.data()[i] >= threshold;
    return out;
}

}  // namespace vesselforge
