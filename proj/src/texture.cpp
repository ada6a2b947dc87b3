#include "vesselforge/texture.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "vesselforge/error.hpp"
#include "vesselforge/image_io.hpp"

namespace vesselforge {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxDecodeRedraws = 8;

bool has_image_extension(const fs::path& p) {
    static constexpr std::array<std::string_view, 9> kExtensions{
        ".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff", ".webp", ".ppm", ".pgm"};
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return std::find(kExtensions.begin(), kExtensions.end(), ext) != kExtensions.end();
}

std::uint8_t quantize(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

DrawnTexture draw_from_class(const TexturePool& pool, std::size_t class_index, int target_w,
                             int target_h, int channels, RandomStream& rng, double min_crop_fraction) {
    const auto& cls = pool.classes[class_index];
    const auto file_index = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(cls.files.size()) - 1));
    const fs::path& file = cls.files[file_index];

    Image8 source = read_image(file);
    if (channels == 1) {
        source = to_grayscale(source);
    } else if (source.channels() == 1) {
        Image8 rgb(source.width(), source.height(), 3);
        for (std::size_t i = 0; i < source.size(); ++i) {
            rgb.data()[3 * i] = rgb.data()[3 * i + 1] = rgb.data()[3 * i + 2] = source.data()[i];
        }
        source = std::move(rgb);
    }

    const int m = std::min(source.width(), source.height());
    const int min_side = std::clamp(static_cast<int>(std::ceil(min_crop_fraction * m)), 1, m);
    const int side = static_cast<int>(rng.uniform_int(min_side, m));
    const int x0 = static_cast<int>(rng.uniform_int(0, source.width() - side));
    const int y0 = static_cast<int>(rng.uniform_int(0, source.height() - side));
    return {crop_resize(source, x0, y0, side, target_w, target_h),
            cls.id + "/" + file.filename().string()};
}

}  // namespace

std::size_t TexturePool::file_count() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.files.size();
    return n;
}

TexturePool open_pool(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw IoError("texture root is not a readable directory: " + root.string());
    }
    TexturePool pool;
    pool.root = root;
    try {
        std::vector<fs::path> class_dirs;
        for (const auto& entry : fs::directory_iterator(root)) {
            if (entry.is_directory()) class_dirs.push_back(entry.path());
        }
        std::sort(class_dirs.begin(), class_dirs.end());
        for (const auto& dir : class_dirs) {
            TexturePool::TextureClass cls{dir.filename().string(), {}};
            for (const auto& entry : fs::directory_iterator(dir)) {
                if (entry.is_regular_file() && has_image_extension(entry.path())) {
                    cls.files.push_back(entry.path());
                }
            }
            if (cls.files.empty()) continue;
            std::sort(cls.files.begin(), cls.files.end());
            pool.classes.push_back(std::move(cls));
        }
    } catch (const fs::filesystem_error& e) {
        throw IoError(std::string("cannot index texture root: ") + e.what());
    }
    if (pool.classes.size() < 2) {
        throw ConfigError("texture root " + root.string() + " needs at least 2 non-empty classes, found " +
                          std::to_string(pool.classes.size()));
    }
    return pool;
}

TextureTile crop_resize(const Image8& source, int x0, int y0, int side, int target_w, int target_h) {
    if (side < 1 || x0 < 0 || y0 < 0 || x0 + side > source.width() || y0 + side > source.height()) {
        throw DomainError("crop rectangle outside source image");
    }
    if (target_w < 1 || target_h < 1) throw DomainError("target size must be >= 1");

    const int c = source.channels();
    const double sx_scale = static_cast<double>(side) / target_w;
    const double sy_scale = static_cast<double>(side) / target_h;

    struct Tap {
        int i0, i1;
        double f;
    };
    auto taps = [side](int n, double scale) {
        std::vector<Tap> out(n);
        for (int i = 0; i < n; ++i) {
            const double s = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(side - 1));
            const int i0 = static_cast<int>(std::floor(s));
            out[i] = {i0, std::min(i0 + 1, side - 1), s - i0};
        }
        return out;
    };
    const auto xt = taps(target_w, sx_scale);
    const auto yt = taps(target_h, sy_scale);

    TextureTile out(target_w, target_h, c);
    for (int y = 0; y < target_h; ++y) {
        const auto& ty = yt[y];
        const std::uint8_t* r0 = source.row(y0 + ty.i0) + static_cast<std::size_t>(x0) * c;
        const std::uint8_t* r1 = source.row(y0 + ty.i1) + static_cast<std::size_t>(x0) * c;
        std::uint8_t* dst = out.row(y);
        for (int x = 0; x < target_w; ++x) {
            const auto& tx = xt[x];
            for (int ch = 0; ch < c; ++ch) {
                const double a = r0[tx.i0 * c + ch];
                const double b = r0[tx.i1 * c + ch];
                const double d = r1[tx.i0 * c + ch];
                const double e = r1[tx.i1 * c + ch];
                const double top = a + tx.f * (b - a);
                const double bottom = d + tx.f * (e - d);
                dst[x * c + ch] = quantize(top + ty.f * (bottom - top));
            }
        }
    }
    return out;
}

TexturePair draw_texture_pair(const TexturePool& pool, int target_w, int target_h, int channels,
                              RandomStream& rng, double min_crop_fraction) {
    if (pool.classes.size() < 2) throw ConfigError("texture pool needs at least 2 classes");
    if (channels != 1 && channels != 3) throw DomainError("channels must be 1 or 3");
    const auto n_classes = static_cast<std::int64_t>(pool.classes.size());

    std::string last_error;
    for (int attempt = 0; attempt <= kMaxDecodeRedraws; ++attempt) {
        const auto fg_class = static_cast<std::size_t>(rng.uniform_int(0, n_classes - 1));
        auto bg_class = static_cast<std::size_t>(rng.uniform_int(0, n_classes - 2));
        if (bg_class >= fg_class) ++bg_class;
        try {
            DrawnTexture fg = draw_from_class(pool, fg_class, target_w, target_h, channels, rng,
                                              min_crop_fraction);
            DrawnTexture bg = draw_from_class(pool, bg_class, target_w, target_h, channels, rng,
                                              min_crop_fraction);
            return {std::move(fg), std::move(bg)};
        } catch (const IoError& e) {
            last_error = e.what();
        }
    }
    throw IoError("texture draw failed after " + std::to_string(kMaxDecodeRedraws) +
                  " redraws: " + last_error);
}

std::optional<ProceduralKind> parse_procedural_kind(std::string_view name) {
    if (name == "noise") return ProceduralKind::noise;
    if (name == "gradient") return ProceduralKind::gradient;
    if (name == "constant") return ProceduralKind::constant;
    return std::nullopt;
}

std::string_view to_string(ProceduralKind kind) {
    switch (kind) {
        case ProceduralKind::noise: return "noise";
        case ProceduralKind::gradient: return "gradient";
        case ProceduralKind::constant: return "constant";
    }
    return "unknown";
}

TextureTile constant_tile(std::uint8_t level, int target_w, int target_h, int channels) {
    return TextureTile(target_w, target_h, channels, level);
}

TextureTile procedural_fallback(ProceduralKind kind, int target_w, int target_h, int channels,
                                RandomStream& rng) {
    if (target_w < 1 || target_h < 1) throw DomainError("target size must be >= 1");
    if (channels != 1 && channels != 3) throw DomainError("channels must be 1 or 3");
    TextureTile tile(target_w, target_h, channels);

    switch (kind) {
        case ProceduralKind::constant: {
            for (int ch = 0; ch < channels; ++ch) {
                const auto level = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
                for (int y = 0; y < target_h; ++y) {
                    for (int x = 0; x < target_w; ++x) tile.at(x, y, ch) = level;
                }
            }
            break;
        }
        case ProceduralKind::noise: {
            std::array<int, 3> lo{}, hi{};
            for (int ch = 0; ch < channels; ++ch) {
                const auto a = static_cast<int>(rng.uniform_int(0, 255));
                const auto b = static_cast<int>(rng.uniform_int(0, 255));
                lo[ch] = std::min(a, b);
                hi[ch] = std::max(a, b);
            }
            // Two 32-bit lanes per engine draw, mapped by multiply-shift.
            auto& data = tile.data();
            std::uint64_t bits = 0;
            for (std::size_t i = 0; i < data.size(); ++i) {
                const int ch = static_cast<int>(i % channels);
                const std::uint64_t span = static_cast<std::uint64_t>(hi[ch] - lo[ch] + 1);
                std::uint64_t lane;
                if (i % 2 == 0) {
                    bits = rng.next_u64();
                    lane = bits & 0xFFFFFFFFu;
                } else {
                    lane = bits >> 32;
                }
                data[i] = static_cast<std::uint8_t>(lo[ch] + static_cast<int>((lane * span) >> 32));
            }
            break;
        }
        case ProceduralKind::gradient: {
            const bool along_x = rng.uniform_int(0, 1) == 0;
            const bool ascending = rng.uniform_int(0, 1) == 0;
            const int extent = along_x ? target_w : target_h;
            for (int y = 0; y < target_h; ++y) {
                for (int x = 0; x < target_w; ++x) {
                    int pos = along_x ? x : y;
                    if (!ascending) pos = extent - 1 - pos;
                    const std::uint8_t v =
                        extent == 1 ? 0 : quantize(255.0 * pos / static_cast<double>(extent - 1));
                    for (int ch = 0; ch < channels; ++ch) tile.at(x, y, ch) = v;
                }
            }
            break;
        }
    }
    return tile;
}

TextureSource TextureSource::from_pool(TexturePool pool) { return TextureSource(std::move(pool)); }

TextureSource TextureSource::procedural(ProceduralKind kind) { return TextureSource(kind); }

TexturePair TextureSource::draw(int target_w, int target_h, int channels, RandomStream& rng) const {
    if (const auto* pool = std::get_if<TexturePool>(&impl_)) {
        return draw_texture_pair(*pool, target_w, target_h, channels, rng);
    }
    const auto kind = std::get<ProceduralKind>(impl_);
    const std::string id = "procedural:" + std::string(to_string(kind));
    TextureTile fg = procedural_fallback(kind, target_w, target_h, channels, rng);
    TextureTile bg = procedural_fallback(kind, target_w, target_h, channels, rng);
    return {{std::move(fg), id}, {std::move(bg), id}};
}

std::string TextureSource::describe() const {
    if (const auto* pool = std::get_if<TexturePool>(&impl_)) return "pool:" + pool->root.string();
    return "procedural:" + std::string(to_string(std::get<ProceduralKind>(impl_)));
}

}  // namespace vesselforge
