#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vesselforge/image.hpp"
#include "vesselforge/random.hpp"

namespace vesselforge {

/// Class-organized texture source: root/<class>/<image files>.
struct TexturePool {
    struct TextureClass {
        std::string id;
        std::vector<std::filesystem::path> files;  // sorted by filename
    };

    std::filesystem::path root;
    std::vector<TextureClass> classes;  // non-empty classes only, sorted by id

    std::size_t file_count() const;
};

/// Indexes every file with an image extension under root/<class>/. Classes and
/// files are ordered lexicographically so index-based draws are reproducible.
/// Throws IoError when root is unreadable, ConfigError with fewer than two
/// non-empty classes.
TexturePool open_pool(const std::filesystem::path& root);

struct DrawnTexture {
    TextureTile tile;
    std::string identity;  // "<class>/<file>" or "procedural:<kind>"
};

struct TexturePair {
    DrawnTexture foreground;
    DrawnTexture background;
};

/// Square crop with top-left (x0, y0) and side `side`, bilinearly resized to
/// target_w x target_h. Sample positions use half-pixel centers,
/// src = (dst + 0.5) * side / target - 0.5, clamped to the crop; each output
/// is computed in double and rounded half away from zero.
TextureTile crop_resize(const Image8& source, int x0, int y0, int side, int target_w, int target_h);

/// Draws F and B from two distinct classes.
///
/// Per tile: class (the second without replacement), file within class, crop
/// side uniform in [ceil(min_crop_fraction * m), m] with m = min(w, h), then
/// top-left x and y. Sources are converted to gray before resizing when
/// channels == 1. An undecodable file discards the pair and redraws, at most 8
/// times, then throws IoError.
TexturePair draw_texture_pair(const TexturePool& pool, int target_w, int target_h, int channels,
                              RandomStream& rng, double min_crop_fraction = 0.5);

enum class ProceduralKind { noise, gradient, constant };

std::optional<ProceduralKind> parse_procedural_kind(std::string_view name);
std::string_view to_string(ProceduralKind kind);

/// Pool-free synthetic tile.
///  - noise: per channel a random range [lo, hi], pixels uniform within it
///    (multiply-shift of 32-bit lanes, bias below 2^-24).
///  - gradient: 0..255 ramp along a random axis and direction, same in every
///    channel; strictly monotone when that axis spans at most 256 px.
///  - constant: one random level per channel.
TextureTile procedural_fallback(ProceduralKind kind, int target_w, int target_h, int channels,
                                RandomStream& rng);

TextureTile constant_tile(std::uint8_t level, int target_w, int target_h, int channels);

/// Either a texture pool or a procedural generator; what the pipeline draws from.
class TextureSource {
public:
    static TextureSource from_pool(TexturePool pool);
    static TextureSource procedural(ProceduralKind kind);

    TexturePair draw(int target_w, int target_h, int channels, RandomStream& rng) const;

    /// "pool:<root>" or "procedural:<kind>"; echoed into manifests.
    std::string describe() const;

private:
    explicit TextureSource(std::variant<TexturePool, ProceduralKind> impl) : impl_(std::move(impl)) {}

    std::variant<TexturePool, ProceduralKind> impl_;
};

}  // namespace vesselforge
