#pragma once

#include <cstdint>

#include <json.hpp>

namespace vesselforge {

template <typename T>
struct Range {
    T lo{};
    T hi{};

    bool contains(T v) const { return v >= lo && v <= hi; }
    friend bool operator==(const Range&, const Range&) = default;
};

/// Everything that determines a generated dataset, apart from the texture source.
/// Defaults reproduce the VessShape sampling ranges.
struct GenerationParams {
    Range<int> num_curves{1, 20};        // K
    Range<int> control_points{2, 20};    // n + 1
    Range<double> delta{50.0, 150.0};    // displacement scale, px
    Range<int> r0{1, 5};                 // dilation radius, px
    Range<double> sigma{1.0, 2.0};       // matte blur
    int image_width = 256;
    int image_height = 256;
    int channels = 3;
    std::uint64_t master_seed = 0;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

nlohmann::json to_json(const GenerationParams& params);

/// Overrides the fields present in `config` (same keys as to_json). Unknown keys
/// and ill-typed values throw ConfigError. Does not validate.
void apply_json(GenerationParams& params, const nlohmann::json& config);

}  // namespace vesselforge
