#include "vesselforge/params.hpp"

#include <limits>
#include <set>
#include <string>
#include <type_traits>

#include "vesselforge/error.hpp"
#include "vesselforge/geometry.hpp"

namespace vesselforge {

namespace {

template <typename T>
void check_range(const Range<T>& r, const char* name, T min_lo, T max_hi) {
    if (!(r.lo <= r.hi)) throw ConfigError(std::string(name) + ": range low exceeds high");
    if (r.lo < min_lo || r.hi > max_hi) {
        throw ConfigError(std::string(name) + ": range must lie within [" + std::to_string(min_lo) +
                          ", " + std::to_string(max_hi) + "]");
    }
}

template <typename T>
nlohmann::json range_json(const Range<T>& r) {
    return nlohmann::json::array({r.lo, r.hi});
}

template <typename T>
Range<T> parse_range(const nlohmann::json& j, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(std::string(name) + ": expected a [low, high] pair");
    }
    if constexpr (std::is_integral_v<T>) {
        if (!j[0].is_number_integer() || !j[1].is_number_integer()) {
            throw ConfigError(std::string(name) + ": expected integer bounds");
        }
    }
    return {j[0].get<T>(), j[1].get<T>()};
}

}  // namespace

void GenerationParams::validate() const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    check_range(num_curves, "num_curves", 1, 10000);
    check_range(control_points, "control_points", 2, kMaxControlPoints);
    check_range(delta, "delta", 0.0, kInf);
    check_range(r0, "r0", 0, 1000);
    check_range(sigma, "sigma", 1e-6, 1000.0);
    if (image_width < 1 || image_height < 1) throw ConfigError("image size must be >= 1");
    if (channels != 1 && channels != 3) throw ConfigError("channels must be 1 or 3");
}

nlohmann::json to_json(const GenerationParams& p) {
    return {
        {"num_curves", range_json(p.num_curves)},
        {"control_points", range_json(p.control_points)},
        {"delta", range_json(p.delta)},
        {"r0", range_json(p.r0)},
        {"sigma", range_json(p.sigma)},
        {"image_width", p.image_width},
        {"image_height", p.image_height},
        {"channels", p.channels},
        {"master_seed", p.master_seed},
    };
}

void apply_json(GenerationParams& p, const nlohmann::json& config) {
    if (!config.is_object()) throw ConfigError("generation config must be a JSON object");
    static const std::set<std::string> kKeys{"num_curves", "control_points", "delta", "r0", "sigma",
                                             "image_width", "image_height", "channels", "master_seed"};
    for (const auto& [key, value] : config.items()) {
        if (!kKeys.count(key)) throw ConfigError("unknown generation parameter '" + key + "'");
        (void)value;
    }
    auto get_int = [&](const char* key, int& out) {
        if (!config.contains(key)) return;
        if (!config[key].is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
        out = config[key].get<int>();
    };
    if (config.contains("num_curves")) p.num_curves = parse_range<int>(config["num_curves"], "num_curves");
    if (config.contains("control_points")) {
        p.control_points = parse_range<int>(config["control_points"], "control_points");
    }
    if (config.contains("delta")) p.delta = parse_range<double>(config["delta"], "delta");
    if (config.contains("r0")) p.r0 = parse_range<int>(config["r0"], "r0");
    if (config.contains("sigma")) p.sigma = parse_range<double>(config["sigma"], "sigma");
    get_int("image_width", p.image_width);
    get_int("image_height", p.image_height);
    get_int("channels", p.channels);
    if (config.contains("master_seed")) {
        const auto& s = config["master_seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            throw ConfigError("master_seed: expected a non-negative integer");
        }
        p.master_seed = s.get<std::uint64_t>();
    }
}

}  // namespace vesselforge
