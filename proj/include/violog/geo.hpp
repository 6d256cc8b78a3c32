#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "violog/common.hpp"

namespace violog {

// Rounded (lat, lon) grid cell. Stored fixed-point so keys hash and compare
// exactly; `scale` is the decimal precision the pair was rounded at.
struct LocationKey {
    std::int64_t lat_fp = 0;
    std::int64_t lon_fp = 0;
    int scale = 4;

    auto operator<=>(const LocationKey&) const = default;
};

inline std::int64_t round_fixed(double v, int precision) {
    double p = std::pow(10.0, precision);
    return std::llround(v * p);
}

inline LocationKey make_location_key(double lat, double lon, int precision) {
    return LocationKey{round_fixed(lat, precision), round_fixed(lon, precision), precision};
}

inline double fixed_to_double(std::int64_t fp, int scale) {
    return static_cast<double>(fp) / std::pow(10.0, scale);
}

inline std::string format_fixed(std::int64_t fp, int scale) {
    bool neg = fp < 0;
    std::uint64_t mag = neg ? static_cast<std::uint64_t>(-fp) : static_cast<std::uint64_t>(fp);
    std::string digits = std::to_string(mag);
    std::string out;
    if (scale == 0) {
        out = digits;
    } else {
        while (digits.size() <= static_cast<std::size_t>(scale)) digits.insert(digits.begin(), '0');
        out = digits.substr(0, digits.size() - scale) + "." + digits.substr(digits.size() - scale);
    }
    return neg ? "-" + out : out;
}

inline std::string format_location(const LocationKey& k) {
    return format_fixed(k.lat_fp, k.scale) + "," + format_fixed(k.lon_fp, k.scale);
}

// Symbol-safe rendering for use as a logic constant: loc_<lat>_<lon> with
// '-' mapped to 'm' and '.' dropped (the scale keeps it unambiguous).
inline std::string location_symbol(const LocationKey& k) {
    auto part = [](std::int64_t fp) {
        std::string s = fp < 0 ? "m" + std::to_string(-fp) : std::to_string(fp);
        return s;
    };
    return "loc_" + part(k.lat_fp) + "_" + part(k.lon_fp);
}

} // namespace violog
