#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "gfe/error.hpp"

namespace gfe {

inline constexpr int kNumPoints = 100;   // tracked facial attribute points per frame
inline constexpr int kFrameDim = 300;    // three coordinates (x, y, z) per point
inline constexpr int kNumRegions = 10;

/// One video frame: 100 facial attribute points, each with x, y (pixels)
/// and z (depth, mm), stored interleaved as (x0, y0, z0, x1, y1, z1, ...).
struct LandmarkFrame {
    double timestamp = 0.0;  // milliseconds; carried through, never fed to the model
    std::array<double, kFrameDim> coords{};

    bool operator==(const LandmarkFrame&) const = default;

    bool all_finite() const {
        if (!std::isfinite(timestamp)) return false;
        for (double v : coords)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Inclusive attribute-point range for one face region.
struct Region {
    std::string_view name;
    int first;  // first attribute point index
    int last;   // last attribute point index, inclusive

    constexpr int size() const { return last - first + 1; }
};

/// The ten face regions, in canonical order. Attribute points are grouped
/// contiguously: together the ranges cover 0..99 with no overlap.
inline constexpr std::array<Region, kNumRegions> kRegions = {{
    {"left_eye", 0, 7},
    {"right_eye", 8, 15},
    {"left_eyebrow", 16, 25},
    {"right_eyebrow", 26, 35},
    {"nose", 36, 47},
    {"mouth", 48, 67},
    {"face_contour", 68, 86},
    {"irises_nose_tip", 87, 89},
    {"line_above_left_eyebrow", 90, 94},
    {"line_above_right_eyebrow", 95, 99},
}};

/// Maps an attribute point index (0..99) to its region index (0..9).
inline int region_of_point(int point) {
    if (point < 0 || point >= kNumPoints)
        throw Error("attribute point index out of range: " + std::to_string(point));
    for (int r = 0; r < kNumRegions; ++r)
        if (point >= kRegions[r].first && point <= kRegions[r].last) return r;
    throw Error("unreachable: region table does not cover point " + std::to_string(point));
}

/// Full point -> region lookup table.
inline std::array<int, kNumPoints> build_region_map() {
    std::array<int, kNumPoints> map{};
    for (int p = 0; p < kNumPoints; ++p) map[p] = region_of_point(p);
    return map;
}

inline int region_index_by_name(std::string_view name) {
    for (int r = 0; r < kNumRegions; ++r)
        if (kRegions[r].name == name) return r;
    throw ConfigError("unknown face region: " + std::string(name));
}

}  // namespace gfe
