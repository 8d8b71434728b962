#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tgs/box.hpp"
#include "tgs/frames.hpp"
#include "tgs/kvconfig.hpp"

namespace tgs {

inline constexpr int kOtsuBins = 256;

// Otsu cut over a 256-bin histogram spanning the frame's own [min, max].
// Bin b holds temperatures in [lo + b*width, lo + (b+1)*width); the maximum
// lands in bin 255. Cutting at bin k puts bins [0, k) in the background.
struct OtsuCut {
    int bin = 0;           // k in [1, 255]
    double threshold = 0;  // lo + k * width, degrees Celsius
    double lo = 0;
    double bin_width = 0;
};

int otsu_bin_of(double temp, double lo, double bin_width);

// Maximizes between-class variance; ties go to the lower cut. Throws
// DegenerateError for a frame with fewer than two distinct values.
OtsuCut otsu_cut(const ThermalFrame& frame);
double otsu_threshold(const ThermalFrame& frame);

struct HeatMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // row-major, 1 = body heat
    Box bbox;                        // tight box of set bits; empty when none are set

    bool empty() const { return bbox.empty(); }
    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
};

// Bit set iff temp > threshold.
HeatMask heat_mask(const ThermalFrame& frame, double threshold);

enum class MaskSide { right_of_center, left_of_center, spanning, empty };

const char* to_string(MaskSide side);

// Compares the box against the vertical center line width / 2.
MaskSide classify_mask(const HeatMask& mask);
MaskSide classify_box(const Box& bbox, int grid_width);

// Grows the box by margin_px: up and left for right_of_center, up and right
// for left_of_center, up and both sides for spanning. The result is clamped to
// [0, bounds). Returns nullopt for an empty box or side.
std::optional<Box> expand_box(const Box& bbox, MaskSide side, int margin_px, FrameDims bounds);

// Thermal-grid to RGB pixel mapping: x' = x * scale_x + offset_x.
struct Calibration {
    double scale_x = 1.0;
    double scale_y = 1.0;
    double offset_x = 0.0;
    double offset_y = 0.0;

    // Stretches the thermal grid over the whole RGB frame.
    static Calibration full_frame(FrameDims thermal, FrameDims rgb);
    void validate() const;
};

// Maps a thermal box to RGB pixels, rounding edges outward and clamping to
// the RGB frame. nullopt when nothing is left after clamping.
std::optional<Box> map_to_rgb(const Box& thermal_box, const Calibration& cal, FrameDims rgb);

struct SpatialConfig {
    int margin_px = 20;                     // RGB pixels
    std::optional<Calibration> calibration;  // default: full-frame stretch

    bool set(const std::string& key, const std::string& value);
    Calibration calibration_for(FrameDims thermal, FrameDims rgb) const;
};

// Otsu -> mask -> classify -> map to RGB -> expand. nullopt means no patch
// (constant frame or no heat pixels).
std::optional<Box> patch_box(const ThermalFrame& thermal, const Calibration& cal, int margin_px, FrameDims rgb);

struct Patch {
    std::int64_t frame_id = 0;
    Box box;
    RgbFrame pixels;
};

RgbFrame crop(const RgbFrame& frame, const Box& box);

std::optional<Patch> extract_patch(const RgbFrame& rgb, const ThermalFrame& thermal, const Calibration& cal,
                                   int margin_px, std::int64_t frame_id = 0);

// `{frame_id}_{x}_{y}_{w}_{h}.ppm`
std::string patch_filename(std::int64_t frame_id, const Box& box);
std::filesystem::path write_patch(const Patch& patch, const std::filesystem::path& dir);

}  // namespace tgs
