#include "tgs/spatial.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tgs/error.hpp"

namespace tgs {

int otsu_bin_of(double temp, double lo, double bin_width) {
    int b = static_cast<int>(std::floor((temp - lo) / bin_width));
    return std::clamp(b, 0, kOtsuBins - 1);
}

OtsuCut otsu_cut(const ThermalFrame& frame) {
    if (frame.temps.empty()) throw DegenerateError("otsu: empty frame");
    auto [mn, mx] = std::minmax_element(frame.temps.begin(), frame.temps.end());
    const double lo = *mn, hi = *mx;
    if (!(hi > lo)) throw DegenerateError("otsu: constant frame has no threshold");

    const double width = (hi - lo) / kOtsuBins;
    std::array<std::int64_t, kOtsuBins> hist{};
    for (double t : frame.temps) ++hist[static_cast<std::size_t>(otsu_bin_of(t, lo, width))];

    // Between-class variance for cut k is proportional to
    // (N * S0 - n0 * S)^2 / (n0 * n1), with S0 the bin-index sum of the
    // background class. Integer sums keep the comparison exact.
    std::int64_t total_n = 0, total_s = 0;
    for (int b = 0; b < kOtsuBins; ++b) {
        total_n += hist[static_cast<std::size_t>(b)];
        total_s += std::int64_t{b} * hist[static_cast<std::size_t>(b)];
    }

    using i128 = __int128;
    int best_k = 0;
    i128 best_num = -1, best_den = 1;
    std::int64_t n0 = 0, s0 = 0;
    for (int k = 1; k < kOtsuBins; ++k) {
        n0 += hist[static_cast<std::size_t>(k - 1)];
        s0 += std::int64_t{k - 1} * hist[static_cast<std::size_t>(k - 1)];
        const std::int64_t n1 = total_n - n0;
        if (n0 == 0 || n1 == 0) continue;
        const i128 d = i128{total_n} * s0 - i128{n0} * total_s;
        const i128 num = d * d;
        const i128 den = i128{n0} * n1;
        // num / den > best_num / best_den
        if (best_num < 0 || num * best_den > best_num * den) {
            best_num = num;
            best_den = den;
            best_k = k;
        }
    }
    if (best_k == 0) throw DegenerateError("otsu: no cut separates two classes");
    return {best_k, lo + best_k * width, lo, width};
}

double otsu_threshold(const ThermalFrame& frame) { return otsu_cut(frame).threshold; }

HeatMask heat_mask(const ThermalFrame& frame, double threshold) {
    HeatMask m;
    m.width = frame.width;
    m.height = frame.height;
    m.bits.assign(frame.temps.size(), 0);
    int x0 = frame.width, y0 = frame.height, x1 = -1, y1 = -1;
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            if (frame.at(x, y) > threshold) {
                m.bits[static_cast<std::size_t>(y) * frame.width + x] = 1;
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
        }
    }
    if (x1 >= 0) m.bbox = Box::from_edges(x0, y0, x1 + 1, y1 + 1);
    return m;
}

const char* to_string(MaskSide side) {
    switch (side) {
        case MaskSide::right_of_center: return "right_of_center";
        case MaskSide::left_of_center: return "left_of_center";
        case MaskSide::spanning: return "spanning";
        case MaskSide::empty: return "empty";
    }
    return "empty";
}

MaskSide classify_box(const Box& bbox, int grid_width) {
    if (bbox.empty()) return MaskSide::empty;
    const double center = grid_width / 2.0;
    if (bbox.x >= center) return MaskSide::right_of_center;
    if (bbox.right() <= center) return MaskSide::left_of_center;
    return MaskSide::spanning;
}

MaskSide classify_mask(const HeatMask& mask) { return classify_box(mask.bbox, mask.width); }

std::optional<Box> expand_box(const Box& bbox, MaskSide side, int margin_px, FrameDims bounds) {
    if (margin_px < 0) throw ArgumentError("margin must be >= 0");
    if (bbox.empty() || side == MaskSide::empty) return std::nullopt;

    int x0 = bbox.x, y0 = bbox.y - margin_px, x1 = bbox.right(), y1 = bbox.bottom();
    switch (side) {
        case MaskSide::right_of_center: x0 -= margin_px; break;
        case MaskSide::left_of_center: x1 += margin_px; break;
        case MaskSide::spanning:
            x0 -= margin_px;
            x1 += margin_px;
            break;
        case MaskSide::empty: break;
    }
    Box out = Box::from_edges(x0, y0, x1, y1).clamped(bounds.width, bounds.height);
    if (out.empty()) return std::nullopt;
    return out;
}

Calibration Calibration::full_frame(FrameDims thermal, FrameDims rgb) {
    return {static_cast<double>(rgb.width) / thermal.width, static_cast<double>(rgb.height) / thermal.height, 0.0,
            0.0};
}

void Calibration::validate() const {
    if (!(scale_x > 0.0) || !(scale_y > 0.0)) throw ConfigError("calibration scales must be > 0");
    if (!std::isfinite(offset_x) || !std::isfinite(offset_y)) throw ConfigError("calibration offsets must be finite");
}

std::optional<Box> map_to_rgb(const Box& thermal_box, const Calibration& cal, FrameDims rgb) {
    cal.validate();
    if (thermal_box.empty()) return std::nullopt;
    auto lo = [](double v) { return static_cast<int>(std::floor(v)); };
    auto hi = [](double v) { return static_cast<int>(std::ceil(v)); };
    Box b = Box::from_edges(lo(thermal_box.x * cal.scale_x + cal.offset_x), lo(thermal_box.y * cal.scale_y + cal.offset_y),
                            hi(thermal_box.right() * cal.scale_x + cal.offset_x),
                            hi(thermal_box.bottom() * cal.scale_y + cal.offset_y))
                .clamped(rgb.width, rgb.height);
    if (b.empty()) return std::nullopt;
    return b;
}

bool SpatialConfig::set(const std::string& key, const std::string& value) {
    auto cal_field = [&](double Calibration::*field) {
        if (!calibration) calibration = Calibration{};
        (*calibration).*field = parse_double(key, value);
    };
    if (key == "margin_px") {
        auto v = parse_int(key, value);
        if (v < 0) throw ConfigError("margin_px must be >= 0");
        margin_px = static_cast<int>(v);
    } else if (key == "scale_x") {
        cal_field(&Calibration::scale_x);
    } else if (key == "scale_y") {
        cal_field(&Calibration::scale_y);
    } else if (key == "offset_x") {
        cal_field(&Calibration::offset_x);
    } else if (key == "offset_y") {
        cal_field(&Calibration::offset_y);
    } else {
        return false;
    }
    return true;
}

Calibration SpatialConfig::calibration_for(FrameDims thermal, FrameDims rgb) const {
    if (calibration) return *calibration;
    return Calibration::full_frame(thermal, rgb);
}

std::optional<Box> patch_box(const ThermalFrame& thermal, const Calibration& cal, int margin_px, FrameDims rgb) {
    double threshold = 0.0;
    try {
        threshold = otsu_threshold(thermal);
    } catch (const DegenerateError&) {
        return std::nullopt;
    }
    HeatMask mask = heat_mask(thermal, threshold);
    MaskSide side = classify_mask(mask);
    if (side == MaskSide::empty) return std::nullopt;
    auto mapped = map_to_rgb(mask.bbox, cal, rgb);
    if (!mapped) return std::nullopt;
    return expand_box(*mapped, side, margin_px, rgb);
}

RgbFrame crop(const RgbFrame& frame, const Box& box) {
    if (box.empty() || !Box{0, 0, frame.width, frame.height}.contains(box))
        throw ArgumentError("crop box outside the frame");
    RgbFrame out;
    out.timestamp_ms = frame.timestamp_ms;
    out.width = box.w;
    out.height = box.h;
    out.pixels.resize(3u * static_cast<std::size_t>(box.w) * box.h);
    for (int y = 0; y < box.h; ++y) {
        auto src = frame.pixels.begin() + 3 * (static_cast<std::ptrdiff_t>(box.y + y) * frame.width + box.x);
        std::copy(src, src + 3 * box.w, out.pixels.begin() + 3 * static_cast<std::ptrdiff_t>(y) * box.w);
    }
    return out;
}

std::optional<Patch> extract_patch(const RgbFrame& rgb, const ThermalFrame& thermal, const Calibration& cal,
                                   int margin_px, std::int64_t frame_id) {
    auto box = patch_box(thermal, cal, margin_px, {rgb.width, rgb.height});
    if (!box) return std::nullopt;
    return Patch{frame_id, *box, crop(rgb, *box)};
}

std::string patch_filename(std::int64_t frame_id, const Box& box) {
    return std::to_string(frame_id) + "_" + std::to_string(box.x) + "_" + std::to_string(box.y) + "_" +
           std::to_string(box.w) + "_" + std::to_string(box.h) + ".ppm";
}

std::filesystem::path write_patch(const Patch& patch, const std::filesystem::path& dir) {
    auto path = dir / patch_filename(patch.frame_id, patch.box);
    write_bytes(path, encode_rgb(patch.pixels));
    return path;
}

}  // namespace tgs
