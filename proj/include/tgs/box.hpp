#pragma once

#include <algorithm>
#include <cstdint>

namespace tgs {

// Axis-aligned integer rectangle; x, y is the top-left corner.
struct Box {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }
    bool empty() const { return w <= 0 || h <= 0; }
    std::int64_t area() const { return empty() ? 0 : std::int64_t{w} * h; }

    bool contains(const Box& o) const {
        return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
    }

    static Box from_edges(int x0, int y0, int x1, int y1) { return {x0, y0, x1 - x0, y1 - y0}; }

    Box clamped(int width, int height) const {
        int x0 = std::clamp(x, 0, width), y0 = std::clamp(y, 0, height);
        int x1 = std::clamp(right(), 0, width), y1 = std::clamp(bottom(), 0, height);
        return from_edges(x0, y0, std::max(x0, x1), std::max(y0, y1));
    }

    bool operator==(const Box&) const = default;
};

}  // namespace tgs
