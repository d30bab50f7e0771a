#pragma once

#include "otswarm/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace otswarm {

/// 8-bit RGB raster, row-major from the top row down.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // 3 * width * height bytes

    std::uint8_t* pixel(int row, int col) {
        return rgb.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }
};

/// One pixel per grid cell. Density is normalized per frame to [0, max cell
/// mass] and mapped through a linear blue (0,0,255) to yellow (255,255,0)
/// ramp. Assignment segments are gray (200,200,200) single-pixel lines;
/// particles are white 3x3 squares drawn on top. Row 0 of the image is the
/// top of the domain (largest y).
Image render_frame(const GridDensity& density, const std::vector<Vec2>& positions,
                   const std::vector<Vec2>& targets);

/// Binary portable pixmap (P6, maxval 255).
void write_ppm(const Image& image, const std::string& path);

}  // namespace otswarm
