#include "otswarm/render.hpp"

#include "otswarm/frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

namespace otswarm {

namespace {

struct Pixel {
    int col, row;
};

void put(Image& img, int row, int col, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (row < 0 || row >= img.height || col < 0 || col >= img.width) return;
    std::uint8_t* p = img.pixel(row, col);
    p[0] = r;
    p[1] = g;
    p[2] = b;
}

Pixel to_pixel(const GridDensity& density, const Vec2& pos) {
    const int c = std::clamp(
        static_cast<int>(std::floor((pos.x() - density.box.lower.x()) / density.cell_width())),
        0, density.width - 1);
    const int r = std::clamp(
        static_cast<int>(std::floor((pos.y() - density.box.lower.y()) / density.cell_height())),
        0, density.height - 1);
    return Pixel{c, density.height - 1 - r};
}

void draw_line(Image& img, Pixel from, Pixel to, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    // Bresenham.
    int x0 = from.col, y0 = from.row;
    const int x1 = to.col, y1 = to.row;
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        put(img, y0, x0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

Image render_frame(const GridDensity& density, const std::vector<Vec2>& positions,
                   const std::vector<Vec2>& targets) {
    Image img;
    img.width = density.width;
    img.height = density.height;
    img.rgb.assign(3 * static_cast<std::size_t>(img.width) * img.height, 0);

    const double max_mass = *std::max_element(density.mass.begin(), density.mass.end());
    for (int r = 0; r < density.height; ++r) {
        for (int c = 0; c < density.width; ++c) {
            const double v = max_mass > 0.0 ? density.at(r, c) / max_mass : 0.0;
            const auto level = static_cast<std::uint8_t>(std::lround(255.0 * v));
            put(img, density.height - 1 - r, c, level, level,
                static_cast<std::uint8_t>(255 - level));
        }
    }

    const std::size_t n_segments = std::min(positions.size(), targets.size());
    for (std::size_t i = 0; i < n_segments; ++i) {
        draw_line(img, to_pixel(density, positions[i]), to_pixel(density, targets[i]),
                  200, 200, 200);
    }
    for (const Vec2& pos : positions) {
        const Pixel p = to_pixel(density, pos);
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                put(img, p.row + dr, p.col + dc, 255, 255, 255);
            }
        }
    }
    return img;
}

void write_ppm(const Image& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace otswarm
