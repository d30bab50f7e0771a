#include "otswarm/sampling.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace otswarm {

PointCloud inverse_transform_sample(const GridDensity& density, int n, RngState& rng) {
    density.validate();
    if (n < 1) {
        throw std::invalid_argument("inverse_transform_sample: n must be >= 1");
    }

    const std::size_t cells = density.mass.size();
    std::vector<double> cdf(cells);
    double running = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        running += density.mass[i];
        cdf[i] = running;
    }
    const double total = cdf.back();

    PointCloud cloud;
    cloud.box = density.box;
    cloud.positions.reserve(n);

    const double cw = density.cell_width();
    const double ch = density.cell_height();
    for (int i = 0; i < n; ++i) {
        // u*total < total, so upper_bound always lands on a positive-mass cell
        // (zero-mass cells repeat the previous CDF value and are skipped).
        const double u = rng.next_double() * total;
        const std::size_t idx =
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        const std::size_t cell = std::min(idx, cells - 1);
        const int r = static_cast<int>(cell) / density.width;
        const int c = static_cast<int>(cell) % density.width;

        const double ux = rng.next_double();
        const double uy = rng.next_double();
        const Vec2 p(density.box.lower.x() + (c + ux) * cw,
                     density.box.lower.y() + (r + uy) * ch);
        cloud.positions.push_back(density.box.clamp(p));
    }
    return cloud;
}

}  // namespace otswarm
