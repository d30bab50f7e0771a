#pragma once

#include "otswarm/geometry.hpp"
#include "otswarm/rng.hpp"

namespace otswarm {

/// Draws n points from a grid density by inverse transform sampling on the
/// flattened row-major cell CDF, with uniform jitter inside the chosen cell.
/// Per point the rng call sequence is: cell draw, then x jitter, then y
/// jitter. Advances rng deterministically; throws on n < 1.
PointCloud inverse_transform_sample(const GridDensity& density, int n, RngState& rng);

}  // namespace otswarm
