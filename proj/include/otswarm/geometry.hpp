#pragma once

#include <Eigen/Core>

#include <vector>

namespace otswarm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Axis-aligned compact domain; defaults to the unit square.
struct DomainBox {
    Vec2 lower{0.0, 0.0};
    Vec2 upper{1.0, 1.0};

    double width() const { return upper.x() - lower.x(); }
    double height() const { return upper.y() - lower.y(); }

    bool contains(const Vec2& x) const {
        return x.x() >= lower.x() && x.x() <= upper.x() &&
               x.y() >= lower.y() && x.y() <= upper.y();
    }

    Vec2 clamp(const Vec2& x) const {
        return Vec2(std::min(std::max(x.x(), lower.x()), upper.x()),
                    std::min(std::max(x.y(), lower.y()), upper.y()));
    }

    void validate() const;  // throws std::invalid_argument
};

struct GaussianComponent {
    Vec2 mean{0.5, 0.5};
    Mat2 covariance = Mat2::Identity() * 0.01;
    double weight = 1.0;
};

/// Weighted sum of bivariate Gaussians; weights sum to one and every
/// covariance is symmetric positive-definite.
struct GaussianMixture {
    std::vector<GaussianComponent> components;

    void validate() const;
};

/// Nonnegative cell masses on a regular grid, row-major with index
/// r * width + c; row r spans y in [lower.y + r*dy, lower.y + (r+1)*dy).
/// Total mass is one.
struct GridDensity {
    DomainBox box;
    int width = 0;   // cells along x
    int height = 0;  // cells along y
    std::vector<double> mass;

    double cell_width() const { return box.width() / width; }
    double cell_height() const { return box.height() / height; }

    double& at(int r, int c) { return mass[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return mass[static_cast<std::size_t>(r) * width + c]; }

    Vec2 cell_center(int r, int c) const {
        return Vec2(box.lower.x() + (c + 0.5) * cell_width(),
                    box.lower.y() + (r + 0.5) * cell_height());
    }

    void validate() const;
};

/// Sample cloud with implicit uniform mass 1/size per point.
struct PointCloud {
    DomainBox box;
    std::vector<Vec2> positions;

    void validate() const;
};

/// Indexed swarm state; index i names the same particle for the whole run.
struct ParticleState {
    DomainBox box;
    std::vector<Vec2> positions;

    void validate() const;
};

/// Per-particle velocities, aligned with ParticleState indices.
struct VelocitySample {
    std::vector<Vec2> velocities;
};

/// Mixture density at x: sum_c weight_c * N(x; mean_c, cov_c).
double mixture_density_at(const GaussianMixture& mixture, const Vec2& x);

/// Cell-center evaluation times cell area, renormalized to total mass one.
/// Throws if the mixture has no mass inside the box.
GridDensity rasterize(const GaussianMixture& mixture, const DomainBox& box,
                      int width, int height);

}  // namespace otswarm
