#include "otswarm/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otswarm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct PreparedComponent {
    double mean_x, mean_y;
    double inv00, inv01, inv11;  // inverse covariance (symmetric)
    double scale;                // weight / (2 pi sqrt(det))
};

std::vector<PreparedComponent> prepare(const GaussianMixture& mixture) {
    std::vector<PreparedComponent> out;
    out.reserve(mixture.components.size());
    for (const auto& c : mixture.components) {
        const double a = c.covariance(0, 0);
        const double b = c.covariance(0, 1);
        const double d = c.covariance(1, 1);
        const double det = a * d - b * b;
        PreparedComponent p;
        p.mean_x = c.mean.x();
        p.mean_y = c.mean.y();
        p.inv00 = d / det;
        p.inv01 = -b / det;
        p.inv11 = a / det;
        p.scale = c.weight / (kTwoPi * std::sqrt(det));
        out.push_back(p);
    }
    return out;
}

double density_at(const std::vector<PreparedComponent>& comps, double x, double y) {
    double sum = 0.0;
    for (const auto& p : comps) {
        const double dx = x - p.mean_x;
        const double dy = y - p.mean_y;
        const double q = p.inv00 * dx * dx + 2.0 * p.inv01 * dx * dy + p.inv11 * dy * dy;
        sum += p.scale * std::exp(-0.5 * q);
    }
    return sum;
}

}  // namespace

void DomainBox::validate() const {
    for (int d = 0; d < 2; ++d) {
        if (!(lower[d] < upper[d])) {
            throw std::invalid_argument("DomainBox: lower[" + std::to_string(d) +
                                        "] must be strictly below upper[" + std::to_string(d) + "]");
        }
    }
}

void GaussianMixture::validate() const {
    if (components.empty()) {
        throw std::invalid_argument("GaussianMixture: needs at least one component");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        const std::string where = "GaussianMixture component " + std::to_string(i);
        if (!(c.weight >= 0.0)) {
            throw std::invalid_argument(where + ": weight must be nonnegative");
        }
        const double a = c.covariance(0, 0);
        const double b01 = c.covariance(0, 1);
        const double b10 = c.covariance(1, 0);
        const double d = c.covariance(1, 1);
        if (std::abs(b01 - b10) > 1e-12 * (1.0 + std::abs(b01))) {
            throw std::invalid_argument(where + ": covariance must be symmetric");
        }
        // SPD for a symmetric 2x2: positive diagonal leading minor and determinant.
        if (!(a > 0.0) || !(a * d - b01 * b10 > 0.0)) {
            throw std::invalid_argument(where + ": covariance must be positive-definite");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("GaussianMixture: weights must sum to 1 (got " +
                                    std::to_string(total) + ")");
    }
}

void GridDensity::validate() const {
    box.validate();
    if (width < 1 || height < 1) {
        throw std::invalid_argument("GridDensity: width and height must be >= 1");
    }
    if (mass.size() != static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("GridDensity: mass size does not match width*height");
    }
    double total = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0)) {
            throw std::invalid_argument("GridDensity: cell masses must be nonnegative");
        }
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw std::invalid_argument("GridDensity: total mass must be 1 (got " +
                                    std::to_string(total) + ")");
    }
}

void PointCloud::validate() const {
    box.validate();
    if (positions.empty()) {
        throw std::invalid_argument("PointCloud: needs at least one point");
    }
    for (const auto& p : positions) {
        if (!box.contains(p)) {
            throw std::invalid_argument("PointCloud: point outside the domain box");
        }
    }
}

void ParticleState::validate() const {
    box.validate();
    if (positions.empty()) {
        throw std::invalid_argument("ParticleState: needs at least one particle");
    }
    for (const auto& p : positions) {
        if (!box.contains(p)) {
            throw std::invalid_argument("ParticleState: particle outside the domain box");
        }
    }
}

double mixture_density_at(const GaussianMixture& mixture, const Vec2& x) {
    const auto comps = prepare(mixture);
    return density_at(comps, x.x(), x.y());
}

GridDensity rasterize(const GaussianMixture& mixture, const DomainBox& box,
                      int width, int height) {
    box.validate();
    mixture.validate();
    if (width < 1 || height < 1) {
        throw std::invalid_argument("rasterize: width and height must be >= 1");
    }

    GridDensity grid;
    grid.box = box;
    grid.width = width;
    grid.height = height;
    grid.mass.assign(static_cast<std::size_t>(width) * height, 0.0);

    const auto comps = prepare(mixture);
    const double cw = box.width() / width;
    const double ch = box.height() / height;
    const double area = cw * ch;

    // Kahan summation keeps the post-normalization total within the 1e-10
    // mass invariant even on a 400x400 grid.
    double total = 0.0;
    double comp = 0.0;
    for (int r = 0; r < height; ++r) {
        const double y = box.lower.y() + (r + 0.5) * ch;
        for (int c = 0; c < width; ++c) {
            const double x = box.lower.x() + (c + 0.5) * cw;
            const double m = density_at(comps, x, y) * area;
            grid.at(r, c) = m;
            const double t = m - comp;
            const double s = total + t;
            comp = (s - total) - t;
            total = s;
        }
    }

    if (!(total > 0.0)) {
        throw std::runtime_error("rasterize: mixture has no mass inside the box");
    }
    for (double& m : grid.mass) m /= total;
    return grid;
}

}  // namespace otswarm
