#include "otswarm/geometry.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace otswarm;
using test_util::gaussian_pdf;
using test_util::isotropic_mixture;

TEST_CASE("DomainBox defaults to the unit square and rejects inverted bounds") {
    DomainBox box;
    CHECK(box.lower == Vec2(0.0, 0.0));
    CHECK(box.upper == Vec2(1.0, 1.0));
    box.validate();

    DomainBox bad;
    bad.lower = Vec2(0.7, 0.0);
    bad.upper = Vec2(0.3, 1.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("GaussianMixture invariants") {
    GaussianMixture m = isotropic_mixture(Vec2(0.5, 0.5), 0.01);
    m.validate();

    SUBCASE("weights must sum to one") {
        m.components[0].weight = 0.9;
        CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    }
    SUBCASE("covariance must be positive-definite") {
        m.components[0].covariance << 0.01, 0.02, 0.02, 0.01;  // det < 0
        CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    }
    SUBCASE("covariance must be symmetric") {
        m.components[0].covariance(0, 1) = 0.005;
        CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    }
    SUBCASE("weights must be nonnegative") {
        GaussianComponent extra = m.components[0];
        extra.weight = -0.1;
        m.components[0].weight = 1.1;
        m.components.push_back(extra);
        CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    }
}

TEST_CASE("mixture_density_at peak of an isotropic Gaussian") {
    const Vec2 mean(0.4, 0.6);
    const GaussianMixture m = isotropic_mixture(mean, 0.01);  // sigma = 0.1
    // 1 / (2 pi 0.01)
    CHECK(mixture_density_at(m, mean) ==
          doctest::Approx(15.915494309189533).epsilon(1e-12));
}

TEST_CASE("mixture_density_at vanishes in the far tail") {
    const GaussianMixture m = isotropic_mixture(Vec2(0.5, 0.5), 0.01);
    CHECK(mixture_density_at(m, Vec2(50.0, 50.0)) < 1e-12);
}

TEST_CASE("two equal-weight components sum their closed forms at a symmetric point") {
    GaussianMixture m;
    GaussianComponent left, right;
    left.mean = Vec2(0.3, 0.5);
    right.mean = Vec2(0.7, 0.5);
    left.covariance = right.covariance = Mat2::Identity() * 0.01;
    left.weight = right.weight = 0.5;
    m.components = {left, right};
    m.validate();

    const Vec2 x(0.5, 0.5);  // equidistant from both means
    const double expected = 0.5 * gaussian_pdf(x, left.mean, left.covariance) +
                            0.5 * gaussian_pdf(x, right.mean, right.covariance);
    CHECK(mixture_density_at(m, x) == doctest::Approx(expected).epsilon(1e-12));
    // Symmetry makes this exactly twice one contribution.
    CHECK(expected == doctest::Approx(2.0 * 0.5 * gaussian_pdf(x, left.mean, left.covariance))
                          .epsilon(1e-12));
}

TEST_CASE("mixture density is locally Lipschitz") {
    RngState rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        // Eigenvalues >= 4e-3 keep the worst-case gradient below 1e3, so a
        // 1e-9 displacement moves the value by no more than 1e-6.
        const double variance = 4e-3 + 0.02 * rng.next_double();
        const GaussianMixture m = isotropic_mixture(
            Vec2(0.2 + 0.6 * rng.next_double(), 0.2 + 0.6 * rng.next_double()), variance);
        const Vec2 x(rng.next_double(), rng.next_double());
        const double angle = 6.283185307179586 * rng.next_double();
        const Vec2 xp = x + 1e-9 * Vec2(std::cos(angle), std::sin(angle));
        CHECK(std::abs(mixture_density_at(m, x) - mixture_density_at(m, xp)) <= 1e-6);
    }
}

TEST_CASE("mixture density honors the closed-form Lipschitz bound") {
    // |grad| <= sum_c w_c e^{-1/2} / (2 pi lambda_min_c^{3/2}) for isotropic
    // components; checked against sampled finite differences.
    RngState rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const double variance = 1e-4 + 1e-3 * rng.next_double();
        const Vec2 mean(0.5, 0.5);
        const GaussianMixture m = isotropic_mixture(mean, variance);
        const double lipschitz =
            std::exp(-0.5) / (2.0 * 3.14159265358979323846 * std::pow(variance, 1.5));
        const double h = 1e-7;
        const Vec2 x(mean.x() + std::sqrt(variance) * (2.0 * rng.next_double() - 1.0),
                     mean.y() + std::sqrt(variance) * (2.0 * rng.next_double() - 1.0));
        const double diff = std::abs(mixture_density_at(m, x + Vec2(h, 0.0)) -
                                     mixture_density_at(m, x));
        CHECK(diff <= lipschitz * h * (1.0 + 1e-6));
    }
}

TEST_CASE("rasterize: centered isotropic Gaussian has 4-fold symmetry") {
    const GaussianMixture m = isotropic_mixture(Vec2(0.5, 0.5), 0.01);
    const GridDensity grid = rasterize(m, DomainBox{}, 16, 16);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            CHECK(std::abs(grid.at(r, c) - grid.at(r, 15 - c)) <= 1e-12);
            CHECK(std::abs(grid.at(r, c) - grid.at(15 - r, c)) <= 1e-12);
        }
    }
}

TEST_CASE("rasterize: total mass is one at any resolution") {
    GaussianMixture m;
    GaussianComponent a, b;
    a.mean = Vec2(0.3, 0.4);
    a.covariance = Mat2::Identity() * 0.02;
    a.weight = 0.6;
    b.mean = Vec2(0.8, 0.7);
    b.covariance << 0.01, 0.002, 0.002, 0.015;
    b.weight = 0.4;
    m.components = {a, b};
    m.validate();

    for (auto [w, h] : {std::pair{1, 1}, {3, 7}, {32, 32}, {400, 400}}) {
        const GridDensity grid = rasterize(m, DomainBox{}, w, h);
        double total = 0.0;
        for (double v : grid.mass) total += v;
        CHECK(std::abs(total - 1.0) <= 1e-10);
        grid.validate();
    }
}

TEST_CASE("rasterize matches a 256-point quadrature oracle on a coarse grid") {
    const double variance = 0.09;  // sigma = 0.3
    const Vec2 mean(0.5, 0.5);
    const GaussianMixture m = isotropic_mixture(mean, variance);
    const GridDensity grid = rasterize(m, DomainBox{}, 4, 4);

    // Oracle: 16x16 midpoint tensor quadrature per cell, renormalized.
    std::vector<double> oracle(16, 0.0);
    const double cell = 0.25;
    const double sub = cell / 16.0;
    double total = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            double acc = 0.0;
            for (int sr = 0; sr < 16; ++sr) {
                for (int sc = 0; sc < 16; ++sc) {
                    const Vec2 x(c * cell + (sc + 0.5) * sub, r * cell + (sr + 0.5) * sub);
                    acc += gaussian_pdf(x, mean, Mat2::Identity() * variance) * sub * sub;
                }
            }
            oracle[r * 4 + c] = acc;
            total += acc;
        }
    }
    for (double& v : oracle) v /= total;

    for (int i = 0; i < 16; ++i) {
        CHECK(grid.mass[i] == doctest::Approx(oracle[i]).epsilon(0.05));
    }
}

TEST_CASE("rasterize rejects a mixture entirely outside the box") {
    const GaussianMixture m = isotropic_mixture(Vec2(500.0, 500.0), 1e-4);
    CHECK_THROWS_AS(rasterize(m, DomainBox{}, 8, 8), std::runtime_error);
}

TEST_CASE("GridDensity invariants") {
    GridDensity g;
    g.width = 2;
    g.height = 1;
    g.mass = {0.5, 0.5};
    g.validate();

    SUBCASE("negative mass rejected") {
        g.mass = {1.5, -0.5};
        CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    }
    SUBCASE("total must be one") {
        g.mass = {0.5, 0.4};
        CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    }
    SUBCASE("size must match dimensions") {
        g.mass = {1.0};
        CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    }
}

TEST_CASE("PointCloud and ParticleState require in-box positions") {
    PointCloud cloud;
    cloud.positions = {Vec2(0.5, 0.5), Vec2(1.5, 0.5)};
    CHECK_THROWS_AS(cloud.validate(), std::invalid_argument);

    ParticleState state;
    state.positions.clear();
    CHECK_THROWS_AS(state.validate(), std::invalid_argument);

    state.positions = {Vec2(0.0, 0.0), Vec2(1.0, 1.0)};  // boundary counts as inside
    state.validate();
}
