#include "otswarm/simulation.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace otswarm;
using test_util::isotropic_mixture;

namespace {

SimConfig small_static_config() {
    SimConfig config;
    config.grid = {48, 48};
    config.n_particles = 10;
    config.controller.alpha = 0.2;
    config.controller.delta_t = 0.1;
    config.controller.n_demand_samples = 120;
    config.controller.epsilon = 0.01;
    config.demand = StaticDemand{isotropic_mixture(Vec2(0.7, 0.7), 0.008)};
    config.initial_resource = isotropic_mixture(Vec2(0.3, 0.3), 0.005);
    config.horizon.n_steps = 20;
    config.seed = 7;
    return config;
}

}  // namespace

TEST_CASE("horizon resolution") {
    Horizon h;
    CHECK_THROWS_AS(h.resolve_steps(0.1), std::invalid_argument);

    h.n_steps = 50;
    CHECK(h.resolve_steps(0.1) == 50);

    h.end_time = 5.0;
    CHECK(h.resolve_steps(0.1) == 50);

    h.end_time = 4.0;  // inconsistent with n_steps * delta_t
    CHECK_THROWS_AS(h.resolve_steps(0.1), std::invalid_argument);

    h.n_steps.reset();
    CHECK(h.resolve_steps(0.1) == 40);

    h.end_time = 4.05;  // not a multiple of delta_t
    CHECK_THROWS_AS(h.resolve_steps(0.1), std::invalid_argument);
}

TEST_CASE("K = 0 yields only the initial frame with the swarm unmoved") {
    SimConfig config = small_static_config();
    config.horizon.n_steps = 0;
    const Trajectory traj = run_simulation(config);
    REQUIRE(traj.frames.size() == 1);
    CHECK(traj.frames[0].k == 0);
    CHECK(traj.frames[0].t == 0.0);
    CHECK(traj.objective == 0.0);
    CHECK(traj.frames[0].positions.size() == 10);
    CHECK(traj.frames[0].targets.size() == 10);
}

TEST_CASE("frame times are exact step multiples and counts match the horizon") {
    SimConfig config = small_static_config();
    config.horizon.n_steps = 7;
    const Trajectory traj = run_simulation(config);
    REQUIRE(traj.frames.size() == 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(traj.frames[k].k == k);
        CHECK(traj.frames[k].t == k * config.controller.delta_t);
        CHECK(traj.frames[k].positions.size() == 10);
    }
}

TEST_CASE("static scenario: swarm settles onto the demand") {
    const SimConfig config = small_static_config();
    const Trajectory traj = run_simulation(config);
    REQUIRE(traj.frames.size() == 21);

    // Tracking error collapses from the initial separation.
    CHECK(traj.frames.back().w2_sq_estimate < 0.2 * traj.frames.front().w2_sq_estimate);

    // Mean speed over the first few steps decays (transient dominates noise).
    auto mean_speed = [&](int k) {
        double s = 0.0;
        for (std::size_t i = 0; i < traj.frames[k].positions.size(); ++i) {
            s += (traj.frames[k + 1].positions[i] - traj.frames[k].positions[i]).norm();
        }
        return s / (traj.frames[k].positions.size() * config.controller.delta_t);
    };
    CHECK(mean_speed(1) < mean_speed(0));
    CHECK(mean_speed(2) < mean_speed(1));

    // Every recorded position stays in the domain.
    for (const Frame& frame : traj.frames) {
        for (const Vec2& p : frame.positions) CHECK(config.domain.contains(p));
        CHECK(frame.w2_sq_estimate >= 0.0);
        CHECK(frame.control_energy >= 0.0);
    }

    CHECK(traj.objective > 0.0);
    CHECK(traj.nonconvergence_warnings == 0);
}

TEST_CASE("identical seeds give identical trajectories") {
    const SimConfig config = small_static_config();
    const Trajectory a = run_simulation(config);
    const Trajectory b = run_simulation(config);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t k = 0; k < a.frames.size(); ++k) {
        for (std::size_t i = 0; i < a.frames[k].positions.size(); ++i) {
            CHECK(a.frames[k].positions[i] == b.frames[k].positions[i]);
            CHECK(a.frames[k].targets[i] == b.frames[k].targets[i]);
        }
        CHECK(a.frames[k].w2_sq_estimate == b.frames[k].w2_sq_estimate);
    }
}

TEST_CASE("sinkhorn non-convergence is collected as warnings, not failures") {
    SimConfig config = small_static_config();
    config.controller.max_iter = 1;
    config.controller.tol = 1e-14;
    config.horizon.n_steps = 3;
    const Trajectory traj = run_simulation(config);
    CHECK(traj.nonconvergence_warnings == 4);  // one per frame, including the terminal solve
    CHECK(traj.frames.size() == 4);
}

TEST_CASE("constant-velocity scenario: particles trail their targets at a steady distance") {
    SimConfig config;
    config.grid = {64, 64};
    config.n_particles = 8;
    config.controller.alpha = 0.5;
    config.controller.delta_t = 0.05;
    config.controller.n_demand_samples = 150;
    config.controller.epsilon = 0.005;

    ConstantVelocityDemand demand;
    demand.base = isotropic_mixture(Vec2(0.25, 0.5), 0.003);
    demand.departure_time = 0.0;
    demand.velocities = {Vec2(0.12, 0.0)};
    config.demand = demand;
    config.initial_resource = isotropic_mixture(Vec2(0.25, 0.5), 0.003);
    config.horizon.n_steps = 60;
    config.seed = 99;

    const Trajectory traj = run_simulation(config);

    auto mean_lag = [&](int from, int to) {
        double s = 0.0;
        int count = 0;
        for (int k = from; k < to; ++k) {
            for (std::size_t i = 0; i < traj.frames[k].positions.size(); ++i) {
                s += (traj.frames[k].targets[i] - traj.frames[k].positions[i]).norm();
                ++count;
            }
        }
        return s / count;
    };

    // After the transient the lag levels off near alpha * v = 0.06; two late
    // windows agree and neither decays toward zero.
    const double mid = mean_lag(25, 40);
    const double late = mean_lag(45, 60);
    CHECK(std::abs(late - mid) <= 0.25 * mid);
    const double expected = config.controller.alpha * 0.12;
    CHECK(late > 0.5 * expected);
    CHECK(late < 2.0 * expected);
}

TEST_CASE("config validation rejects structural errors") {
    SimConfig config = small_static_config();
    config.n_particles = 0;
    CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);

    config = small_static_config();
    config.grid.width = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_static_config();
    config.output.render_every = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
