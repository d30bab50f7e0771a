#include "otswarm/simulation.hpp"

#include "otswarm/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otswarm {

int Horizon::resolve_steps(double delta_t) const {
    if (!n_steps && !end_time) {
        throw std::invalid_argument("horizon: needs n_steps or end_time");
    }
    if (n_steps && *n_steps < 0) {
        throw std::invalid_argument("horizon: n_steps must be >= 0");
    }
    if (end_time && !(*end_time >= 0.0)) {
        throw std::invalid_argument("horizon: end_time must be >= 0");
    }
    if (n_steps && end_time) {
        const double implied = *n_steps * delta_t;
        if (std::abs(implied - *end_time) > 1e-9 * std::max(1.0, std::abs(*end_time))) {
            throw std::invalid_argument(
                "horizon: n_steps * delta_t = " + std::to_string(implied) +
                " does not match end_time = " + std::to_string(*end_time));
        }
        return *n_steps;
    }
    if (n_steps) return *n_steps;
    const long long k = std::llround(*end_time / delta_t);
    if (std::abs(k * delta_t - *end_time) > 1e-9 * std::max(1.0, std::abs(*end_time))) {
        throw std::invalid_argument("horizon: end_time must be an integer multiple of delta_t");
    }
    return static_cast<int>(k);
}

void SimConfig::validate() const {
    domain.validate();
    if (grid.width < 1 || grid.height < 1) {
        throw std::invalid_argument("grid: width and height must be >= 1");
    }
    if (n_particles < 1) {
        throw std::invalid_argument("n_particles must be >= 1");
    }
    controller.validate();
    validate_demand(demand);
    initial_resource.validate();
    horizon.resolve_steps(controller.delta_t);
    if (output.render_every < 1) {
        throw std::invalid_argument("output.render_every must be >= 1");
    }
}

Trajectory run_simulation(const SimConfig& config) {
    config.validate();
    const ControllerParams& params = config.controller;
    const int n_steps = config.horizon.resolve_steps(params.delta_t);

    RngState rng(config.seed);

    const GridDensity initial_density =
        rasterize(config.initial_resource, config.domain, config.grid.width, config.grid.height);
    const PointCloud initial_cloud =
        inverse_transform_sample(initial_density, config.n_particles, rng);
    ParticleState state{config.domain, initial_cloud.positions};

    Trajectory trajectory;
    trajectory.delta_t = params.delta_t;
    trajectory.frames.reserve(n_steps + 1);

    for (int k = 0; k <= n_steps; ++k) {
        const double t = k * params.delta_t;
        const GaussianMixture mixture = demand_at(config.demand, t, config.domain);
        const GridDensity demand_density =
            rasterize(mixture, config.domain, config.grid.width, config.grid.height);
        const PointCloud demand_cloud =
            inverse_transform_sample(demand_density, params.n_demand_samples, rng);

        const StepDiagnostics diag = assignment_diagnostics(state, demand_cloud, params);
        if (!diag.sinkhorn_converged) ++trajectory.nonconvergence_warnings;

        Frame frame;
        frame.k = k;
        frame.t = t;
        frame.positions = state.positions;
        frame.targets = diag.targets.targets;
        frame.w2_sq_estimate = diag.w2_sq_estimate;
        frame.control_energy = diag.control_energy;
        frame.sinkhorn_iterations = diag.sinkhorn_iterations;
        frame.marginal_residual = diag.marginal_residual;
        trajectory.frames.push_back(std::move(frame));

        if (k < n_steps) {
            trajectory.objective +=
                params.delta_t * diag.w2_sq_estimate + params.alpha * params.alpha * diag.control_energy;
            state = intermediate_state(state, diag.targets, params.alpha, params.delta_t);
        }
    }
    return trajectory;
}

}  // namespace otswarm
