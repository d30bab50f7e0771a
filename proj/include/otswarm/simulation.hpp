#pragma once

#include "otswarm/controller.hpp"
#include "otswarm/demand.hpp"
#include "otswarm/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace otswarm {

struct GridSpec {
    int width = 400;
    int height = 400;
};

/// Step count, end time, or both (checked for consistency against delta_t).
struct Horizon {
    std::optional<int> n_steps;
    std::optional<double> end_time;

    int resolve_steps(double delta_t) const;  // throws on inconsistency
};

struct OutputSpec {
    std::string frames_path = "frames.csv";
    std::string metrics_path = "metrics.csv";
    bool render = false;
    int render_every = 1;
};

struct SimConfig {
    DomainBox domain;
    GridSpec grid;
    int n_particles = 0;
    ControllerParams controller;
    DemandSpec demand;
    GaussianMixture initial_resource;
    Horizon horizon;
    std::uint64_t seed = 0;
    OutputSpec output;

    void validate() const;
};

/// Snapshot of the swarm at t = k * delta_t, with the assignment solved
/// against a fresh demand sample at that time. control_energy is the energy
/// of the exponential step from this state over the next delta_t.
struct Frame {
    int k = 0;
    double t = 0.0;
    std::vector<Vec2> positions;
    std::vector<Vec2> targets;
    double w2_sq_estimate = 0.0;
    double control_energy = 0.0;
    int sinkhorn_iterations = 0;
    double marginal_residual = 0.0;
};

struct Trajectory {
    double delta_t = 0.0;
    std::vector<Frame> frames;  // frames[k] is the state at t = k * delta_t
    /// Left-endpoint estimate of the tracking objective over the applied
    /// steps: sum_k (delta_t * w2_sq + alpha^2 * control_energy).
    double objective = 0.0;
    int nonconvergence_warnings = 0;
};

/// Samples the initial resource, then runs K steps of the controller loop:
/// re-rasterize and re-sample the demand at each step time, solve the
/// assignment, record a frame, flow the particles. The returned trajectory
/// holds K+1 frames; the final frame's assignment is solved but not applied.
Trajectory run_simulation(const SimConfig& config);

}  // namespace otswarm
