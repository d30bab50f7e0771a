#pragma once

#include "otswarm/geometry.hpp"
#include "otswarm/transport.hpp"

#include <utility>

namespace otswarm {

struct ControllerParams {
    double alpha = 0.1;          // trade-off weight; time constant of the flow
    double delta_t = 0.1;        // controller timestep
    int n_demand_samples = 500;  // demand points drawn per step
    double epsilon = 0.005;      // Sinkhorn regularization weight
    double tol = 1e-6;           // Sinkhorn marginal tolerance
    int max_iter = 10000;        // Sinkhorn sweep budget

    void validate() const;
};

struct StepDiagnostics {
    double w2_sq_estimate = 0.0;   // plan cost of the entropic coupling
    double control_energy = 0.0;   // integrated mean squared speed over the step
    int sinkhorn_iterations = 0;
    double marginal_residual = 0.0;
    bool sinkhorn_converged = true;
    AssignmentTargets targets;
};

/// Entropic OT solve from Q to the demand cloud (uniform marginals) plus the
/// barycentric targets and step metrics, without moving the particles.
StepDiagnostics assignment_diagnostics(const ParticleState& Q,
                                       const PointCloud& demand_cloud,
                                       const ControllerParams& params);

/// One controller step: solve the assignment, then flow each particle
/// exponentially toward its target over delta_t. Sinkhorn non-convergence is
/// reported in the diagnostics; the step is applied regardless.
std::pair<ParticleState, StepDiagnostics> mpc_step(const ParticleState& Q,
                                                   const PointCloud& demand_cloud,
                                                   const ControllerParams& params);

/// Q_{t+tau} = (1 - e^{-tau/alpha}) * target + e^{-tau/alpha} * Q_t per
/// particle, clamped to the domain box.
ParticleState intermediate_state(const ParticleState& Q, const AssignmentTargets& targets,
                                 double alpha, double tau);

/// U_{t+tau} = (1/alpha) e^{-tau/alpha} (target - Q_t) per particle.
VelocitySample open_loop_velocity(const ParticleState& Q, const AssignmentTargets& targets,
                                  double alpha, double tau);

/// Exact integral over [0, delta_t] of the mean squared open-loop speed:
/// (1/N) sum_i |target_i - Q_i|^2 * (1 - e^{-2 delta_t/alpha}) / (2 alpha).
double control_energy_step(const ParticleState& Q, const AssignmentTargets& targets,
                           double alpha, double delta_t);

}  // namespace otswarm
