#include "otswarm/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace otswarm {

void ControllerParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("ControllerParams: alpha must be positive");
    if (!(delta_t > 0.0)) throw std::invalid_argument("ControllerParams: delta_t must be positive");
    if (n_demand_samples < 1) {
        throw std::invalid_argument("ControllerParams: n_demand_samples must be >= 1");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("ControllerParams: epsilon must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("ControllerParams: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("ControllerParams: max_iter must be >= 1");
}

StepDiagnostics assignment_diagnostics(const ParticleState& Q,
                                       const PointCloud& demand_cloud,
                                       const ControllerParams& params) {
    params.validate();
    if (Q.positions.empty()) throw std::invalid_argument("mpc_step: empty particle state");
    if (demand_cloud.positions.empty()) {
        throw std::invalid_argument("mpc_step: empty demand cloud");
    }

    const Eigen::Index n = static_cast<Eigen::Index>(Q.positions.size());
    const Eigen::Index m = static_cast<Eigen::Index>(demand_cloud.positions.size());
    const CostMatrix C = cost_matrix(Q.positions, demand_cloud.positions);
    const Eigen::VectorXd a = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));

    const TransportPlan plan = sinkhorn(a, b, C, params.epsilon, params.tol, params.max_iter);

    StepDiagnostics diag;
    diag.targets = barycentric_map(plan, demand_cloud);
    diag.w2_sq_estimate = plan_cost(plan, C);
    diag.sinkhorn_iterations = plan.iterations_used;
    diag.marginal_residual = plan.marginal_residual;
    diag.sinkhorn_converged = plan.converged;
    diag.control_energy = control_energy_step(Q, diag.targets, params.alpha, params.delta_t);
    return diag;
}

std::pair<ParticleState, StepDiagnostics> mpc_step(const ParticleState& Q,
                                                   const PointCloud& demand_cloud,
                                                   const ControllerParams& params) {
    StepDiagnostics diag = assignment_diagnostics(Q, demand_cloud, params);
    ParticleState next = intermediate_state(Q, diag.targets, params.alpha, params.delta_t);
    return {std::move(next), std::move(diag)};
}

ParticleState intermediate_state(const ParticleState& Q, const AssignmentTargets& targets,
                                 double alpha, double tau) {
    if (!(alpha > 0.0)) throw std::invalid_argument("intermediate_state: alpha must be positive");
    if (!(tau >= 0.0)) throw std::invalid_argument("intermediate_state: tau must be >= 0");
    if (targets.targets.size() != Q.positions.size()) {
        throw std::invalid_argument("intermediate_state: targets do not match particle count");
    }

    const double decay = std::exp(-tau / alpha);
    const double gain = 1.0 - decay;
    ParticleState out;
    out.box = Q.box;
    out.positions.reserve(Q.positions.size());
    for (std::size_t i = 0; i < Q.positions.size(); ++i) {
        // The combination is convex, so the clamp only absorbs last-ulp
        // rounding at the box boundary.
        out.positions.push_back(
            Q.box.clamp(gain * targets.targets[i] + decay * Q.positions[i]));
    }
    return out;
}

VelocitySample open_loop_velocity(const ParticleState& Q, const AssignmentTargets& targets,
                                  double alpha, double tau) {
    if (!(alpha > 0.0)) throw std::invalid_argument("open_loop_velocity: alpha must be positive");
    if (!(tau >= 0.0)) throw std::invalid_argument("open_loop_velocity: tau must be >= 0");
    if (targets.targets.size() != Q.positions.size()) {
        throw std::invalid_argument("open_loop_velocity: targets do not match particle count");
    }

    const double scale = std::exp(-tau / alpha) / alpha;
    VelocitySample out;
    out.velocities.reserve(Q.positions.size());
    for (std::size_t i = 0; i < Q.positions.size(); ++i) {
        out.velocities.push_back(scale * (targets.targets[i] - Q.positions[i]));
    }
    return out;
}

double control_energy_step(const ParticleState& Q, const AssignmentTargets& targets,
                           double alpha, double delta_t) {
    if (!(alpha > 0.0)) throw std::invalid_argument("control_energy_step: alpha must be positive");
    if (!(delta_t >= 0.0)) {
        throw std::invalid_argument("control_energy_step: delta_t must be >= 0");
    }
    if (targets.targets.size() != Q.positions.size()) {
        throw std::invalid_argument("control_energy_step: targets do not match particle count");
    }

    double mean_sq = 0.0;
    for (std::size_t i = 0; i < Q.positions.size(); ++i) {
        mean_sq += (targets.targets[i] - Q.positions[i]).squaredNorm();
    }
    mean_sq /= static_cast<double>(Q.positions.size());
    return mean_sq * (1.0 - std::exp(-2.0 * delta_t / alpha)) / (2.0 * alpha);
}

}  // namespace otswarm
