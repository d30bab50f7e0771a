#pragma once

#include "otswarm/geometry.hpp"

#include <Eigen/Core>

#include <vector>

namespace otswarm {

/// Entry (i, j) holds the squared Euclidean distance between source point i
/// and target point j.
using CostMatrix = Eigen::MatrixXd;

/// Entropic coupling between two discrete marginals, together with the dual
/// potentials that generated it:
///   pi_ij = exp((f_i + g_j - C_ij) / epsilon) * a_i * b_j.
struct TransportPlan {
    Eigen::MatrixXd coupling;
    Eigen::VectorXd source_marginal;  // a, sums to one
    Eigen::VectorXd target_marginal;  // b, sums to one
    double epsilon = 0.0;
    Eigen::VectorXd f;  // dual potential, length rows
    Eigen::VectorXd g;  // dual potential, length cols
    int iterations_used = 0;
    double marginal_residual = 0.0;  // worst L-inf violation of either marginal
    bool converged = false;
};

/// Per-source-index barycentric targets, aligned with ParticleState indices.
struct AssignmentTargets {
    std::vector<Vec2> targets;
};

/// Exhaustive optimal assignment between equal-size uniform clouds.
struct Assignment {
    std::vector<int> permutation;  // source i -> target permutation[i]
    double mean_cost = 0.0;        // (1/N) * sum_i |x_i - y_perm(i)|^2
};

CostMatrix cost_matrix(const std::vector<Vec2>& source, const std::vector<Vec2>& target);
CostMatrix cost_matrix(const PointCloud& source, const PointCloud& target);

/// Log-domain Sinkhorn iteration for the entropy-regularized Kantorovich
/// problem. Alternates dual updates until the worst L-inf marginal violation
/// drops to tol or max_iter full sweeps have run. The plan is returned either
/// way; `converged` signals which case occurred.
TransportPlan sinkhorn(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const CostMatrix& C, double epsilon,
                       double tol = 1e-6, int max_iter = 10000);

/// Row-conditional means of the plan: target_i = sum_j pi_ij y_j / sum_j pi_ij.
/// Throws if a row of the coupling carries mass below 1e-300.
AssignmentTargets barycentric_map(const TransportPlan& plan, const PointCloud& target);

/// sum_ij pi_ij C_ij; an epsilon-biased upper estimate of W2^2.
double plan_cost(const TransportPlan& plan, const CostMatrix& C);

/// Brute-force minimum of sum_i |x_i - y_sigma(i)|^2 over all permutations,
/// tie broken toward the lexicographically smallest sigma. Capped at 8 points.
Assignment exact_assignment(const PointCloud& source, const PointCloud& target);

}  // namespace otswarm
