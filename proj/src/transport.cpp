#include "otswarm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace otswarm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log sum_k exp(x_k), stabilized by the running maximum. Entries may be
/// -inf (zero-mass terms); an all -inf input yields -inf.
double log_sum_exp(const Eigen::VectorXd& x) {
    const double m = x.maxCoeff();
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        s += std::exp(x[k] - m);
    }
    return m + std::log(s);
}

Eigen::VectorXd safe_log(const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[i] = v[i] > 0.0 ? std::log(v[i]) : kNegInf;
    }
    return out;
}

void check_marginal(const Eigen::VectorXd& v, const char* name) {
    if (v.size() == 0) {
        throw std::invalid_argument(std::string("sinkhorn: ") + name + " is empty");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0)) {
            throw std::invalid_argument(std::string("sinkhorn: ") + name +
                                        " entries must be nonnegative");
        }
        sum += v[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string("sinkhorn: ") + name + " must sum to 1");
    }
}

}  // namespace

CostMatrix cost_matrix(const std::vector<Vec2>& source, const std::vector<Vec2>& target) {
    if (source.empty() || target.empty()) {
        throw std::invalid_argument("cost_matrix: clouds must be nonempty");
    }
    CostMatrix C(source.size(), target.size());
    for (std::size_t j = 0; j < target.size(); ++j) {
        for (std::size_t i = 0; i < source.size(); ++i) {
            C(i, j) = (source[i] - target[j]).squaredNorm();
        }
    }
    return C;
}

CostMatrix cost_matrix(const PointCloud& source, const PointCloud& target) {
    return cost_matrix(source.positions, target.positions);
}

TransportPlan sinkhorn(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const CostMatrix& C, double epsilon, double tol, int max_iter) {
    check_marginal(a, "a");
    check_marginal(b, "b");
    if (C.rows() != a.size() || C.cols() != b.size()) {
        throw std::invalid_argument("sinkhorn: cost matrix shape does not match marginals");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("sinkhorn: epsilon must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("sinkhorn: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("sinkhorn: max_iter must be >= 1");

    const Eigen::Index n = C.rows();
    const Eigen::Index m = C.cols();
    const double inv_eps = 1.0 / epsilon;
    const Eigen::VectorXd log_a = safe_log(a);
    const Eigen::VectorXd log_b = safe_log(b);

    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd row_scratch(m);
    Eigen::VectorXd col_scratch(n);
    // row_lse[i] = logsumexp_j((g_j - C_ij)/eps + log b_j); reused between the
    // residual check and the next f-update.
    Eigen::VectorXd row_lse(n);

    auto compute_row_lse = [&]() {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                row_scratch[j] = (g[j] - C(i, j)) * inv_eps + log_b[j];
            }
            row_lse[i] = log_sum_exp(row_scratch);
        }
    };

    // First f-update against g = 0.
    compute_row_lse();
    for (Eigen::Index i = 0; i < n; ++i) f[i] = -epsilon * row_lse[i];

    int iterations = 0;
    bool hit_tol = false;
    for (int it = 1; it <= max_iter; ++it) {
        // g-update: makes the column sums exact for the current f.
        for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                col_scratch[i] = (f[i] - C(i, j)) * inv_eps + log_a[i];
            }
            g[j] = -epsilon * log_sum_exp(col_scratch);
        }

        // Row violation of the current (f, g) iterate; the column violation
        // is zero by construction after the g-update.
        compute_row_lse();
        double residual = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double row_sum = std::exp(f[i] * inv_eps + row_lse[i] + log_a[i]);
            residual = std::max(residual, std::abs(row_sum - a[i]));
        }

        iterations = it;
        if (residual <= tol) {
            hit_tol = true;
            break;
        }
        if (it == max_iter) break;

        // f-update beginning the next sweep reuses row_lse.
        for (Eigen::Index i = 0; i < n; ++i) f[i] = -epsilon * row_lse[i];
    }

    TransportPlan plan;
    plan.coupling.resize(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            plan.coupling(i, j) =
                std::exp((f[i] + g[j] - C(i, j)) * inv_eps + log_a[i] + log_b[j]);
        }
    }
    plan.source_marginal = a;
    plan.target_marginal = b;
    plan.epsilon = epsilon;
    plan.f = f;
    plan.g = g;
    plan.iterations_used = iterations;

    const double row_violation = (plan.coupling.rowwise().sum() - a).cwiseAbs().maxCoeff();
    const double col_violation =
        (plan.coupling.colwise().sum().transpose() - b).cwiseAbs().maxCoeff();
    plan.marginal_residual = std::max(row_violation, col_violation);
    plan.converged = hit_tol;
    return plan;
}

AssignmentTargets barycentric_map(const TransportPlan& plan, const PointCloud& target) {
    if (plan.coupling.cols() != static_cast<Eigen::Index>(target.positions.size())) {
        throw std::invalid_argument("barycentric_map: plan columns do not match target size");
    }
    AssignmentTargets out;
    out.targets.reserve(plan.coupling.rows());
    for (Eigen::Index i = 0; i < plan.coupling.rows(); ++i) {
        double wsum = 0.0;
        Vec2 acc(0.0, 0.0);
        for (Eigen::Index j = 0; j < plan.coupling.cols(); ++j) {
            const double w = plan.coupling(i, j);
            wsum += w;
            acc += w * target.positions[j];
        }
        if (wsum < 1e-300) {
            throw std::runtime_error("barycentric_map: numerically dead row " +
                                     std::to_string(i));
        }
        out.targets.push_back(acc / wsum);
    }
    return out;
}

double plan_cost(const TransportPlan& plan, const CostMatrix& C) {
    if (plan.coupling.rows() != C.rows() || plan.coupling.cols() != C.cols()) {
        throw std::invalid_argument("plan_cost: shape mismatch");
    }
    return (plan.coupling.array() * C.array()).sum();
}

Assignment exact_assignment(const PointCloud& source, const PointCloud& target) {
    const std::size_t n = source.positions.size();
    if (n != target.positions.size()) {
        throw std::invalid_argument("exact_assignment: clouds must have equal size");
    }
    if (n == 0) throw std::invalid_argument("exact_assignment: clouds must be nonempty");
    if (n > 8) {
        throw std::invalid_argument("exact_assignment: exhaustive oracle is capped at 8 points");
    }

    const CostMatrix C = cost_matrix(source, target);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    Assignment best;
    best.permutation = perm;
    best.mean_cost = std::numeric_limits<double>::infinity();
    // Lexicographic enumeration; strict improvement keeps the smallest sigma
    // among ties.
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) cost += C(i, perm[i]);
        if (cost < best.mean_cost) {
            best.mean_cost = cost;
            best.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    best.mean_cost /= static_cast<double>(n);
    return best;
}

}  // namespace otswarm
