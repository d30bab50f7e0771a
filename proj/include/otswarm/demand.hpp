#pragma once

#include "otswarm/geometry.hpp"

#include <variant>
#include <vector>

namespace otswarm {

/// Fixed mixture for all t.
struct StaticDemand {
    GaussianMixture mixture;
};

/// Linear cross-fade of component weights from `left` to `right` over
/// [fade_start, fade_end]; covariances and means stay put.
struct FadingDemand {
    GaussianMixture left;
    GaussianMixture right;
    double fade_start = 0.0;
    double fade_end = 1.0;
};

/// Components hold still until departure_time, then their means translate at
/// fixed velocities. Means are clipped to the domain box.
struct ConstantVelocityDemand {
    GaussianMixture base;
    double departure_time = 0.0;
    std::vector<Vec2> velocities;  // one per component
};

using DemandSpec = std::variant<StaticDemand, FadingDemand, ConstantVelocityDemand>;

/// Structural checks beyond the member mixtures' own invariants.
void validate_demand(const DemandSpec& spec);

/// Evaluates the demand mixture at time t >= 0. The result always satisfies
/// the GaussianMixture invariants (weights renormalized to one).
GaussianMixture demand_at(const DemandSpec& spec, double t, const DomainBox& box);

}  // namespace otswarm
