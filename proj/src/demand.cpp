#include "otswarm/demand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otswarm {

namespace {

GaussianMixture renormalized(GaussianMixture mixture) {
    double total = 0.0;
    for (const auto& c : mixture.components) total += c.weight;
    if (!(total > 0.0)) {
        throw std::runtime_error("demand_at: evaluated mixture has zero total weight");
    }
    for (auto& c : mixture.components) c.weight /= total;
    return mixture;
}

}  // namespace

void validate_demand(const DemandSpec& spec) {
    if (const auto* s = std::get_if<StaticDemand>(&spec)) {
        s->mixture.validate();
    } else if (const auto* fd = std::get_if<FadingDemand>(&spec)) {
        fd->left.validate();
        fd->right.validate();
        if (!(fd->fade_start < fd->fade_end)) {
            throw std::invalid_argument("FadingDemand: fade_start must be below fade_end");
        }
    } else if (const auto* cv = std::get_if<ConstantVelocityDemand>(&spec)) {
        cv->base.validate();
        if (cv->velocities.size() != cv->base.components.size()) {
            throw std::invalid_argument(
                "ConstantVelocityDemand: needs one velocity per component");
        }
        if (!(cv->departure_time >= 0.0)) {
            throw std::invalid_argument("ConstantVelocityDemand: departure_time must be >= 0");
        }
    }
}

GaussianMixture demand_at(const DemandSpec& spec, double t, const DomainBox& box) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("demand_at: t must be >= 0");
    }

    if (const auto* s = std::get_if<StaticDemand>(&spec)) {
        return s->mixture;
    }

    if (const auto* fd = std::get_if<FadingDemand>(&spec)) {
        const double s =
            std::clamp((t - fd->fade_start) / (fd->fade_end - fd->fade_start), 0.0, 1.0);
        GaussianMixture out;
        out.components.reserve(fd->left.components.size() + fd->right.components.size());
        for (auto c : fd->left.components) {
            c.weight *= 1.0 - s;
            out.components.push_back(c);
        }
        for (auto c : fd->right.components) {
            c.weight *= s;
            out.components.push_back(c);
        }
        // Zero-weight sides stay in the component list; rasterization ignores
        // them and the mixture keeps a fixed layout across time.
        return renormalized(out);
    }

    const auto& cv = std::get<ConstantVelocityDemand>(spec);
    const double travel = std::max(0.0, t - cv.departure_time);
    GaussianMixture out = cv.base;
    for (std::size_t i = 0; i < out.components.size(); ++i) {
        out.components[i].mean = box.clamp(out.components[i].mean + travel * cv.velocities[i]);
    }
    return renormalized(out);
}

}  // namespace otswarm
