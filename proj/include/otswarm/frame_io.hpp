#pragma once

#include "otswarm/simulation.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace otswarm {

/// Filesystem problem; the message carries the path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Frames CSV: one `# delta_t=...` comment line, the header row
/// `k,t,particle_id,x,y,target_x,target_y`, then one row per particle per
/// frame. Floats are written with 17 significant digits (round-trip exact).
void write_frames_csv(const Trajectory& trajectory, std::ostream& out);

/// Metrics CSV: header `k,t,w2_sq,control_energy,sinkhorn_iters,marginal_residual`,
/// one row per frame.
void write_metrics_csv(const Trajectory& trajectory, std::ostream& out);

void write_frames_file(const Trajectory& trajectory, const std::string& path);
void write_metrics_file(const Trajectory& trajectory, const std::string& path);

/// Positions and targets re-read from a frames CSV; metric fields are zero.
Trajectory read_frames_file(const std::string& path);

}  // namespace otswarm
