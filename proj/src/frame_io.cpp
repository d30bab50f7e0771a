#include "otswarm/frame_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace otswarm {

namespace {

const char kFramesHeader[] = "k,t,particle_id,x,y,target_x,target_y";
const char kMetricsHeader[] = "k,t,w2_sq,control_energy,sinkhorn_iters,marginal_residual";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s, const std::string& path, int line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw IoError(path + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

void write_frames_csv(const Trajectory& trajectory, std::ostream& out) {
    out << "# delta_t=" << fmt17(trajectory.delta_t) << "\n";
    out << kFramesHeader << "\n";
    for (const Frame& frame : trajectory.frames) {
        for (std::size_t i = 0; i < frame.positions.size(); ++i) {
            out << frame.k << ',' << fmt17(frame.t) << ',' << i << ','
                << fmt17(frame.positions[i].x()) << ',' << fmt17(frame.positions[i].y()) << ','
                << fmt17(frame.targets[i].x()) << ',' << fmt17(frame.targets[i].y()) << '\n';
        }
    }
}

void write_metrics_csv(const Trajectory& trajectory, std::ostream& out) {
    out << kMetricsHeader << "\n";
    for (const Frame& frame : trajectory.frames) {
        out << frame.k << ',' << fmt17(frame.t) << ',' << fmt17(frame.w2_sq_estimate) << ','
            << fmt17(frame.control_energy) << ',' << frame.sinkhorn_iterations << ','
            << fmt17(frame.marginal_residual) << '\n';
    }
}

void write_frames_file(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_frames_csv(trajectory, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

void write_metrics_file(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_metrics_csv(trajectory, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

Trajectory read_frames_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);

    Trajectory trajectory;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string prefix = "# delta_t=";
            if (line.compare(0, prefix.size(), prefix) == 0) {
                trajectory.delta_t = parse_double(line.substr(prefix.size()), path, line_no);
            }
            continue;
        }
        if (!saw_header) {
            if (line != kFramesHeader) {
                throw IoError(path + ": unexpected frames header '" + line + "'");
            }
            saw_header = true;
            continue;
        }

        const auto fields = split_csv(line);
        if (fields.size() != 7) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected 7 fields");
        }
        const int k = static_cast<int>(parse_double(fields[0], path, line_no));
        const double t = parse_double(fields[1], path, line_no);
        if (trajectory.frames.empty() || trajectory.frames.back().k != k) {
            Frame frame;
            frame.k = k;
            frame.t = t;
            trajectory.frames.push_back(std::move(frame));
        }
        Frame& frame = trajectory.frames.back();
        frame.positions.emplace_back(parse_double(fields[3], path, line_no),
                                     parse_double(fields[4], path, line_no));
        frame.targets.emplace_back(parse_double(fields[5], path, line_no),
                                   parse_double(fields[6], path, line_no));
    }
    if (!saw_header) throw IoError(path + ": missing frames header");
    return trajectory;
}

}  // namespace otswarm
