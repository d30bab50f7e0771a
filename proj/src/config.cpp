#include "otswarm/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace otswarm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path.empty() ? what : path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            fail(join(path, item.key()), "unknown key");
        }
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "missing required key");
    return *it;
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double positive_double(const json& j, const std::string& path) {
    const double v = as_double(j, path);
    if (!(v > 0.0)) fail(path, "must be positive");
    return v;
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Vec2 as_vec2(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected an array of 2 numbers");
    return Vec2(as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]"));
}

Mat2 as_mat2(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected a 2x2 array");
    Mat2 m;
    for (int r = 0; r < 2; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != 2) fail(rp, "expected an array of 2 numbers");
        for (int c = 0; c < 2; ++c) {
            m(r, c) = as_double(j[r][c], rp + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

GaussianMixture parse_mixture(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a nonempty array of mixture components");
    }
    GaussianMixture mixture;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string cp = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_object()) fail(cp, "expected an object");
        check_keys(j[i], {"mean", "covariance", "weight"}, cp);
        GaussianComponent c;
        c.mean = as_vec2(require(j[i], "mean", cp), cp + ".mean");
        c.covariance = as_mat2(require(j[i], "covariance", cp), cp + ".covariance");
        c.weight = as_double(require(j[i], "weight", cp), cp + ".weight");
        mixture.components.push_back(c);
    }
    try {
        mixture.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return mixture;
}

DemandSpec parse_demand(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string type = as_string(require(j, "type", path), join(path, "type"));

    if (type == "static") {
        check_keys(j, {"type", "mixture"}, path);
        StaticDemand d;
        d.mixture = parse_mixture(require(j, "mixture", path), join(path, "mixture"));
        return d;
    }
    if (type == "fading") {
        check_keys(j, {"type", "left", "right", "fade_start", "fade_end"}, path);
        FadingDemand d;
        d.left = parse_mixture(require(j, "left", path), join(path, "left"));
        d.right = parse_mixture(require(j, "right", path), join(path, "right"));
        d.fade_start = as_double(require(j, "fade_start", path), join(path, "fade_start"));
        d.fade_end = as_double(require(j, "fade_end", path), join(path, "fade_end"));
        if (!(d.fade_start < d.fade_end)) {
            fail(join(path, "fade_start"), "must be below fade_end");
        }
        return d;
    }
    if (type == "constant_velocity") {
        check_keys(j, {"type", "base", "departure_time", "velocities"}, path);
        ConstantVelocityDemand d;
        d.base = parse_mixture(require(j, "base", path), join(path, "base"));
        d.departure_time =
            as_double(require(j, "departure_time", path), join(path, "departure_time"));
        if (!(d.departure_time >= 0.0)) fail(join(path, "departure_time"), "must be >= 0");
        const json& vel = require(j, "velocities", path);
        const std::string vp = join(path, "velocities");
        if (!vel.is_array()) fail(vp, "expected an array of 2-vectors");
        for (std::size_t i = 0; i < vel.size(); ++i) {
            d.velocities.push_back(as_vec2(vel[i], vp + "[" + std::to_string(i) + "]"));
        }
        if (d.velocities.size() != d.base.components.size()) {
            fail(vp, "needs exactly one velocity per base component");
        }
        return d;
    }
    fail(join(path, "type"),
         "unknown demand type '" + type + "' (expected static, fading, or constant_velocity)");
}

json dump_mixture(const GaussianMixture& mixture) {
    json arr = json::array();
    for (const auto& c : mixture.components) {
        arr.push_back({{"mean", {c.mean.x(), c.mean.y()}},
                       {"covariance",
                        {{c.covariance(0, 0), c.covariance(0, 1)},
                         {c.covariance(1, 0), c.covariance(1, 1)}}},
                       {"weight", c.weight}});
    }
    return arr;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    check_keys(root,
               {"domain", "grid", "n_particles", "controller", "demand", "initial_resource",
                "horizon", "seed", "output"},
               "");

    SimConfig config;

    if (root.contains("domain")) {
        const json& d = root["domain"];
        if (!d.is_object()) fail("domain", "expected an object");
        check_keys(d, {"lower", "upper"}, "domain");
        config.domain.lower = as_vec2(require(d, "lower", "domain"), "domain.lower");
        config.domain.upper = as_vec2(require(d, "upper", "domain"), "domain.upper");
        for (int k = 0; k < 2; ++k) {
            if (!(config.domain.lower[k] < config.domain.upper[k])) {
                fail("domain", "lower must be strictly below upper in every coordinate");
            }
        }
    }

    {
        const json& g = require(root, "grid", "");
        if (!g.is_object()) fail("grid", "expected an object");
        check_keys(g, {"width", "height"}, "grid");
        config.grid.width = as_int(require(g, "width", "grid"), "grid.width");
        config.grid.height = as_int(require(g, "height", "grid"), "grid.height");
        if (config.grid.width < 1) fail("grid.width", "must be >= 1");
        if (config.grid.height < 1) fail("grid.height", "must be >= 1");
    }

    config.n_particles = as_int(require(root, "n_particles", ""), "n_particles");
    if (config.n_particles < 1) fail("n_particles", "must be >= 1");

    {
        const json& c = require(root, "controller", "");
        if (!c.is_object()) fail("controller", "expected an object");
        check_keys(c, {"alpha", "delta_t", "n_demand_samples", "epsilon", "tol", "max_iter"},
                   "controller");
        config.controller.alpha =
            positive_double(require(c, "alpha", "controller"), "controller.alpha");
        config.controller.delta_t =
            positive_double(require(c, "delta_t", "controller"), "controller.delta_t");
        config.controller.n_demand_samples =
            as_int(require(c, "n_demand_samples", "controller"), "controller.n_demand_samples");
        if (config.controller.n_demand_samples < 1) {
            fail("controller.n_demand_samples", "must be >= 1");
        }
        config.controller.epsilon =
            positive_double(require(c, "epsilon", "controller"), "controller.epsilon");
        if (c.contains("tol")) {
            config.controller.tol = positive_double(c["tol"], "controller.tol");
        }
        if (c.contains("max_iter")) {
            config.controller.max_iter = as_int(c["max_iter"], "controller.max_iter");
            if (config.controller.max_iter < 1) fail("controller.max_iter", "must be >= 1");
        }
    }

    config.demand = parse_demand(require(root, "demand", ""), "demand");
    config.initial_resource =
        parse_mixture(require(root, "initial_resource", ""), "initial_resource");

    {
        const json& h = require(root, "horizon", "");
        if (!h.is_object()) fail("horizon", "expected an object");
        check_keys(h, {"n_steps", "end_time"}, "horizon");
        if (h.contains("n_steps")) {
            config.horizon.n_steps = as_int(h["n_steps"], "horizon.n_steps");
            if (*config.horizon.n_steps < 0) fail("horizon.n_steps", "must be >= 0");
        }
        if (h.contains("end_time")) {
            config.horizon.end_time = as_double(h["end_time"], "horizon.end_time");
            if (!(*config.horizon.end_time >= 0.0)) fail("horizon.end_time", "must be >= 0");
        }
        try {
            config.horizon.resolve_steps(config.controller.delta_t);
        } catch (const std::invalid_argument& e) {
            fail("horizon", e.what());
        }
    }

    if (root.contains("seed")) {
        const json& s = root["seed"];
        if (!s.is_number_unsigned() && !s.is_number_integer()) fail("seed", "expected an integer");
        if (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0) {
            fail("seed", "must be >= 0");
        }
        config.seed = s.get<std::uint64_t>();
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        if (!o.is_object()) fail("output", "expected an object");
        check_keys(o, {"frames_path", "metrics_path", "render", "render_every"}, "output");
        if (o.contains("frames_path")) {
            config.output.frames_path = as_string(o["frames_path"], "output.frames_path");
        }
        if (o.contains("metrics_path")) {
            config.output.metrics_path = as_string(o["metrics_path"], "output.metrics_path");
        }
        if (o.contains("render")) {
            config.output.render = as_bool(o["render"], "output.render");
        }
        if (o.contains("render_every")) {
            config.output.render_every = as_int(o["render_every"], "output.render_every");
            if (config.output.render_every < 1) fail("output.render_every", "must be >= 1");
        }
    }

    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return config;
}

std::string dump_config(const SimConfig& config) {
    const int n_steps = config.horizon.resolve_steps(config.controller.delta_t);

    json demand;
    if (const auto* s = std::get_if<StaticDemand>(&config.demand)) {
        demand = {{"type", "static"}, {"mixture", dump_mixture(s->mixture)}};
    } else if (const auto* fd = std::get_if<FadingDemand>(&config.demand)) {
        demand = {{"type", "fading"},
                  {"left", dump_mixture(fd->left)},
                  {"right", dump_mixture(fd->right)},
                  {"fade_start", fd->fade_start},
                  {"fade_end", fd->fade_end}};
    } else {
        const auto& cv = std::get<ConstantVelocityDemand>(config.demand);
        json vel = json::array();
        for (const auto& v : cv.velocities) vel.push_back({v.x(), v.y()});
        demand = {{"type", "constant_velocity"},
                  {"base", dump_mixture(cv.base)},
                  {"departure_time", cv.departure_time},
                  {"velocities", vel}};
    }

    const json root = {
        {"domain",
         {{"lower", {config.domain.lower.x(), config.domain.lower.y()}},
          {"upper", {config.domain.upper.x(), config.domain.upper.y()}}}},
        {"grid", {{"width", config.grid.width}, {"height", config.grid.height}}},
        {"n_particles", config.n_particles},
        {"controller",
         {{"alpha", config.controller.alpha},
          {"delta_t", config.controller.delta_t},
          {"n_demand_samples", config.controller.n_demand_samples},
          {"epsilon", config.controller.epsilon},
          {"tol", config.controller.tol},
          {"max_iter", config.controller.max_iter}}},
        {"demand", demand},
        {"initial_resource", dump_mixture(config.initial_resource)},
        {"horizon", {{"n_steps", n_steps}, {"end_time", n_steps * config.controller.delta_t}}},
        {"seed", config.seed},
        {"output",
         {{"frames_path", config.output.frames_path},
          {"metrics_path", config.output.metrics_path},
          {"render", config.output.render},
          {"render_every", config.output.render_every}}}};
    return root.dump(2) + "\n";
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace otswarm
