#include "harvestsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace harvest::cfg {

namespace {

using nlohmann::json;

constexpr double kDeg = 3.14159265358979323846 / 180.0;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(Fault::ConfigError, path + ": " + what);
}

void expect_keys(const json& node, const std::string& path, const std::set<std::string>& allowed) {
    if (!node.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& item : node.items()) {
        if (!allowed.count(item.key())) {
            fail(path + "." + item.key(), "unknown key");
        }
    }
}

double number(const json& node, const std::string& path) {
    if (!node.is_number()) {
        fail(path, "expected a number");
    }
    return node.get<double>();
}

int integer(const json& node, const std::string& path) {
    if (!node.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return node.get<int>();
}

bool boolean(const json& node, const std::string& path) {
    if (!node.is_boolean()) {
        fail(path, "expected a boolean");
    }
    return node.get<bool>();
}

// [lo, hi] pair in the file; radians out when scale = kDeg.
void read_range(const json& node, const std::string& path, double scale, double& lo, double& hi) {
    if (!node.is_array() || node.size() != 2) {
        fail(path, "expected [min, max]");
    }
    lo = number(node[0], path + "[0]") * scale;
    hi = number(node[1], path + "[1]") * scale;
}

void apply_links(const json& node, const std::string& path, kin::LinkParams& links) {
    expect_keys(node, path, {"d1", "d2", "d3"});
    if (node.contains("d1")) links.d1 = number(node["d1"], path + ".d1");
    if (node.contains("d2")) links.d2 = number(node["d2"], path + ".d2");
    if (node.contains("d3")) links.d3 = number(node["d3"], path + ".d3");
}

void apply_limits(const json& node, const std::string& path, kin::JointLimits& limits) {
    expect_keys(node, path, {"phi_deg", "theta_deg", "d_m"});
    if (node.contains("phi_deg")) {
        read_range(node["phi_deg"], path + ".phi_deg", kDeg, limits.phi_min, limits.phi_max);
    }
    if (node.contains("theta_deg")) {
        read_range(node["theta_deg"], path + ".theta_deg", kDeg, limits.theta_min,
                   limits.theta_max);
    }
    if (node.contains("d_m")) {
        read_range(node["d_m"], path + ".d_m", 1.0, limits.d_min, limits.d_max);
    }
}

void apply_plant(const json& node, const std::string& path, sim::PlantModel& plant) {
    expect_keys(node, path,
                {"pan_rate_limit", "tilt_rate_limit", "gain_bias_phi", "gain_bias_theta",
                 "encoder_counts_per_rev", "pneumatic_tau_s", "pneumatic_speed_limit",
                 "depth_noise_sigma_m"});
    if (node.contains("pan_rate_limit"))
        plant.pan_rate_limit = number(node["pan_rate_limit"], path + ".pan_rate_limit");
    if (node.contains("tilt_rate_limit"))
        plant.tilt_rate_limit = number(node["tilt_rate_limit"], path + ".tilt_rate_limit");
    if (node.contains("gain_bias_phi"))
        plant.gain_bias_phi = number(node["gain_bias_phi"], path + ".gain_bias_phi");
    if (node.contains("gain_bias_theta"))
        plant.gain_bias_theta = number(node["gain_bias_theta"], path + ".gain_bias_theta");
    if (node.contains("encoder_counts_per_rev"))
        plant.encoder_counts_per_rev =
            integer(node["encoder_counts_per_rev"], path + ".encoder_counts_per_rev");
    if (node.contains("pneumatic_tau_s"))
        plant.pneumatic_tau = number(node["pneumatic_tau_s"], path + ".pneumatic_tau_s");
    if (node.contains("pneumatic_speed_limit"))
        plant.pneumatic_speed_limit =
            number(node["pneumatic_speed_limit"], path + ".pneumatic_speed_limit");
    if (node.contains("depth_noise_sigma_m"))
        plant.depth_noise_sigma =
            number(node["depth_noise_sigma_m"], path + ".depth_noise_sigma_m");
}

void apply_gains(const json& node, const std::string& path, sim::CycleOptions& cycle) {
    expect_keys(node, path, {"k1", "k2", "singularity_guard_deg"});
    if (node.contains("k1")) cycle.gains.k1 = number(node["k1"], path + ".k1");
    if (node.contains("k2")) cycle.gains.k2 = number(node["k2"], path + ".k2");
    if (node.contains("singularity_guard_deg"))
        cycle.guard_rad = number(node["singularity_guard_deg"], path + ".singularity_guard_deg") *
                          kDeg;
}

void apply_prismatic(const json& node, const std::string& path, sim::CycleOptions& cycle) {
    expect_keys(node, path, {"kp", "ki", "integral_limit"});
    if (node.contains("kp")) cycle.kp_prismatic = number(node["kp"], path + ".kp");
    if (node.contains("ki")) cycle.ki_prismatic = number(node["ki"], path + ".ki");
    if (node.contains("integral_limit"))
        cycle.prismatic_integral_limit = number(node["integral_limit"], path + ".integral_limit");
}

void apply_timing(const json& node, const std::string& path, sim::TimingBudget& budget) {
    expect_keys(node, path, {"localize_s", "approach_s", "detach_s"});
    if (node.contains("localize_s"))
        budget.localize = number(node["localize_s"], path + ".localize_s");
    if (node.contains("approach_s"))
        budget.approach = number(node["approach_s"], path + ".approach_s");
    if (node.contains("detach_s")) budget.detach = number(node["detach_s"], path + ".detach_s");
}

void apply_sim(const json& node, const std::string& path, sim::CycleOptions& cycle) {
    expect_keys(node, path,
                {"dt_s", "settle_max_s", "settle_tol_m", "success_threshold_m", "log_decimation",
                 "randomize_encoder_phase"});
    if (node.contains("dt_s")) cycle.dt = number(node["dt_s"], path + ".dt_s");
    if (node.contains("settle_max_s"))
        cycle.settle_max = number(node["settle_max_s"], path + ".settle_max_s");
    if (node.contains("settle_tol_m"))
        cycle.settle_tol = number(node["settle_tol_m"], path + ".settle_tol_m");
    if (node.contains("success_threshold_m"))
        cycle.success_threshold = number(node["success_threshold_m"], path + ".success_threshold_m");
    if (node.contains("log_decimation"))
        cycle.log_decimation = integer(node["log_decimation"], path + ".log_decimation");
    if (node.contains("randomize_encoder_phase"))
        cycle.randomize_encoder_phase =
            boolean(node["randomize_encoder_phase"], path + ".randomize_encoder_phase");
}

void apply_home(const json& node, const std::string& path, kin::JointState& home) {
    expect_keys(node, path, {"phi_deg", "theta_deg", "d_m"});
    if (node.contains("phi_deg")) home.phi = number(node["phi_deg"], path + ".phi_deg") * kDeg;
    if (node.contains("theta_deg"))
        home.theta = number(node["theta_deg"], path + ".theta_deg") * kDeg;
    if (node.contains("d_m")) home.d = number(node["d_m"], path + ".d_m");
}

void apply_camera(const json& node, const std::string& path, sim::PerceptionSetup& setup) {
    expect_keys(node, path,
                {"fx", "fy", "cx", "cy", "width", "height", "pixel_sigma_px",
                 "box_half_width_px", "depth_min_m", "depth_max_m", "rotation", "translation"});
    auto& cam = setup.camera;
    if (node.contains("fx")) cam.fx = number(node["fx"], path + ".fx");
    if (node.contains("fy")) cam.fy = number(node["fy"], path + ".fy");
    if (node.contains("cx")) cam.cx = number(node["cx"], path + ".cx");
    if (node.contains("cy")) cam.cy = number(node["cy"], path + ".cy");
    if (node.contains("width")) cam.width = integer(node["width"], path + ".width");
    if (node.contains("height")) cam.height = integer(node["height"], path + ".height");
    if (node.contains("pixel_sigma_px"))
        setup.pixel_sigma = number(node["pixel_sigma_px"], path + ".pixel_sigma_px");
    if (node.contains("box_half_width_px"))
        setup.box_half_px = integer(node["box_half_width_px"], path + ".box_half_width_px");
    if (node.contains("depth_min_m"))
        setup.depth_window.min_m = number(node["depth_min_m"], path + ".depth_min_m");
    if (node.contains("depth_max_m"))
        setup.depth_window.max_m = number(node["depth_max_m"], path + ".depth_max_m");
    if (node.contains("rotation")) {
        const auto& rot = node["rotation"];
        if (!rot.is_array() || rot.size() != 3) {
            fail(path + ".rotation", "expected three rows of three numbers");
        }
        for (int r = 0; r < 3; ++r) {
            if (!rot[r].is_array() || rot[r].size() != 3) {
                fail(path + ".rotation", "expected three rows of three numbers");
            }
            for (int c = 0; c < 3; ++c) {
                setup.cam_to_base.R(r, c) = number(rot[r][c], path + ".rotation");
            }
        }
    }
    if (node.contains("translation")) {
        const auto& t = node["translation"];
        if (!t.is_array() || t.size() != 3) {
            fail(path + ".translation", "expected three numbers");
        }
        for (int i = 0; i < 3; ++i) {
            setup.cam_to_base.t(i) = number(t[i], path + ".translation");
        }
    }
}

void apply_scene(const json& node, const std::string& path, sim::SceneConfig& scene) {
    expect_keys(node, path, {"margin_phi_deg", "margin_theta_deg", "margin_d_m"});
    if (node.contains("margin_phi_deg"))
        scene.margin_phi = number(node["margin_phi_deg"], path + ".margin_phi_deg") * kDeg;
    if (node.contains("margin_theta_deg"))
        scene.margin_theta = number(node["margin_theta_deg"], path + ".margin_theta_deg") * kDeg;
    if (node.contains("margin_d_m"))
        scene.margin_d = number(node["margin_d_m"], path + ".margin_d_m");
}

void apply_compare(const json& node, const std::string& path, RunConfig& cfg) {
    expect_keys(node, path, {"repetitions", "cases"});
    if (node.contains("repetitions"))
        cfg.compare_repetitions = integer(node["repetitions"], path + ".repetitions");
    if (node.contains("cases")) {
        const auto& cases = node["cases"];
        if (!cases.is_array() || cases.empty()) {
            fail(path + ".cases", "expected a nonempty array of [x, y, z] targets");
        }
        cfg.compare_cases.clear();
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto& c = cases[i];
            std::ostringstream os;
            os << path << ".cases[" << i << "]";
            if (!c.is_array() || c.size() != 3) {
                fail(os.str(), "expected [x, y, z]");
            }
            cfg.compare_cases.push_back({number(c[0], os.str()), number(c[1], os.str()),
                                         number(c[2], os.str())});
        }
    }
}

void overlay(const json& root, RunConfig& cfg) {
    expect_keys(root, "config",
                {"links", "limits", "home", "gains", "prismatic", "plant", "camera", "timing",
                 "sim", "scene", "compare", "seed"});
    if (root.contains("links")) apply_links(root["links"], "links", cfg.links);
    if (root.contains("limits")) apply_limits(root["limits"], "limits", cfg.limits);
    if (root.contains("home")) apply_home(root["home"], "home", cfg.cycle.home);
    if (root.contains("gains")) apply_gains(root["gains"], "gains", cfg.cycle);
    if (root.contains("prismatic")) apply_prismatic(root["prismatic"], "prismatic", cfg.cycle);
    if (root.contains("plant")) apply_plant(root["plant"], "plant", cfg.plant);
    if (root.contains("camera")) apply_camera(root["camera"], "camera", cfg.cycle.perception);
    if (root.contains("timing")) apply_timing(root["timing"], "timing", cfg.cycle.budget);
    if (root.contains("sim")) apply_sim(root["sim"], "sim", cfg.cycle);
    if (root.contains("scene")) apply_scene(root["scene"], "scene", cfg.scene);
    if (root.contains("compare")) apply_compare(root["compare"], "compare", cfg);
    if (root.contains("seed")) {
        const auto& s = root["seed"];
        if (!s.is_number_unsigned()) {
            fail("seed", "expected a nonnegative integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
}

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) {
        fail(path, what);
    }
}

} // namespace

RunConfig defaults() {
    RunConfig cfg;
    // Camera 0.2 m behind the base on the workspace centerline, optical axis
    // along base +x.
    cfg.cycle.perception.cam_to_base.R << 0, 0, 1, -1, 0, 0, 0, -1, 0;
    cfg.cycle.perception.cam_to_base.t << -0.2, cfg.links.d2, cfg.links.d1;
    cfg.compare_cases = {
        {0.6876, -0.0505, 0.011},
        {0.5874, -0.1483, 0.3695},
        {0.6936, 0.1938, 0.01},
    };
    return cfg;
}

RunConfig from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Fault::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg = defaults();
    overlay(root, cfg);
    validate(cfg);
    return cfg;
}

RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Fault::IoError, "cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

void validate(const RunConfig& cfg) {
    require(cfg.links.d1 > 0 && cfg.links.d2 > 0 && cfg.links.d3 > 0, "links",
            "link offsets must be positive");
    require(cfg.limits.phi_min < cfg.limits.phi_max, "limits.phi_deg", "min must be below max");
    require(cfg.limits.theta_min < cfg.limits.theta_max, "limits.theta_deg",
            "min must be below max");
    require(cfg.limits.d_min < cfg.limits.d_max, "limits.d_m", "min must be below max");
    require(cfg.limits.d_min >= 0.0, "limits.d_m", "stroke cannot be negative");
    require(cfg.cycle.gains.k1 > 0 && cfg.cycle.gains.k2 > 0, "gains", "gains must be positive");
    require(cfg.cycle.guard_rad > std::max({std::abs(cfg.limits.phi_min), cfg.limits.phi_max,
                                            std::abs(cfg.limits.theta_min),
                                            cfg.limits.theta_max}),
            "gains.singularity_guard_deg", "guard must sit outside the joint limits");
    require(cfg.cycle.kp_prismatic > 0, "prismatic.kp", "must be positive");
    require(cfg.cycle.ki_prismatic >= 0, "prismatic.ki", "cannot be negative");
    require(cfg.cycle.prismatic_integral_limit >= 0, "prismatic.integral_limit",
            "cannot be negative");
    require(cfg.plant.pan_rate_limit > 0 && cfg.plant.tilt_rate_limit > 0, "plant",
            "rate limits must be positive");
    require(cfg.plant.gain_bias_phi > 0 && cfg.plant.gain_bias_theta > 0, "plant",
            "gain bias must be positive");
    require(cfg.plant.encoder_counts_per_rev >= 0, "plant.encoder_counts_per_rev",
            "cannot be negative");
    require(cfg.plant.pneumatic_tau > 0, "plant.pneumatic_tau_s", "must be positive");
    require(cfg.plant.pneumatic_speed_limit > 0, "plant.pneumatic_speed_limit",
            "must be positive");
    require(cfg.plant.depth_noise_sigma >= 0, "plant.depth_noise_sigma_m", "cannot be negative");
    require(cfg.cycle.budget.localize >= 0 && cfg.cycle.budget.detach >= 0, "timing",
            "phase budgets cannot be negative");
    require(cfg.cycle.budget.approach > 0, "timing.approach_s", "must be positive");
    require(cfg.cycle.dt > 0, "sim.dt_s", "must be positive");
    require(cfg.cycle.settle_max >= 0, "sim.settle_max_s", "cannot be negative");
    require(cfg.cycle.settle_tol > 0, "sim.settle_tol_m", "must be positive");
    require(cfg.cycle.success_threshold > 0, "sim.success_threshold_m", "must be positive");
    require(cfg.cycle.log_decimation >= 0, "sim.log_decimation", "cannot be negative");
    require(cfg.cycle.perception.camera.fx > 0 && cfg.cycle.perception.camera.fy > 0, "camera",
            "focal lengths must be positive");
    require(cfg.cycle.perception.camera.width > 0 && cfg.cycle.perception.camera.height > 0,
            "camera", "image size must be positive");
    require(cfg.cycle.perception.box_half_px >= 0, "camera.box_half_width_px",
            "cannot be negative");
    require(cfg.cycle.perception.depth_window.min_m < cfg.cycle.perception.depth_window.max_m,
            "camera", "depth window must be ordered");
    require(cfg.cycle.perception.pixel_sigma >= 0, "camera.pixel_sigma_px", "cannot be negative");
    require(cfg.scene.margin_phi >= 0 && cfg.scene.margin_theta >= 0 && cfg.scene.margin_d >= 0,
            "scene", "margins cannot be negative");
    require(cfg.limits.phi_min + cfg.scene.margin_phi < cfg.limits.phi_max - cfg.scene.margin_phi,
            "scene.margin_phi_deg", "margin swallows the pan range");
    require(cfg.limits.theta_min + cfg.scene.margin_theta <
                cfg.limits.theta_max - cfg.scene.margin_theta,
            "scene.margin_theta_deg", "margin swallows the tilt range");
    require(cfg.limits.d_min + cfg.scene.margin_d < cfg.limits.d_max - cfg.scene.margin_d,
            "scene.margin_d_m", "margin swallows the stroke");
    require(cfg.compare_repetitions >= 1, "compare.repetitions", "must be at least 1");
    require(!cfg.compare_cases.empty(), "compare.cases", "must list at least one target");
    try {
        percep::validate(cfg.cycle.perception.cam_to_base);
    } catch (const Error& e) {
        fail("camera.rotation", e.what());
    }
    try {
        kin::check_limits(cfg.limits, cfg.cycle.home);
    } catch (const Error& e) {
        fail("home", e.what());
    }
}

} // namespace harvest::cfg
