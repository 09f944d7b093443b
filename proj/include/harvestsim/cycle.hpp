#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "harvestsim/control.hpp"
#include "harvestsim/perception.hpp"
#include "harvestsim/plant.hpp"

namespace harvest::sim {

enum class Phase { Idle, Localize, Approach, Detach, Return, Done, Failed };

enum class ControllerKind { Proposed, OpenLoop, Position };

const char* phase_name(Phase p);
const char* controller_name(ControllerKind k);
ControllerKind controller_from_name(const std::string& name);

struct TimingBudget {
    double localize = 0.3; // s
    double approach = 2.0; // s, quintic horizon; settling may extend it
    double detach = 1.0;   // s
};

struct PhaseDurations {
    double localize = 0.0;
    double approach = 0.0;
    double detach = 0.0;
    double retreat = 0.0;
};

struct LogRow {
    double t = 0.0;
    double phi = 0.0;
    double theta = 0.0;
    double d = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double y_r = 0.0;
    double z_r = 0.0;
    double e_y = 0.0;
    double e_z = 0.0;
    double V = 0.0;
    double omega_phi = 0.0;
    double omega_theta = 0.0;
    double u_prismatic = 0.0;
};

struct PerceptionSetup {
    percep::CameraIntrinsics camera;
    percep::RigidTransform cam_to_base;
    percep::DepthWindow depth_window;
    double pixel_sigma = 0.0;
    int box_half_px = 4;
};

struct CycleOptions {
    ctl::Gains gains;
    double kp_prismatic = 12.0;
    double ki_prismatic = 2.0;
    double prismatic_integral_limit = 0.025;
    double guard_rad = ctl::default_guard_rad();
    TimingBudget budget;
    double dt = 1e-3;
    double settle_max = 0.5;        // s past the quintic horizon
    double settle_tol = 1e-3;       // m, measured distance that ends settling
    double success_threshold = 0.02; // m, against the true target
    int log_decimation = 1; // keep every k-th row; 0 disables logging
    kin::JointState home;
    PerceptionSetup perception;
    bool use_perception = true; // false hands the true target to the controller
    bool randomize_encoder_phase = true;
};

struct TrialRecord {
    kin::CartesianPoint target_true;
    kin::CartesianPoint target_perceived;
    ControllerKind controller = ControllerKind::Proposed;
    double final_error = 0.0; // m, true end effector to true target at grasp
    bool success = false;
    Phase end_phase = Phase::Idle;
    std::string failure = ""; // empty on success
    PhaseDurations durations;
    std::vector<LogRow> log;
    std::vector<std::pair<double, Phase>> phase_log; // entry times
};

// One pick attempt: localize, approach under the chosen controller, detach,
// return. Failures (unreachable target, limit breach, guard trip) mark the
// record Failed instead of propagating.
TrialRecord run_harvest_cycle(const kin::LinkParams& links, const kin::JointLimits& limits,
                              const kin::CartesianPoint& target_true, ControllerKind kind,
                              const PlantModel& plant, const CycleOptions& opt,
                              std::uint64_t seed);

// Joint-box margins for target sampling, keeping perceived targets reachable
// under sensor noise.
struct SceneConfig {
    double margin_phi = 2.0 * 3.14159265358979323846 / 180.0;   // rad
    double margin_theta = 2.0 * 3.14159265358979323846 / 180.0; // rad
    double margin_d = 0.05;                                     // m
};

struct BatchResult {
    std::vector<TrialRecord> trials;
    int n = 0;
    double success_rate = 0.0;
    double mean_error = 0.0; // m
    double max_error = 0.0;  // m
    double threshold = 0.0;  // m
    std::uint64_t seed = 0;
    ControllerKind controller = ControllerKind::Proposed;
    PhaseDurations phase_means;
};

// n independent picks on targets sampled inside the margined joint box.
// Trial i draws every random quantity from a stream derived from (seed, i),
// so results do not depend on execution order.
BatchResult run_batch(const kin::LinkParams& links, const kin::JointLimits& limits,
                      const SceneConfig& scene, int n, ControllerKind kind,
                      const PlantModel& plant, const CycleOptions& opt, std::uint64_t seed);

struct ComparisonRow {
    int case_index = 0;
    kin::CartesianPoint target;
    ControllerKind controller = ControllerKind::Proposed;
    bool reachable = true;
    double mean_error_mm = 0.0;
    double std_mm = 0.0;
    int repetitions = 0;
};

// Benchmarks the three controller modes on fixed targets, `repetitions` runs
// each. Targets are handed over directly (no camera); per-repetition encoder
// phase redraws supply the run-to-run spread. Unreachable targets are flagged
// per row rather than failing the table.
std::vector<ComparisonRow> compare_controllers(const kin::LinkParams& links,
                                               const kin::JointLimits& limits,
                                               const std::vector<kin::CartesianPoint>& cases,
                                               int repetitions, const PlantModel& plant,
                                               const CycleOptions& opt, std::uint64_t seed);

} // namespace harvest::sim
