#include "harvestsim/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harvestsim/trajectory.hpp"

namespace harvest::sim {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double distance(const kin::CartesianPoint& a, const kin::CartesianPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct CycleRun {
    const kin::LinkParams& links;
    const kin::JointLimits& limits;
    const PlantModel& plant;
    const CycleOptions& opt;
    TrialRecord& rec;
    SimState state;
    ctl::PiController pi;
    long steps_logged = 0;

    CycleRun(const kin::LinkParams& l, const kin::JointLimits& lim, const PlantModel& p,
             const CycleOptions& o, TrialRecord& r)
        : links(l), limits(lim), plant(p), opt(o), rec(r),
          pi(o.kp_prismatic, o.ki_prismatic, o.prismatic_integral_limit,
             p.pneumatic_speed_limit) {
        state.q = o.home;
        refresh_measurement(state, plant);
    }

    void enter(Phase p) { rec.phase_log.emplace_back(state.t, p); }

    void log(double y_r, double z_r, const ctl::TrackingError& e, const AppliedRates& applied) {
        if (opt.log_decimation <= 0) {
            return;
        }
        if (steps_logged++ % opt.log_decimation != 0) {
            return;
        }
        const kin::CartesianPoint p = kin::forward_kinematics(links, state.q);
        const auto lyap = ctl::lyapunov_sample(e, opt.gains);
        rec.log.push_back({state.t, state.q.phi, state.q.theta, state.q.d, p.x, p.y, p.z, y_r,
                           z_r, e.e_y, e.e_z, lyap.V, applied.omega_phi, applied.omega_theta,
                           applied.u_prismatic});
    }

    // Holds the current pose for `duration`, prismatic loop still closed on d_hold.
    void hold(double duration, double d_hold) {
        const kin::CartesianPoint ref = kin::forward_kinematics(links, state.q_measured);
        const double t_end = state.t + duration - 0.5 * opt.dt;
        while (state.t < t_end) {
            const kin::CartesianPoint p = kin::forward_kinematics(links, state.q_measured);
            const auto e = ctl::tracking_error(p, ref.y, ref.z);
            Commands cmd;
            cmd.u_prismatic = pi.update(d_hold, state.q_measured.d, opt.dt);
            const auto applied = step(state, cmd, plant, limits, opt.dt);
            log(ref.y, ref.z, e, applied);
        }
    }

    Commands revolute_command(ControllerKind kind, const ctl::TrackingError& e, double ydot_r,
                              double zdot_r, const traj::JointReference& jref, double tau) {
        Commands cmd;
        switch (kind) {
        case ControllerKind::Proposed: {
            const auto vc = ctl::velocity_controller(links, state.q_measured, e, ydot_r, zdot_r,
                                                     opt.gains, opt.guard_rad);
            cmd.omega_phi = vc.omega_phi;
            cmd.omega_theta = vc.omega_theta;
            break;
        }
        case ControllerKind::OpenLoop: {
            const auto vc =
                ctl::open_loop_controller(links, state.q_measured, ydot_r, zdot_r, opt.guard_rad);
            cmd.omega_phi = vc.omega_phi;
            cmd.omega_theta = vc.omega_theta;
            break;
        }
        case ControllerKind::Position: {
            // Servo stand-in: one-step correction toward the joint setpoint,
            // closed on the quantized measurement only.
            cmd.omega_phi = (jref.phi.at(tau).pos - state.q_measured.phi) / opt.dt;
            cmd.omega_theta = (jref.theta.at(tau).pos - state.q_measured.theta) / opt.dt;
            break;
        }
        }
        return cmd;
    }

    // Quintic move to `goal` (joints `q_goal`), then regulation about the held
    // reference until the measured error drops under settle_tol or settle_max
    // elapses. Returns the elapsed time.
    double approach(ControllerKind kind, const kin::CartesianPoint& goal,
                    const kin::JointState& q_goal, bool settle) {
        const double t0 = state.t;
        const kin::CartesianPoint p0 = kin::forward_kinematics(links, state.q_measured);
        const auto ref = traj::plan_cartesian_reference(p0, goal, opt.budget.approach);
        const auto jref = traj::plan_joint_reference(state.q_measured, q_goal, opt.budget.approach);

        for (;;) {
            const double tau = state.t - t0;
            const auto ys = ref.y.at(tau);
            const auto zs = ref.z.at(tau);
            const kin::CartesianPoint p = kin::forward_kinematics(links, state.q_measured);
            const auto e = ctl::tracking_error(p, ys.pos, zs.pos);

            Commands cmd = revolute_command(kind, e, ys.vel, zs.vel, jref, tau);
            // Track the quintic, not the endpoint: a raw step saturates the
            // pneumatic stage and the braking overshoot can cross a hard stop.
            // Feedforward carries the cruise velocity so the integral stays
            // unloaded and the landing holds no residual charge.
            const auto ds = jref.d.at(tau);
            cmd.u_prismatic = ds.vel + pi.update(ds.pos, state.q_measured.d, opt.dt);

            const auto applied = step(state, cmd, plant, limits, opt.dt);
            log(ys.pos, zs.pos, e, applied);

            const double elapsed = state.t - t0;
            if (elapsed >= ref.t_f - 0.5 * opt.dt) {
                if (!settle) {
                    break;
                }
                const double err =
                    distance(kin::forward_kinematics(links, state.q_measured), goal);
                if (err < opt.settle_tol || elapsed >= ref.t_f + opt.settle_max - 0.5 * opt.dt) {
                    break;
                }
            }
        }
        return state.t - t0;
    }
};

} // namespace

const char* phase_name(Phase p) {
    switch (p) {
    case Phase::Idle: return "idle";
    case Phase::Localize: return "localize";
    case Phase::Approach: return "approach";
    case Phase::Detach: return "detach";
    case Phase::Return: return "return";
    case Phase::Done: return "done";
    case Phase::Failed: return "failed";
    }
    return "unknown";
}

const char* controller_name(ControllerKind k) {
    switch (k) {
    case ControllerKind::Proposed: return "proposed";
    case ControllerKind::OpenLoop: return "open-loop";
    case ControllerKind::Position: return "position";
    }
    return "unknown";
}

ControllerKind controller_from_name(const std::string& name) {
    if (name == "proposed") {
        return ControllerKind::Proposed;
    }
    if (name == "open-loop") {
        return ControllerKind::OpenLoop;
    }
    if (name == "position") {
        return ControllerKind::Position;
    }
    throw Error(Fault::ConfigError, "unknown controller '" + name +
                                        "' (expected proposed, open-loop or position)");
}

TrialRecord run_harvest_cycle(const kin::LinkParams& links, const kin::JointLimits& limits,
                              const kin::CartesianPoint& target_true, ControllerKind kind,
                              const PlantModel& plant_in, const CycleOptions& opt,
                              std::uint64_t seed) {
    ctl::validate(opt.gains);
    Rng rng(seed);

    PlantModel plant = plant_in;
    if (opt.randomize_encoder_phase && plant.encoder_counts_per_rev > 0) {
        const double h = kTwoPi / plant.encoder_counts_per_rev;
        plant.encoder_phase_phi = rng.uniform(0.0, h);
        plant.encoder_phase_theta = rng.uniform(0.0, h);
    }

    TrialRecord rec;
    rec.target_true = target_true;
    rec.controller = kind;

    CycleRun run(links, limits, plant, opt, rec);
    run.enter(Phase::Idle);

    try {
        run.enter(Phase::Localize);
        {
            const double t0 = run.state.t;
            run.hold(opt.budget.localize, opt.home.d);
            rec.durations.localize = run.state.t - t0;
        }

        if (opt.use_perception) {
            const percep::DetectionNoise noise{opt.perception.pixel_sigma,
                                               plant.depth_noise_sigma};
            const auto det =
                percep::synthesize_detection(target_true, opt.perception.cam_to_base,
                                             opt.perception.camera, noise,
                                             opt.perception.box_half_px, rng);
            rec.target_perceived = percep::locate_target(det, opt.perception.camera,
                                                         opt.perception.cam_to_base,
                                                         opt.perception.depth_window);
        } else {
            rec.target_perceived = target_true;
        }

        const kin::JointState q_goal =
            kin::inverse_kinematics(links, rec.target_perceived, limits);

        run.enter(Phase::Approach);
        rec.durations.approach = run.approach(kind, rec.target_perceived, q_goal, true);
        rec.final_error = distance(kin::forward_kinematics(links, run.state.q), target_true);

        run.enter(Phase::Detach);
        {
            const double t0 = run.state.t;
            run.hold(opt.budget.detach, q_goal.d);
            rec.durations.detach = run.state.t - t0;
        }

        run.enter(Phase::Return);
        {
            const kin::CartesianPoint home_p = kin::forward_kinematics(links, opt.home);
            rec.durations.retreat = run.approach(kind, home_p, opt.home, false);
        }

        run.enter(Phase::Done);
        rec.end_phase = Phase::Done;
        rec.success = rec.final_error < opt.success_threshold;
    } catch (const Error& e) {
        run.enter(Phase::Failed);
        rec.end_phase = Phase::Failed;
        rec.failure = std::string(fault_name(e.fault())) + ": " + e.what();
        rec.final_error = distance(kin::forward_kinematics(links, run.state.q), target_true);
        rec.success = false;
    }
    return rec;
}

BatchResult run_batch(const kin::LinkParams& links, const kin::JointLimits& limits,
                      const SceneConfig& scene, int n, ControllerKind kind,
                      const PlantModel& plant, const CycleOptions& opt, std::uint64_t seed) {
    if (n <= 0) {
        throw Error(Fault::ConfigError, "batch size must be positive");
    }
    BatchResult out;
    out.n = n;
    out.seed = seed;
    out.controller = kind;
    out.threshold = opt.success_threshold;
    out.trials.reserve(static_cast<std::size_t>(n));

    int successes = 0;
    double err_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        Rng scene_rng = Rng::derive(seed, 2 * static_cast<std::uint64_t>(i));
        const kin::JointState qt{
            scene_rng.uniform(limits.phi_min + scene.margin_phi, limits.phi_max - scene.margin_phi),
            scene_rng.uniform(limits.theta_min + scene.margin_theta,
                              limits.theta_max - scene.margin_theta),
            scene_rng.uniform(limits.d_min + scene.margin_d, limits.d_max - scene.margin_d),
        };
        const kin::CartesianPoint target = kin::forward_kinematics(links, qt);

        const std::uint64_t cycle_seed =
            seed ^ (0xa5a5a5a55a5a5a5aull + 0x9e3779b97f4a7c15ull * (2 * i + 1));
        auto rec = run_harvest_cycle(links, limits, target, kind, plant, opt, cycle_seed);

        successes += rec.success ? 1 : 0;
        err_sum += rec.final_error;
        out.max_error = std::max(out.max_error, rec.final_error);
        out.phase_means.localize += rec.durations.localize;
        out.phase_means.approach += rec.durations.approach;
        out.phase_means.detach += rec.durations.detach;
        out.phase_means.retreat += rec.durations.retreat;
        out.trials.push_back(std::move(rec));
    }
    out.success_rate = static_cast<double>(successes) / n;
    out.mean_error = err_sum / n;
    out.phase_means.localize /= n;
    out.phase_means.approach /= n;
    out.phase_means.detach /= n;
    out.phase_means.retreat /= n;
    return out;
}

std::vector<ComparisonRow> compare_controllers(const kin::LinkParams& links,
                                               const kin::JointLimits& limits,
                                               const std::vector<kin::CartesianPoint>& cases,
                                               int repetitions, const PlantModel& plant,
                                               const CycleOptions& opt, std::uint64_t seed) {
    if (repetitions < 1) {
        throw Error(Fault::ConfigError, "comparison needs at least one repetition");
    }
    CycleOptions run_opt = opt;
    run_opt.use_perception = false;
    run_opt.log_decimation = 0;

    const ControllerKind kinds[] = {ControllerKind::OpenLoop, ControllerKind::Position,
                                    ControllerKind::Proposed};
    std::vector<ComparisonRow> rows;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        bool reachable = true;
        try {
            kin::inverse_kinematics(links, cases[ci], limits);
        } catch (const Error&) {
            reachable = false;
        }
        for (const auto kind : kinds) {
            ComparisonRow row;
            row.case_index = static_cast<int>(ci);
            row.target = cases[ci];
            row.controller = kind;
            row.reachable = reachable;
            row.repetitions = reachable ? repetitions : 0;
            if (reachable) {
                double sum = 0.0;
                double sum_sq = 0.0;
                for (int r = 0; r < repetitions; ++r) {
                    const std::uint64_t stream =
                        (ci * 3 + static_cast<std::uint64_t>(kind)) * repetitions +
                        static_cast<std::uint64_t>(r);
                    const std::uint64_t cycle_seed =
                        seed ^ (0xc3c3c3c33c3c3c3cull + 0x9e3779b97f4a7c15ull * stream);
                    const auto rec = run_harvest_cycle(links, limits, cases[ci], kind, plant,
                                                       run_opt, cycle_seed);
                    const double mm = rec.final_error * 1000.0;
                    sum += mm;
                    sum_sq += mm * mm;
                }
                row.mean_error_mm = sum / repetitions;
                if (repetitions > 1) {
                    const double var =
                        (sum_sq - sum * sum / repetitions) / (repetitions - 1);
                    row.std_mm = std::sqrt(std::max(var, 0.0));
                }
            } else {
                row.mean_error_mm = std::nan("");
                row.std_mm = std::nan("");
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace harvest::sim
