#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harvestsim/config.hpp"
#include "harvestsim/report.hpp"

namespace {

namespace fs = std::filesystem;
using namespace harvest;

constexpr double kDeg = 3.14159265358979323846 / 180.0;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUnreachable = 3;
constexpr int kExitSimFailure = 4;

int exit_code_for(Fault fault) {
    switch (fault) {
    case Fault::OutOfReach:
    case Fault::LimitViolation:
        return kExitUnreachable;
    case Fault::ConfigError:
    case Fault::IoError:
    case Fault::InvalidHorizon:
    case Fault::InvalidTransform:
        return kExitConfig;
    default:
        return kExitSimFailure;
    }
}

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool plots = false;
};

cfg::RunConfig load_config(const GlobalArgs& g) {
    cfg::RunConfig c = g.config_path.empty() ? cfg::defaults() : cfg::load(g.config_path);
    if (g.seed_set) {
        c.seed = g.seed;
    }
    return c;
}

fs::path ensure_out_dir(const GlobalArgs& g) {
    fs::path dir(g.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(Fault::IoError, "cannot create output directory '" + g.out_dir + "'");
    }
    return dir;
}

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run_fk(const GlobalArgs& g, double phi_deg, double theta_deg, double d) {
    const auto c = load_config(g);
    const kin::JointState q{phi_deg * kDeg, theta_deg * kDeg, d};
    kin::check_limits(c.limits, q);
    const auto p = kin::forward_kinematics(c.links, q);
    std::cout << fmt6(p.x) << ' ' << fmt6(p.y) << ' ' << fmt6(p.z) << "\n";
    return kExitOk;
}

int run_ik(const GlobalArgs& g, double x, double y, double z) {
    const auto c = load_config(g);
    const auto q = kin::inverse_kinematics(c.links, {x, y, z}, c.limits);
    std::cout << "phi_deg=" << fmt6(q.phi / kDeg) << " theta_deg=" << fmt6(q.theta / kDeg)
              << " D_m=" << fmt6(q.d) << "\n";
    return kExitOk;
}

int run_simulate(const GlobalArgs& g, double x, double y, double z,
                 const std::string& controller) {
    const auto c = load_config(g);
    const auto kind = sim::controller_from_name(controller);
    const auto dir = ensure_out_dir(g);

    const auto rec = sim::run_harvest_cycle(c.links, c.limits, {x, y, z}, kind, c.plant, c.cycle,
                                            c.seed);
    report::write_trial_csv((dir / "trial.csv").string(), rec);
    report::write_trial_json((dir / "trial.json").string(), rec, c.seed);
    if (g.plots) {
        report::plot_tracking_svg((dir / "tracking.svg").string(), rec);
        report::plot_errors_svg((dir / "errors.svg").string(), rec);
        report::plot_lyapunov_svg((dir / "lyapunov.svg").string(), rec);
    }

    std::cout << "trial " << (rec.success ? "succeeded" : "failed") << ": final error "
              << fmt6(rec.final_error * 1000.0) << " mm, end phase "
              << sim::phase_name(rec.end_phase) << "\n";
    if (rec.end_phase == sim::Phase::Failed) {
        std::cerr << "failure: " << rec.failure << "\n";
        return kExitSimFailure;
    }
    return kExitOk;
}

int run_batch_cmd(const GlobalArgs& g, int n, const std::string& controller) {
    const auto c = load_config(g);
    const auto kind = sim::controller_from_name(controller);
    const auto dir = ensure_out_dir(g);

    auto opt = c.cycle;
    if (opt.log_decimation == 1) {
        opt.log_decimation = 0; // per-step logs of a whole batch are rarely wanted
    }
    const auto batch =
        sim::run_batch(c.links, c.limits, c.scene, n, kind, c.plant, opt, c.seed);
    report::write_batch_summary_json((dir / "batch_summary.json").string(), batch);
    report::write_batch_trials_csv((dir / "batch_trials.csv").string(), batch);
    if (g.plots) {
        report::plot_batch_errors_svg((dir / "batch_errors.svg").string(), batch);
    }

    std::cout << "batch of " << batch.n << ": success rate " << fmt6(batch.success_rate * 100.0)
              << "%, mean error " << fmt6(batch.mean_error * 1000.0) << " mm, max "
              << fmt6(batch.max_error * 1000.0) << " mm\n";
    return kExitOk;
}

int run_compare(const GlobalArgs& g, int repetitions) {
    const auto c = load_config(g);
    const auto dir = ensure_out_dir(g);
    const int reps = repetitions > 0 ? repetitions : c.compare_repetitions;

    const auto rows = sim::compare_controllers(c.links, c.limits, c.compare_cases, reps, c.plant,
                                               c.cycle, c.seed);
    report::write_comparison_csv((dir / "comparison.csv").string(), rows);
    if (g.plots) {
        report::plot_comparison_svg((dir / "comparison.svg").string(), rows);
    }

    for (const auto& r : rows) {
        std::cout << "case " << r.case_index + 1 << " " << sim::controller_name(r.controller)
                  << ": ";
        if (r.reachable) {
            std::cout << fmt6(r.mean_error_mm) << " mm (std " << fmt6(r.std_mm) << ", n="
                      << r.repetitions << ")\n";
        } else {
            std::cout << "unreachable under configured limits\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and control toolkit for a pan/tilt/prismatic apple picker"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON configuration file");
    app.add_option("--out-dir", g.out_dir, "directory for generated files");
    auto* seed_opt = app.add_option("--seed", g.seed, "seed for every random draw");
    app.add_flag("--plots", g.plots, "also write SVG plots");

    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    std::string controller = "proposed";
    int batch_n = 60;
    int repetitions = 0;

    auto* fk = app.add_subcommand("fk", "forward kinematics: phi_deg theta_deg D_m -> x y z");
    fk->add_option("phi_deg", a0, "pan angle, degrees")->required();
    fk->add_option("theta_deg", a1, "tilt angle, degrees")->required();
    fk->add_option("D_m", a2, "prismatic extension, metres")->required();

    auto* ik = app.add_subcommand("ik", "inverse kinematics: x y z -> joint solution");
    ik->add_option("x", a0, "target x, metres")->required();
    ik->add_option("y", a1, "target y, metres")->required();
    ik->add_option("z", a2, "target z, metres")->required();

    auto* simulate = app.add_subcommand("simulate", "run one pick cycle and log it");
    simulate->add_option("x", a0, "target x, metres")->required();
    simulate->add_option("y", a1, "target y, metres")->required();
    simulate->add_option("z", a2, "target z, metres")->required();
    simulate->add_option("--controller", controller,
                         "proposed, open-loop or position (default proposed)");

    auto* batch = app.add_subcommand("batch", "run many picks on sampled targets");
    batch->add_option("n", batch_n, "number of trials (default 60)");
    batch->add_option("--controller", controller,
                      "proposed, open-loop or position (default proposed)");

    auto* compare = app.add_subcommand("compare", "benchmark the three controllers");
    compare->add_option("--repetitions", repetitions,
                        "runs per case and controller (default from config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (seed_opt->count() > 0) {
            g.seed_set = true;
        }
        if (fk->parsed()) {
            return run_fk(g, a0, a1, a2);
        }
        if (ik->parsed()) {
            return run_ik(g, a0, a1, a2);
        }
        if (simulate->parsed()) {
            return run_simulate(g, a0, a1, a2, controller);
        }
        if (batch->parsed()) {
            return run_batch_cmd(g, batch_n, controller);
        }
        if (compare->parsed()) {
            return run_compare(g, repetitions);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << fault_name(e.fault()) << "): " << e.what() << "\n";
        return exit_code_for(e.fault());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSimFailure;
    }
    return kExitOk;
}
