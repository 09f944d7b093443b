#include "harvestsim/plant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace harvest::sim {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
constexpr double kBreachMarginRad = 0.01;
constexpr double kBreachMarginM = 0.01;

double clamp_rate(double cmd, double bias, double limit) {
    return std::clamp(bias * cmd, -limit, limit);
}

void check_breach(const kin::JointState& q, const kin::JointLimits& limits) {
    const bool bad =
        q.phi < limits.phi_min - kBreachMarginRad || q.phi > limits.phi_max + kBreachMarginRad ||
        q.theta < limits.theta_min - kBreachMarginRad ||
        q.theta > limits.theta_max + kBreachMarginRad || q.d < limits.d_min - kBreachMarginM ||
        q.d > limits.d_max + kBreachMarginM;
    if (bad) {
        std::ostringstream os;
        os << "joint state (" << q.phi << ", " << q.theta << ", " << q.d
           << ") breached hard limits";
        throw Error(Fault::LimitBreach, os.str());
    }
}

} // namespace

PlantModel PlantModel::ideal() {
    PlantModel p;
    p.encoder_counts_per_rev = 0;
    return p;
}

PlantModel PlantModel::perturbed() {
    PlantModel p;
    p.gain_bias_phi = 1.05;
    p.gain_bias_theta = 1.05;
    p.depth_noise_sigma = 0.005;
    return p;
}

double quantize_angle(double q, int counts_per_rev, double phase) {
    if (counts_per_rev <= 0) {
        return q;
    }
    const double h = kTwoPi / static_cast<double>(counts_per_rev);
    return phase + h * std::floor((q - phase) / h);
}

void refresh_measurement(SimState& state, const PlantModel& plant) {
    state.q_measured.phi =
        quantize_angle(state.q.phi, plant.encoder_counts_per_rev, plant.encoder_phase_phi);
    state.q_measured.theta =
        quantize_angle(state.q.theta, plant.encoder_counts_per_rev, plant.encoder_phase_theta);
    // The stroke transducer reads continuously.
    state.q_measured.d = state.q.d;
}

AppliedRates step(SimState& state, const Commands& cmd, const PlantModel& plant,
                  const kin::JointLimits& limits, double dt) {
    const double w_phi = clamp_rate(cmd.omega_phi, plant.gain_bias_phi, plant.pan_rate_limit);
    const double w_theta =
        clamp_rate(cmd.omega_theta, plant.gain_bias_theta, plant.tilt_rate_limit);
    const double v_cmd =
        std::clamp(cmd.u_prismatic, -plant.pneumatic_speed_limit, plant.pneumatic_speed_limit);

    // State vector (phi, theta, D, v). Inputs are held for the whole step.
    const auto deriv = [&](const std::array<double, 4>& s) {
        return std::array<double, 4>{w_phi, w_theta, s[3], (v_cmd - s[3]) / plant.pneumatic_tau};
    };

    std::array<double, 4> s0{state.q.phi, state.q.theta, state.q.d, state.d_rate};
    const auto k1 = deriv(s0);
    std::array<double, 4> s1;
    for (int i = 0; i < 4; ++i) s1[i] = s0[i] + 0.5 * dt * k1[i];
    const auto k2 = deriv(s1);
    std::array<double, 4> s2;
    for (int i = 0; i < 4; ++i) s2[i] = s0[i] + 0.5 * dt * k2[i];
    const auto k3 = deriv(s2);
    std::array<double, 4> s3;
    for (int i = 0; i < 4; ++i) s3[i] = s0[i] + dt * k3[i];
    const auto k4 = deriv(s3);
    for (int i = 0; i < 4; ++i) {
        s0[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    state.q.phi = s0[0];
    state.q.theta = s0[1];
    state.q.d = s0[2];
    state.d_rate = s0[3];
    state.t += dt;

    check_breach(state.q, limits);
    refresh_measurement(state, plant);

    return {w_phi, w_theta, v_cmd};
}

} // namespace harvest::sim
