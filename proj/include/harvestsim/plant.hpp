#pragma once

#include "harvestsim/errors.hpp"
#include "harvestsim/kinematics.hpp"

namespace harvest::sim {

// Actuation and sensing imperfections of the physical cell. Rate limits come
// from the 4000 RPM servo ceiling through the 45:1 pan and 80:1 tilt
// reductions; the pneumatic stroke covers 0.61 m in under a second.
struct PlantModel {
    double pan_rate_limit = 9.30842267730309;  // rad/s
    double tilt_rate_limit = 5.235987755982989; // rad/s
    double gain_bias_phi = 1.0;   // attained rate / commanded rate
    double gain_bias_theta = 1.0;
    int encoder_counts_per_rev = 6400; // post-gearbox; 0 disables quantization
    double encoder_phase_phi = 0.0;    // rad, counting-grid origin offset
    double encoder_phase_theta = 0.0;
    double pneumatic_tau = 0.05;         // s, velocity lag
    double pneumatic_speed_limit = 0.7;  // m/s
    double depth_noise_sigma = 0.0;      // m, handed to the perception stage

    // Perfect actuation and sensing.
    static PlantModel ideal();
    // Field-calibration error profile: 5% rate bias on both revolute joints,
    // quantized encoders, 5 mm depth noise.
    static PlantModel perturbed();
};

struct SimState {
    double t = 0.0;
    kin::JointState q;          // true joints
    double d_rate = 0.0;        // prismatic velocity behind the lag, m/s
    kin::JointState q_measured; // encoder view of q
};

struct Commands {
    double omega_phi = 0.0;   // rad/s
    double omega_theta = 0.0; // rad/s
    double u_prismatic = 0.0; // m/s
};

// Rates actually applied after bias and saturation, for logging.
struct AppliedRates {
    double omega_phi = 0.0;
    double omega_theta = 0.0;
    double u_prismatic = 0.0;
};

double quantize_angle(double q, int counts_per_rev, double phase);

void refresh_measurement(SimState& state, const PlantModel& plant);

// One fixed step of the joint ODEs under zero-order-hold commands, classical
// fourth-order Runge-Kutta. Revolute joints integrate the saturated,
// bias-scaled rates; the prismatic axis runs its commanded velocity through
// the first-order lag. Throws LimitBreach if a joint exits limits by more
// than the breach margin (0.01 rad / 0.01 m).
AppliedRates step(SimState& state, const Commands& cmd, const PlantModel& plant,
                  const kin::JointLimits& limits, double dt);

} // namespace harvest::sim
