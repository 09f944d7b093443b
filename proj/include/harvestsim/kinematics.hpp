#pragma once

#include <cstdint>
#include <vector>

#include "harvestsim/errors.hpp"

// Closed-form kinematics of the pan/tilt/prismatic picking arm.
//
// Frame convention: x forward along the retracted prismatic axis, y across,
// z up. The pan joint phi swings the end effector in y, the tilt joint theta
// in z, and the pneumatic joint D extends along x. With phi = theta = 0 and
// D = 0 the end effector sits at (d3, d2, d1).
namespace harvest::kin {

struct LinkParams {
    double d1 = 0.0635; // base to tilt axis height, m
    double d2 = 0.0889; // lateral pan offset, m
    double d3 = 0.6985; // arm length, m
};

struct JointState {
    double phi = 0.0;   // pan, rad
    double theta = 0.0; // tilt, rad
    double d = 0.0;     // prismatic extension, m
};

struct CartesianPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct JointLimits {
    double phi_min;
    double phi_max;
    double theta_min;
    double theta_max;
    double d_min;
    double d_max;

    // Stock limits: pan and tilt +/-25 deg, stroke 0 to 0.61 m.
    static JointLimits stock();

    JointLimits shrunk(double revolute_margin, double prismatic_margin) const;
    JointLimits widened_revolute(double phi_bound, double theta_bound) const;
};

struct CartesianRates {
    double ydot = 0.0;
    double zdot = 0.0;
};

CartesianPoint forward_kinematics(const LinkParams& links, const JointState& q);

// Principal-branch solution; valid across the stock joint envelope.
// Throws OutOfReach when no solution exists and LimitViolation when the
// solution lands outside `limits`.
JointState inverse_kinematics(const LinkParams& links, const CartesianPoint& target,
                              const JointLimits& limits);

bool within_limits(const JointLimits& limits, const JointState& q, double margin = 0.0);

// Throws LimitViolation naming the offending joint.
void check_limits(const JointLimits& limits, const JointState& q, double margin = 0.0);

// Image of the revolute rates through the task-space Jacobian restricted to
// the pan/tilt plane. The prismatic axis decouples and is handled separately.
CartesianRates velocity_map(const LinkParams& links, const JointState& q, double omega_phi,
                            double omega_theta);

// n reachable end-effector positions, uniform over the joint box.
std::vector<CartesianPoint> sample_workspace(const LinkParams& links, const JointLimits& limits,
                                             int n, std::uint64_t seed);

} // namespace harvest::kin
