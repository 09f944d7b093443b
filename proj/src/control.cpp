#include "harvestsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harvestsim/trajectory.hpp"

namespace harvest::ctl {

namespace {

constexpr double kGuardDeg = 80.0;
constexpr double kPi = 3.14159265358979323846;

void guard_cosines(const kin::JointState& q, double guard_rad) {
    const double floor = std::cos(guard_rad);
    if (std::cos(q.phi) < floor || std::cos(q.theta) < floor) {
        std::ostringstream os;
        os << "pose (phi = " << q.phi << ", theta = " << q.theta
           << ") within the singularity guard band of " << guard_rad << " rad";
        throw Error(Fault::SingularityGuard, os.str());
    }
}

} // namespace

double default_guard_rad() { return kGuardDeg * kPi / 180.0; }

void validate(const Gains& gains) {
    if (!(gains.k1 > 0.0) || !(gains.k2 > 0.0)) {
        std::ostringstream os;
        os << "gains must be positive, got k1 = " << gains.k1 << ", k2 = " << gains.k2;
        throw Error(Fault::ConfigError, os.str());
    }
}

TrackingError tracking_error(const kin::CartesianPoint& p, double y_ref, double z_ref) {
    return {p.y - y_ref, p.z - z_ref};
}

VelocityCommand velocity_controller(const kin::LinkParams& links, const kin::JointState& q,
                                    const TrackingError& err, double ydot_ref, double zdot_ref,
                                    const Gains& gains, double guard_rad) {
    validate(gains);
    guard_cosines(q, guard_rad);

    const double cphi = std::cos(q.phi);
    const double omega_phi = (-gains.k1 * err.e_y + ydot_ref) / (links.d3 * cphi);
    const double omega_theta =
        (gains.k2 * err.e_z + links.d3 * std::sin(q.theta) * std::sin(q.phi) * omega_phi -
         zdot_ref) /
        (links.d3 * std::cos(q.theta) * cphi);
    return {omega_phi, omega_theta};
}

VelocityCommand open_loop_controller(const kin::LinkParams& links, const kin::JointState& q,
                                     double ydot_ref, double zdot_ref, double guard_rad) {
    guard_cosines(q, guard_rad);

    const double cphi = std::cos(q.phi);
    const double omega_phi = ydot_ref / (links.d3 * cphi);
    const double omega_theta =
        (links.d3 * std::sin(q.theta) * std::sin(q.phi) * omega_phi - zdot_ref) /
        (links.d3 * std::cos(q.theta) * cphi);
    return {omega_phi, omega_theta};
}

kin::JointState position_mode_controller(const kin::JointState& q0,
                                         const kin::JointState& q_desired, double t, double t_f) {
    const auto ref = traj::plan_joint_reference(q0, q_desired, t_f);
    return {ref.phi.at(t).pos, ref.theta.at(t).pos, ref.d.at(t).pos};
}

PiController::PiController(double kp, double ki, double integral_limit, double output_limit)
    : kp_(kp), ki_(ki), integral_limit_(integral_limit), output_limit_(output_limit) {
    if (!(kp > 0.0) || ki < 0.0 || !(integral_limit >= 0.0) || !(output_limit > 0.0)) {
        std::ostringstream os;
        os << "PI parameters out of range: kp = " << kp << ", ki = " << ki
           << ", integral limit = " << integral_limit << ", output limit = " << output_limit;
        throw Error(Fault::ConfigError, os.str());
    }
}

double PiController::update(double setpoint, double measured, double dt) {
    const double e = setpoint - measured;
    const double unsat = kp_ * e + ki_ * integral_;
    // A railed actuator cannot absorb more charge; integrate only while the
    // output is inside the rail or the error is pulling it back.
    if (std::abs(unsat) < output_limit_ || unsat * e < 0.0) {
        integral_ = std::clamp(integral_ + e * dt, -integral_limit_, integral_limit_);
    }
    return std::clamp(kp_ * e + ki_ * integral_, -output_limit_, output_limit_);
}

LyapunovSample lyapunov_sample(const TrackingError& err, const Gains& gains) {
    validate(gains);
    return {
        0.5 * (err.e_y * err.e_y + err.e_z * err.e_z),
        -gains.k1 * err.e_y * err.e_y - gains.k2 * err.e_z * err.e_z,
    };
}

} // namespace harvest::ctl
