#pragma once

#include <limits>

#include "harvestsim/errors.hpp"
#include "harvestsim/kinematics.hpp"

namespace harvest::ctl {

struct Gains {
    double k1 = 5.0; // lateral error feedback, 1/s
    double k2 = 5.0; // vertical error feedback, 1/s
};

// Throws ConfigError unless both gains are positive.
void validate(const Gains& gains);

struct TrackingError {
    double e_y = 0.0; // y - y_r, m
    double e_z = 0.0; // z - z_r, m
};

TrackingError tracking_error(const kin::CartesianPoint& p, double y_ref, double z_ref);

struct VelocityCommand {
    double omega_phi = 0.0;   // rad/s
    double omega_theta = 0.0; // rad/s
};

// Feedback-linearizing rate command. On an exact plant it induces
// de_y/dt = -k1 e_y and de_z/dt = -k2 e_z; see lyapunov_sample for the
// matching energy decay. Throws SingularityGuard when cos(phi) or cos(theta)
// falls below cos(guard), default 80 deg, far outside the stock envelope.
VelocityCommand velocity_controller(const kin::LinkParams& links, const kin::JointState& q,
                                    const TrackingError& err, double ydot_ref, double zdot_ref,
                                    const Gains& gains, double guard_rad);

// Same inversion without the error terms; tracks the reference rates only and
// lets any accumulated offset stand.
VelocityCommand open_loop_controller(const kin::LinkParams& links, const kin::JointState& q,
                                     double ydot_ref, double zdot_ref, double guard_rad);

// Joint-space quintic setpoint for the servo positioning benchmark. No
// Cartesian quantity enters anywhere downstream of this.
kin::JointState position_mode_controller(const kin::JointState& q0,
                                         const kin::JointState& q_desired, double t, double t_f);

// Velocity-output PI for the pneumatic extension. The stored integral is
// clamped, and held whenever the output rides the rail with the error still
// pushing into it.
class PiController {
  public:
    PiController(double kp, double ki, double integral_limit,
                 double output_limit = std::numeric_limits<double>::infinity());

    double update(double setpoint, double measured, double dt);
    void reset() { integral_ = 0.0; }
    double integral() const { return integral_; }

  private:
    double kp_;
    double ki_;
    double integral_limit_;
    double output_limit_;
    double integral_ = 0.0;
};

struct LyapunovSample {
    double V = 0.0;    // (e_y^2 + e_z^2) / 2
    double Vdot = 0.0; // -k1 e_y^2 - k2 e_z^2, nonpositive for valid gains
};

LyapunovSample lyapunov_sample(const TrackingError& err, const Gains& gains);

double default_guard_rad();

} // namespace harvest::ctl
