#pragma once

#include <array>

#include "harvestsim/errors.hpp"
#include "harvestsim/kinematics.hpp"

namespace harvest::traj {

// Rest-to-rest quintic on one axis. Position, velocity and acceleration all
// vanish at both ends; the interior is strictly monotone for a nonzero stroke.
class QuinticAxis {
  public:
    struct Sample {
        double pos = 0.0;
        double vel = 0.0;
        double acc = 0.0;
    };

    // Throws InvalidHorizon unless t_f > 0.
    static QuinticAxis plan(double p0, double pf, double t_f);

    // Clamps t to [0, t_f]: before the start the sample holds p0, past the
    // end it holds pf, with zero derivatives either side.
    Sample at(double t) const;

    const std::array<double, 6>& coefficients() const { return a_; }
    double horizon() const { return t_f_; }
    double start() const { return a_[0]; }
    double goal() const { return goal_; }

  private:
    QuinticAxis() = default;

    std::array<double, 6> a_{}; // a_[k] multiplies t^k
    double t_f_ = 0.0;
    double goal_ = 0.0;
};

// Paired y/z reference for the approach move. The prismatic axis runs its own
// position loop and is not part of this reference.
struct CartesianReference {
    QuinticAxis y;
    QuinticAxis z;
    double t_f = 0.0;
};

CartesianReference plan_cartesian_reference(const kin::CartesianPoint& start,
                                            const kin::CartesianPoint& goal, double t_f);

// Joint-space rest-to-rest quintics, one per joint.
struct JointReference {
    QuinticAxis phi;
    QuinticAxis theta;
    QuinticAxis d;
    double t_f = 0.0;
};

JointReference plan_joint_reference(const kin::JointState& q0, const kin::JointState& q_goal,
                                    double t_f);

} // namespace harvest::traj
