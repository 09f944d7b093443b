#include "harvestsim/trajectory.hpp"

#include <sstream>

namespace harvest::traj {

QuinticAxis QuinticAxis::plan(double p0, double pf, double t_f) {
    if (!(t_f > 0.0)) {
        std::ostringstream os;
        os << "horizon " << t_f << " must be positive";
        throw Error(Fault::InvalidHorizon, os.str());
    }
    const double stroke = pf - p0;
    const double t3 = t_f * t_f * t_f;
    const double t4 = t3 * t_f;
    const double t5 = t4 * t_f;

    QuinticAxis axis;
    axis.a_ = {p0, 0.0, 0.0, 10.0 * stroke / t3, -15.0 * stroke / t4, 6.0 * stroke / t5};
    axis.t_f_ = t_f;
    axis.goal_ = pf;
    return axis;
}

QuinticAxis::Sample QuinticAxis::at(double t) const {
    if (t <= 0.0) {
        return {a_[0], 0.0, 0.0};
    }
    if (t >= t_f_) {
        return {goal_, 0.0, 0.0};
    }
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    const double t5 = t4 * t;
    return {
        a_[0] + a_[1] * t + a_[2] * t2 + a_[3] * t3 + a_[4] * t4 + a_[5] * t5,
        a_[1] + 2.0 * a_[2] * t + 3.0 * a_[3] * t2 + 4.0 * a_[4] * t3 + 5.0 * a_[5] * t4,
        2.0 * a_[2] + 6.0 * a_[3] * t + 12.0 * a_[4] * t2 + 20.0 * a_[5] * t3,
    };
}

CartesianReference plan_cartesian_reference(const kin::CartesianPoint& start,
                                            const kin::CartesianPoint& goal, double t_f) {
    return {QuinticAxis::plan(start.y, goal.y, t_f), QuinticAxis::plan(start.z, goal.z, t_f), t_f};
}

JointReference plan_joint_reference(const kin::JointState& q0, const kin::JointState& q_goal,
                                    double t_f) {
    return {
        QuinticAxis::plan(q0.phi, q_goal.phi, t_f),
        QuinticAxis::plan(q0.theta, q_goal.theta, t_f),
        QuinticAxis::plan(q0.d, q_goal.d, t_f),
        t_f,
    };
}

} // namespace harvest::traj
