#include "harvestsim/kinematics.hpp"

#include <cmath>
#include <sstream>

#include "harvestsim/rng.hpp"

namespace harvest::kin {

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

std::string describe(const char* joint, double value, double lo, double hi) {
    std::ostringstream os;
    os << joint << " = " << value << " outside [" << lo << ", " << hi << "]";
    return os.str();
}

// Round trips through FK can land an on-boundary solution a few ulp outside
// the box. Fold anything within kSnap back onto the nearest bound.
constexpr double kSnap = 1e-9;

double snap(double value, double lo, double hi) {
    if (value < lo && value > lo - kSnap) return lo;
    if (value > hi && value < hi + kSnap) return hi;
    return value;
}

} // namespace

JointLimits JointLimits::stock() {
    return {-25.0 * kDeg, 25.0 * kDeg, -25.0 * kDeg, 25.0 * kDeg, 0.0, 0.61};
}

JointLimits JointLimits::shrunk(double revolute_margin, double prismatic_margin) const {
    JointLimits s = *this;
    s.phi_min += revolute_margin;
    s.phi_max -= revolute_margin;
    s.theta_min += revolute_margin;
    s.theta_max -= revolute_margin;
    s.d_min += prismatic_margin;
    s.d_max -= prismatic_margin;
    return s;
}

JointLimits JointLimits::widened_revolute(double phi_bound, double theta_bound) const {
    JointLimits w = *this;
    w.phi_min = -phi_bound;
    w.phi_max = phi_bound;
    w.theta_min = -theta_bound;
    w.theta_max = theta_bound;
    return w;
}

CartesianPoint forward_kinematics(const LinkParams& links, const JointState& q) {
    const double cphi = std::cos(q.phi);
    return {
        links.d3 * std::cos(q.theta) * cphi + q.d,
        links.d3 * std::sin(q.phi) + links.d2,
        -links.d3 * std::sin(q.theta) * cphi + links.d1,
    };
}

JointState inverse_kinematics(const LinkParams& links, const CartesianPoint& target,
                              const JointLimits& limits) {
    const double s_phi = (target.y - links.d2) / links.d3;
    if (std::abs(s_phi) > 1.0) {
        std::ostringstream os;
        os << "lateral offset " << target.y - links.d2 << " exceeds arm length " << links.d3;
        throw Error(Fault::OutOfReach, os.str());
    }
    const double phi = std::asin(s_phi);

    const double denom = links.d3 * std::cos(phi);
    const double s_theta = (links.d1 - target.z) / denom;
    if (std::abs(s_theta) > 1.0) {
        std::ostringstream os;
        os << "vertical offset " << links.d1 - target.z << " exceeds reachable height " << denom;
        throw Error(Fault::OutOfReach, os.str());
    }
    const double theta = std::asin(s_theta);

    const double d = target.x - links.d3 * std::cos(theta) * std::cos(phi);

    const JointState q{
        snap(phi, limits.phi_min, limits.phi_max),
        snap(theta, limits.theta_min, limits.theta_max),
        snap(d, limits.d_min, limits.d_max),
    };
    check_limits(limits, q);
    return q;
}

bool within_limits(const JointLimits& limits, const JointState& q, double margin) {
    return q.phi >= limits.phi_min + margin && q.phi <= limits.phi_max - margin &&
           q.theta >= limits.theta_min + margin && q.theta <= limits.theta_max - margin &&
           q.d >= limits.d_min + margin && q.d <= limits.d_max - margin;
}

void check_limits(const JointLimits& limits, const JointState& q, double margin) {
    if (q.phi < limits.phi_min + margin || q.phi > limits.phi_max - margin) {
        throw Error(Fault::LimitViolation,
                    describe("pan", q.phi, limits.phi_min + margin, limits.phi_max - margin));
    }
    if (q.theta < limits.theta_min + margin || q.theta > limits.theta_max - margin) {
        throw Error(Fault::LimitViolation,
                    describe("tilt", q.theta, limits.theta_min + margin, limits.theta_max - margin));
    }
    if (q.d < limits.d_min + margin || q.d > limits.d_max - margin) {
        throw Error(Fault::LimitViolation,
                    describe("extension", q.d, limits.d_min + margin, limits.d_max - margin));
    }
}

CartesianRates velocity_map(const LinkParams& links, const JointState& q, double omega_phi,
                            double omega_theta) {
    const double cphi = std::cos(q.phi);
    return {
        links.d3 * cphi * omega_phi,
        -links.d3 * std::cos(q.theta) * cphi * omega_theta +
            links.d3 * std::sin(q.theta) * std::sin(q.phi) * omega_phi,
    };
}

std::vector<CartesianPoint> sample_workspace(const LinkParams& links, const JointLimits& limits,
                                             int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CartesianPoint> points;
    points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const JointState q{
            rng.uniform(limits.phi_min, limits.phi_max),
            rng.uniform(limits.theta_min, limits.theta_max),
            rng.uniform(limits.d_min, limits.d_max),
        };
        points.push_back(forward_kinematics(links, q));
    }
    return points;
}

} // namespace harvest::kin
