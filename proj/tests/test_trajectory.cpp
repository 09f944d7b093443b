#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "harvestsim/rng.hpp"
#include "harvestsim/trajectory.hpp"

using namespace harvest;
using namespace harvest::traj;

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kOracleTol = 1e-12;
constexpr double kFdRelTol = 1e-6;

// Independent route to the coefficients: boundary conditions as a 6x6 linear
// system, solved in extended precision.
std::array<double, 6> solve_boundary_system(double p0, double pf, double t_f) {
    using Mat = Eigen::Matrix<long double, 6, 6>;
    using Vec = Eigen::Matrix<long double, 6, 1>;
    const long double T = t_f;
    Mat A = Mat::Zero();
    Vec b;
    // p(0), v(0), a(0)
    A(0, 0) = 1.0L;
    A(1, 1) = 1.0L;
    A(2, 2) = 2.0L;
    b << p0, 0.0L, 0.0L, pf, 0.0L, 0.0L;
    // p(T), v(T), a(T)
    long double pw = 1.0L;
    for (int k = 0; k < 6; ++k) {
        A(3, k) = pw;
        if (k >= 1) {
            A(4, k) = k * pw / T;
        }
        if (k >= 2) {
            A(5, k) = static_cast<long double>(k) * (k - 1) * pw / (T * T);
        }
        pw *= T;
    }
    const Vec x = A.colPivHouseholderQr().solve(b);
    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) {
        out[static_cast<std::size_t>(k)] = static_cast<double>(x(k));
    }
    return out;
}

} // namespace

TEST_CASE("coefficients for a unit stroke over two seconds") {
    const auto axis = QuinticAxis::plan(0.0, 1.0, 2.0);
    const auto& a = axis.coefficients();
    CHECK(a[0] == 0.0);
    CHECK(a[1] == 0.0);
    CHECK(a[2] == 0.0);
    CHECK(a[3] == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(a[4] == doctest::Approx(-0.9375).epsilon(1e-15));
    CHECK(a[5] == doctest::Approx(0.1875).epsilon(1e-15));

    const auto mid = axis.at(1.0);
    CHECK(mid.pos == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mid.vel == doctest::Approx(0.9375).epsilon(1e-12));
}

TEST_CASE("closed form matches the boundary-condition linear system") {
    Rng rng(11);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double p0 = rng.uniform(-1.0, 1.0);
        const double pf = rng.uniform(-1.0, 1.0);
        const double t_f = rng.uniform(0.5, 10.0);
        const auto axis = QuinticAxis::plan(p0, pf, t_f);
        const auto oracle = solve_boundary_system(p0, pf, t_f);
        for (int k = 0; k < 6; ++k) {
            worst = std::max(worst, std::abs(axis.coefficients()[k] - oracle[k]));
        }
    }
    CHECK(worst < kOracleTol);
}

TEST_CASE("rest-to-rest boundary conditions hold for random plans") {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const double p0 = rng.uniform(-1.0, 1.0);
        const double pf = rng.uniform(-1.0, 1.0);
        const double t_f = rng.uniform(0.5, 10.0);
        const auto axis = QuinticAxis::plan(p0, pf, t_f);

        const auto s0 = axis.at(0.0);
        CHECK(std::abs(s0.pos - p0) < kBoundaryTol);
        CHECK(std::abs(s0.vel) < kBoundaryTol);
        CHECK(std::abs(s0.acc) < kBoundaryTol);

        // Evaluate the raw polynomial just inside the ends; the clamped
        // endpoint samples return exact zeros by construction.
        const auto near_end = axis.at(t_f * (1.0 - 1e-9));
        CHECK(std::abs(near_end.pos - pf) < 1e-6);

        const auto sf = axis.at(t_f);
        CHECK(std::abs(sf.pos - pf) < kBoundaryTol);
        CHECK(sf.vel == 0.0);
        CHECK(sf.acc == 0.0);
    }
}

TEST_CASE("sampled derivatives match finite differences") {
    Rng rng(13);
    const double h = 1e-6;
    for (int i = 0; i < 500; ++i) {
        const auto axis =
            QuinticAxis::plan(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.5, 10.0));
        const double t = rng.uniform(2.0 * h, axis.horizon() - 2.0 * h);
        const auto s = axis.at(t);
        const double vel_fd = (axis.at(t + h).pos - axis.at(t - h).pos) / (2.0 * h);
        const double acc_fd = (axis.at(t + h).vel - axis.at(t - h).vel) / (2.0 * h);
        CHECK(std::abs(s.vel - vel_fd) / std::max(1.0, std::abs(s.vel)) < kFdRelTol);
        CHECK(std::abs(s.acc - acc_fd) / std::max(1.0, std::abs(s.acc)) < kFdRelTol);
    }
}

TEST_CASE("evaluation clamps outside the horizon") {
    const auto axis = QuinticAxis::plan(0.2, -0.4, 1.5);
    const auto before = axis.at(-3.0);
    CHECK(before.pos == 0.2);
    CHECK(before.vel == 0.0);
    const auto after = axis.at(9.0);
    CHECK(after.pos == -0.4);
    CHECK(after.vel == 0.0);
    CHECK(after.acc == 0.0);
}

TEST_CASE("monotone approach for a monotone stroke") {
    const auto axis = QuinticAxis::plan(-0.3, 0.5, 2.0);
    double prev = axis.at(0.0).pos;
    for (int i = 1; i <= 2000; ++i) {
        const double cur = axis.at(2.0 * i / 2000.0).pos;
        CHECK(cur >= prev - 1e-15);
        prev = cur;
    }
}

TEST_CASE("peak speed sits at midstroke") {
    Rng rng(14);
    for (int i = 0; i < 50; ++i) {
        const double p0 = rng.uniform(-1.0, 1.0);
        const double pf = rng.uniform(-1.0, 1.0);
        const double t_f = rng.uniform(0.5, 6.0);
        const auto axis = QuinticAxis::plan(p0, pf, t_f);

        double vmax = 0.0;
        for (int k = 0; k <= 4000; ++k) {
            vmax = std::max(vmax, std::abs(axis.at(t_f * k / 4000.0).vel));
        }
        const double expected = 1.875 * std::abs(pf - p0) / t_f;
        CHECK(std::abs(vmax - expected) <= 1e-6 * std::max(1.0, expected));
        CHECK(std::abs(std::abs(axis.at(0.5 * t_f).vel) - expected) < 1e-12);
    }
}

TEST_CASE("time scaling stretches the profile without reshaping it") {
    const auto fast = QuinticAxis::plan(0.1, 0.9, 1.0);
    const auto slow = QuinticAxis::plan(0.1, 0.9, 3.0);
    for (int k = 0; k <= 100; ++k) {
        const double s = k / 100.0;
        CHECK(fast.at(s).pos == doctest::Approx(slow.at(3.0 * s).pos).epsilon(1e-12));
        CHECK(fast.at(s).vel == doctest::Approx(3.0 * slow.at(3.0 * s).vel).epsilon(1e-12));
    }
}

TEST_CASE("nonpositive horizons are rejected") {
    for (double t_f : {0.0, -1.0}) {
        try {
            QuinticAxis::plan(0.0, 1.0, t_f);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.fault() == Fault::InvalidHorizon);
        }
    }
}

TEST_CASE("cartesian reference reaches the goal with zero end rates") {
    const kin::CartesianPoint start{0.6985, 0.0889, 0.0635};
    const kin::CartesianPoint goal{0.6936, 0.1938, 0.0095};
    const auto ref = plan_cartesian_reference(start, goal, 2.0);
    CHECK(ref.y.at(2.0).pos == doctest::Approx(0.1938).epsilon(1e-12));
    CHECK(ref.z.at(2.0).pos == doctest::Approx(0.0095).epsilon(1e-12));
    CHECK(ref.y.at(2.0).vel == 0.0);
    CHECK(ref.z.at(2.0).vel == 0.0);
    CHECK(ref.y.at(0.0).pos == doctest::Approx(0.0889).epsilon(1e-12));
}

TEST_CASE("joint reference spans all three joints independently") {
    const kin::JointState q0{0.0, 0.1, 0.0};
    const kin::JointState q1{-0.2, 0.1, 0.4};
    const auto ref = plan_joint_reference(q0, q1, 2.0);
    CHECK(ref.phi.at(2.0).pos == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(ref.theta.at(1.0).pos == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ref.theta.at(1.0).vel == 0.0);
    CHECK(ref.d.at(2.0).pos == doctest::Approx(0.4).epsilon(1e-12));
}
