#pragma once

#include <Eigen/Dense>
#include <vector>

#include "harvestsim/errors.hpp"
#include "harvestsim/kinematics.hpp"
#include "harvestsim/rng.hpp"

namespace harvest::percep {

struct CameraIntrinsics {
    double fx = 920.0;
    double fy = 920.0;
    double cx = 640.0;
    double cy = 360.0;
    int width = 1280;
    int height = 720;
};

// Axis-aligned detection box with its per-pixel range matrix, row major.
// Pixel coordinates are continuous; the box center is the localization cue.
struct Detection {
    double u_min = 0.0;
    double v_min = 0.0;
    double u_max = 0.0;
    double v_max = 0.0;
    std::vector<double> range; // m, NaN marks a dropped return
    int rows = 0;
    int cols = 0;
};

struct DepthWindow {
    double min_m = 0.05;
    double max_m = 5.0;
};

// Mean of the finite in-window samples. Throws NoValidDepth when none remain.
double mean_depth(const Detection& det, const DepthWindow& window);

// Pinhole back-projection of the box center at depth z, camera frame.
kin::CartesianPoint back_project(const Detection& det, const CameraIntrinsics& cam, double z);

// Camera-to-base pose. R maps camera-frame vectors into the base frame.
struct RigidTransform {
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();

    RigidTransform inverse() const;
};

// Throws InvalidTransform unless R is orthonormal with det +1 (tol 1e-9).
void validate(const RigidTransform& T);

kin::CartesianPoint to_base_frame(const RigidTransform& cam_to_base, const kin::CartesianPoint& p_cam);

struct DetectionNoise {
    double pixel_sigma = 0.0; // px, on the box center
    double depth_sigma = 0.0; // m, independent per range sample
};

// Projects a base-frame target into the camera and builds the detection a
// perfect detector would report, plus the requested noise. The zero-noise
// output inverts exactly through mean_depth / back_project / to_base_frame.
// Throws OutOfView when the target sits behind the camera or the box leaves
// the image.
Detection synthesize_detection(const kin::CartesianPoint& target_base,
                               const RigidTransform& cam_to_base, const CameraIntrinsics& cam,
                               const DetectionNoise& noise, int box_half_px, Rng& rng);

// Full localization pipeline: depth average, back-projection, base transform.
kin::CartesianPoint locate_target(const Detection& det, const CameraIntrinsics& cam,
                                  const RigidTransform& cam_to_base, const DepthWindow& window);

} // namespace harvest::percep
