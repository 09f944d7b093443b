#include "harvestsim/perception.hpp"

#include <cmath>
#include <sstream>

namespace harvest::percep {

double mean_depth(const Detection& det, const DepthWindow& window) {
    double sum = 0.0;
    int n = 0;
    for (double r : det.range) {
        if (std::isfinite(r) && r >= window.min_m && r <= window.max_m) {
            sum += r;
            ++n;
        }
    }
    if (n == 0) {
        throw Error(Fault::NoValidDepth, "no finite in-window samples in the range matrix");
    }
    return sum / static_cast<double>(n);
}

kin::CartesianPoint back_project(const Detection& det, const CameraIntrinsics& cam, double z) {
    const double u = 0.5 * (det.u_min + det.u_max);
    const double v = 0.5 * (det.v_min + det.v_max);
    return {(u - cam.cx) * z / cam.fx, (v - cam.cy) * z / cam.fy, z};
}

RigidTransform RigidTransform::inverse() const {
    RigidTransform inv;
    inv.R = R.transpose();
    inv.t = -(R.transpose() * t);
    return inv;
}

void validate(const RigidTransform& T) {
    const double ortho = (T.R.transpose() * T.R - Eigen::Matrix3d::Identity()).norm();
    const double det = T.R.determinant();
    if (ortho > 1e-9 || std::abs(det - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "rotation fails orthonormality (residual " << ortho << ", det " << det << ")";
        throw Error(Fault::InvalidTransform, os.str());
    }
}

kin::CartesianPoint to_base_frame(const RigidTransform& cam_to_base,
                                  const kin::CartesianPoint& p_cam) {
    validate(cam_to_base);
    const Eigen::Vector3d p = cam_to_base.R * Eigen::Vector3d(p_cam.x, p_cam.y, p_cam.z) +
                              cam_to_base.t;
    return {p.x(), p.y(), p.z()};
}

Detection synthesize_detection(const kin::CartesianPoint& target_base,
                               const RigidTransform& cam_to_base, const CameraIntrinsics& cam,
                               const DetectionNoise& noise, int box_half_px, Rng& rng) {
    validate(cam_to_base);
    const Eigen::Vector3d p_cam =
        cam_to_base.R.transpose() *
        (Eigen::Vector3d(target_base.x, target_base.y, target_base.z) - cam_to_base.t);
    const double z = p_cam.z();
    if (z <= 0.0) {
        std::ostringstream os;
        os << "target depth " << z << " is behind the camera";
        throw Error(Fault::OutOfView, os.str());
    }

    const double u = cam.cx + cam.fx * p_cam.x() / z + rng.gaussian(noise.pixel_sigma);
    const double v = cam.cy + cam.fy * p_cam.y() / z + rng.gaussian(noise.pixel_sigma);
    const double half = static_cast<double>(box_half_px);
    if (u - half < 0.0 || u + half > cam.width || v - half < 0.0 || v + half > cam.height) {
        std::ostringstream os;
        os << "detection box around (" << u << ", " << v << ") leaves the " << cam.width << "x"
           << cam.height << " image";
        throw Error(Fault::OutOfView, os.str());
    }

    Detection det;
    det.u_min = u - half;
    det.u_max = u + half;
    det.v_min = v - half;
    det.v_max = v + half;
    det.rows = 2 * box_half_px + 1;
    det.cols = 2 * box_half_px + 1;
    det.range.resize(static_cast<std::size_t>(det.rows) * det.cols);
    for (auto& r : det.range) {
        r = z + rng.gaussian(noise.depth_sigma);
    }
    return det;
}

kin::CartesianPoint locate_target(const Detection& det, const CameraIntrinsics& cam,
                                  const RigidTransform& cam_to_base, const DepthWindow& window) {
    const double z = mean_depth(det, window);
    return to_base_frame(cam_to_base, back_project(det, cam, z));
}

} // namespace harvest::percep
