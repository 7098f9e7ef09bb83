#include "arvis/camera.hpp"

#include <algorithm>
#include <cmath>

namespace arvis {

Mat3 CameraIntrinsics::matrix() const {
    Mat3 k;
    k << fx, 0, cx,
         0, fy, cy,
         0, 0, 1;
    return k;
}

Mat3 CameraIntrinsics::inverse() const {
    Mat3 k;
    k << 1.0 / fx, 0, -cx / fx,
         0, 1.0 / fy, -cy / fy,
         0, 0, 1;
    return k;
}

Eigen::Affine3d Pose::matrix() const {
    Eigen::Affine3d m = Eigen::Affine3d::Identity();
    m.linear() = rotation;
    m.translation() = translation;
    return m;
}

std::array<Vec3, 4> marker_corners(double marker_side) {
    double h = 0.5 * marker_side;
    return {Vec3(-h, -h, 0), Vec3(-h, h, 0), Vec3(h, h, 0), Vec3(h, -h, 0)};
}

Pose make_marker_pose(double tilt, double yaw, double distance) {
    Pose pose;
    // Counter-clockwise on screen is a rotation about -z (image y points down).
    pose.rotation = (Eigen::AngleAxisd(tilt, Vec3::UnitX()) * Eigen::AngleAxisd(-yaw, Vec3::UnitZ())).toRotationMatrix();
    pose.translation = Vec3(0, 0, distance);
    return pose;
}

double marker_yaw(const Mat3& rotation) {
    Vec3 normal = rotation.col(2);
    Vec3 reference = Vec3::UnitX() - normal.x() * normal;
    if (reference.norm() < 1e-12) reference = Vec3::UnitY() - normal.y() * normal;
    reference.normalize();
    Vec3 marker_x = rotation.col(0);
    return std::atan2(reference.cross(marker_x).dot(-normal), reference.dot(marker_x));
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
    return Eigen::AngleAxisd(Mat3(a.transpose() * b)).angle();
}

}  // namespace arvis
