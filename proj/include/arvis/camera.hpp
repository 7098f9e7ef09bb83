#pragma once

#include "arvis/geometry.hpp"

#include <array>

namespace arvis {

// Pinhole camera without lens distortion.
struct CameraIntrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;

    Mat3 matrix() const;
    Mat3 inverse() const;
    Vec2 project(const Vec3& p_cam) const { return {fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy}; }
    // Ray direction (z = 1) through a pixel position.
    Vec3 unproject(const Vec2& px) const { return {(px.x() - cx) / fx, (px.y() - cy) / fy, 1.0}; }
};

// Marker-to-camera rigid transform: p_cam = rotation * p_marker + translation (mm).
struct Pose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    Eigen::Affine3d matrix() const;
};

// Marker corners on the z = 0 plane, ordered top-left, bottom-left,
// bottom-right, top-right (counter-clockwise as seen by a camera looking
// at a frontal marker with image y pointing down).
std::array<Vec3, 4> marker_corners(double marker_side);

// Pose of a marker at `distance` mm on the optical axis, spun by `yaw`
// about its normal (counter-clockwise on screen) and then tilted by `tilt`
// about the camera x axis. Angles in radians.
Pose make_marker_pose(double tilt, double yaw, double distance);

// Spin of the marker about its own normal, measured counter-clockwise on
// screen from the camera x axis projected into the marker plane.
double marker_yaw(const Mat3& rotation);

// Rotation angle (radians) of a^T b.
double rotation_angle_between(const Mat3& a, const Mat3& b);

}  // namespace arvis
