#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <limits>
#include <span>

namespace arvis {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Axis-aligned box in millimeters. A default-constructed box is empty.
struct Bbox {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

    bool empty() const { return (min.array() > max.array()).any(); }
    void extend(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    Vec3 center() const { return 0.5 * (min + max); }
    Vec3 extent() const { return empty() ? Vec3::Zero() : Vec3(max - min); }
};

Bbox bounding_box(std::span<const Vec3> points);

// Placement of a model relative to the marker.
//
// A model point p is mapped to
//     scale * Rz(rot_z) * Ry(rot_y) * Rx(rot_x) * (p - pivot) + pivot + translation
// in model axes (y up), so rotations act about the bbox center stored in
// `pivot`. to_marker() additionally maps model axes onto the marker frame,
// where +z points from the camera into the marker plane: model +y becomes
// marker -z (out of the marker, towards the viewer), model +z becomes
// marker +y.
struct ModelTransform {
    double rot_x = 0.0;
    double rot_y = 0.0;
    double rot_z = 0.0;
    double scale = 1.0;
    Vec3 translation = Vec3::Zero();
    Vec3 pivot = Vec3::Zero();

    Mat3 rotation() const;
    Vec3 apply(const Vec3& p) const;
    Vec3 to_marker(const Vec3& p) const;
    // Single affine map equivalent to to_marker().
    Eigen::Affine3d marker_matrix() const;
};

// Rotation taking model axes (y up) to marker axes.
Mat3 marker_from_model_axes();

}  // namespace arvis
