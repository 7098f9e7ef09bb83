#include "arvis/geometry.hpp"

namespace arvis {

Bbox bounding_box(std::span<const Vec3> points) {
    Bbox box;
    for (const Vec3& p : points) box.extend(p);
    return box;
}

Mat3 ModelTransform::rotation() const {
    return (Eigen::AngleAxisd(rot_z, Vec3::UnitZ()) * Eigen::AngleAxisd(rot_y, Vec3::UnitY()) *
            Eigen::AngleAxisd(rot_x, Vec3::UnitX()))
        .toRotationMatrix();
}

Vec3 ModelTransform::apply(const Vec3& p) const { return scale * (rotation() * (p - pivot)) + pivot + translation; }

Vec3 ModelTransform::to_marker(const Vec3& p) const { return marker_from_model_axes() * apply(p); }

Eigen::Affine3d ModelTransform::marker_matrix() const {
    Eigen::Affine3d m = Eigen::Affine3d::Identity();
    m.linear() = marker_from_model_axes() * (scale * rotation());
    m.translation() = marker_from_model_axes() * (pivot + translation - scale * (rotation() * pivot));
    return m;
}

Mat3 marker_from_model_axes() {
    Mat3 a;
    // columns: images of model x, y, z
    a << 1, 0, 0,
         0, 0, 1,
         0, -1, 0;
    return a;
}

}  // namespace arvis
