#include "arvis/marker.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace arvis {

namespace {

Mat3 nearest_rotation(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    const Mat3& v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0) u.col(2) = -u.col(2);
    return u * v.transpose();
}

Mat3 skew(const Vec3& w) {
    Mat3 s;
    s << 0, -w.z(), w.y(),
         w.z(), 0, -w.x(),
         -w.y(), w.x(), 0;
    return s;
}

constexpr double kMinDepth = 1e-6;

bool all_in_front(const Pose& pose, double marker_side) {
    for (const Vec3& c : marker_corners(marker_side)) {
        if (!(pose.apply(c).z() > kMinDepth)) return false;
    }
    return true;
}

using Residuals = Eigen::Matrix<double, 8, 1>;
using Jacobian = Eigen::Matrix<double, 8, 6>;

Residuals residuals(const Pose& pose, const std::array<Vec2, 4>& corners, const CameraIntrinsics& k,
                    double marker_side) {
    Residuals r;
    const auto model = marker_corners(marker_side);
    for (int i = 0; i < 4; ++i) r.segment<2>(2 * i) = k.project(pose.apply(model[i])) - corners[i];
    return r;
}

// Columns: rotation increment (left-multiplied), then translation.
Jacobian jacobian(const Pose& pose, const CameraIntrinsics& k, double marker_side) {
    Jacobian j;
    const auto model = marker_corners(marker_side);
    for (int i = 0; i < 4; ++i) {
        const Vec3 rotated = pose.rotation * model[i];
        const Vec3 p = rotated + pose.translation;
        const double iz = 1.0 / p.z();
        Eigen::Matrix<double, 2, 3> dproj;
        dproj << k.fx * iz, 0, -k.fx * p.x() * iz * iz,
                 0, k.fy * iz, -k.fy * p.y() * iz * iz;
        j.block<2, 3>(2 * i, 0) = dproj * -skew(rotated);
        j.block<2, 3>(2 * i, 3) = dproj;
    }
    return j;
}

}  // namespace

Pose pose_from_homography(const Homography& h, const CameraIntrinsics& k, double marker_side) {
    if (!(marker_side > 0.0)) throw VisionError(VisionErrorKind::InvalidArgument, "marker side must be positive");
    const Mat3 m = k.inverse() * h.m;
    const Vec3 a1 = m.col(0), a2 = m.col(1), a3 = m.col(2);
    const double norm_sum = a1.norm() + a2.norm();
    if (!(norm_sum > 0.0) || !std::isfinite(norm_sum))
        throw VisionError(VisionErrorKind::DegenerateConfiguration, "homography has a degenerate rotation part");
    double lambda = 2.0 / norm_sum;
    if (lambda * a3.z() < 0) lambda = -lambda;  // marker must face the camera

    Mat3 approx;
    approx.col(0) = lambda * a1;
    approx.col(1) = lambda * a2;
    approx.col(2) = approx.col(0).cross(approx.col(1));

    Pose pose;
    pose.rotation = nearest_rotation(approx);
    pose.translation = lambda * a3;
    if (!(pose.translation.z() > 0.0) || !all_in_front(pose, marker_side))
        throw VisionError(VisionErrorKind::BehindCamera, "marker would lie behind the camera");
    return pose;
}

double reprojection_error(const Pose& pose, const std::array<Vec2, 4>& corners, const CameraIntrinsics& k,
                          double marker_side) {
    return residuals(pose, corners, k, marker_side).squaredNorm();
}

PoseRefinement refine_pose(const Pose& initial, const std::array<Vec2, 4>& corners, const CameraIntrinsics& k,
                           double marker_side) {
    constexpr int kMaxIterations = 20;
    // stop once a step can gain no more than this, relative to the error,
    // with a floor for the noiseless case
    constexpr double kRelativeImprovement = 1e-12;
    constexpr double kMinImprovement = 1e-24;  // px^2
    constexpr int kMaxFailures = 3;
    constexpr int kHalvings = 10;

    if (!all_in_front(initial, marker_side))
        throw VisionError(VisionErrorKind::BehindCamera, "initial pose has corners behind the camera");

    PoseRefinement out;
    out.pose = initial;
    out.initial_error = out.final_error = reprojection_error(initial, corners, k, marker_side);

    double damping = 0.0;
    int failures = 0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const Residuals r = residuals(out.pose, corners, k, marker_side);
        const Jacobian j = jacobian(out.pose, k, marker_side);
        Eigen::Matrix<double, 6, 6> normal = j.transpose() * j;
        normal.diagonal().array() += damping * normal.diagonal().array();
        const Eigen::Matrix<double, 6, 1> step = normal.ldlt().solve(-j.transpose() * r);
        if (!step.allFinite()) break;

        const double predicted = r.squaredNorm() - (r + j * step).squaredNorm();
        const double enough = std::max(kMinImprovement, kRelativeImprovement * out.final_error);
        if (predicted < enough) break;

        bool accepted = false;
        double alpha = 1.0;
        for (int h = 0; h <= kHalvings && !accepted; ++h, alpha *= 0.5) {
            Pose trial;
            const Vec3 w = alpha * step.head<3>();
            const double angle = w.norm();
            const Mat3 dr = angle > 0 ? Mat3(Eigen::AngleAxisd(angle, w / angle)) : Mat3::Identity();
            trial.rotation = dr * out.pose.rotation;
            trial.translation = out.pose.translation + alpha * step.tail<3>();
            if (!all_in_front(trial, marker_side)) continue;
            const double e = reprojection_error(trial, corners, k, marker_side);
            if (e < out.final_error) {
                const double improvement = out.final_error - e;
                out.pose = trial;
                out.final_error = e;
                accepted = true;
                if (improvement < enough) iter = kMaxIterations;
            }
        }
        ++out.iterations;
        if (accepted) {
            failures = 0;
            damping *= 0.1;
        } else {
            if (++failures >= kMaxFailures)
                throw VisionError(VisionErrorKind::Diverged, "pose refinement failed to reduce the error");
            damping = damping == 0.0 ? 1e-3 : damping * 10.0;
        }
    }
    Pose ortho = out.pose;
    ortho.rotation = nearest_rotation(ortho.rotation);
    const double e = reprojection_error(ortho, corners, k, marker_side);
    if (e <= out.final_error) {
        out.pose = ortho;
        out.final_error = e;
    }
    return out;
}

}  // namespace arvis
