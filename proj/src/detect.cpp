#include "arvis/marker.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace arvis {

namespace {

double sample_bilinear(const GrayImage& img, const Vec2& p) {
    double fx = std::clamp(p.x() - 0.5, 0.0, double(img.width - 1));
    double fy = std::clamp(p.y() - 0.5, 0.0, double(img.height - 1));
    int x0 = int(fx), y0 = int(fy);
    int x1 = std::min(x0 + 1, img.width - 1), y1 = std::min(y0 + 1, img.height - 1);
    double ax = fx - x0, ay = fy - y0;
    double top = (1 - ax) * img.at(x0, y0) + ax * img.at(x1, y0);
    double bottom = (1 - ax) * img.at(x0, y1) + ax * img.at(x1, y1);
    return (1 - ay) * top + ay * bottom;
}

struct Line {
    Vec2 point;
    Vec2 direction;  // unit
};

std::optional<Vec2> intersect(const Line& a, const Line& b) {
    double det = a.direction.x() * b.direction.y() - a.direction.y() * b.direction.x();
    if (std::abs(det) < 1e-9) return std::nullopt;
    Vec2 d = b.point - a.point;
    double t = (d.x() * b.direction.y() - d.y() * b.direction.x()) / det;
    return a.point + t * a.direction;
}

// Total least squares line through the points.
Line fit_line(const std::vector<Vec2>& pts) {
    Vec2 mean = Vec2::Zero();
    for (const Vec2& p : pts) mean += p;
    mean /= double(pts.size());
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const Vec2& p : pts) cov += (p - mean) * (p - mean).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    return {mean, es.eigenvectors().col(1).normalized()};
}

constexpr double kProfileHalfWidth = 3.0;  // px
constexpr double kProfileStep = 0.125;     // px
constexpr double kMinEdgeContrast = 12.0;  // gray levels

// Locates the dark-to-light transition along `outward` near `base`.
std::optional<Vec2> edge_point(const GrayImage& frame, const Vec2& base, const Vec2& outward) {
    const int steps = int(2 * kProfileHalfWidth / kProfileStep);
    std::vector<double> profile(steps + 1);
    for (int i = 0; i <= steps; ++i) profile[i] = sample_bilinear(frame, base + (-kProfileHalfWidth + i * kProfileStep) * outward);
    const double inner = profile.front();
    const double outer = profile.back();
    if (outer - inner < kMinEdgeContrast) return std::nullopt;
    const double mid = 0.5 * (inner + outer);
    for (int i = 0; i < steps; ++i) {
        if (profile[i] < mid && profile[i + 1] >= mid) {
            double t = (mid - profile[i]) / (profile[i + 1] - profile[i]);
            return base + (-kProfileHalfWidth + (i + t) * kProfileStep) * outward;
        }
    }
    return std::nullopt;
}

}  // namespace

std::array<Vec2, 4> refine_quad_corners(const GrayImage& frame, const std::array<Vec2, 4>& coarse) {
    std::array<Vec2, 4> corners = coarse;
    for (int pass = 0; pass < 2; ++pass) {
        Vec2 centroid = Vec2::Zero();
        for (const Vec2& c : corners) centroid += c;
        centroid /= 4.0;

        std::array<Line, 4> lines;
        for (int side = 0; side < 4; ++side) {
            const Vec2 a = corners[side];
            const Vec2 b = corners[(side + 1) % 4];
            const double len = (b - a).norm();
            const Vec2 dir = (b - a) / len;
            Vec2 outward(-dir.y(), dir.x());
            if (outward.dot(0.5 * (a + b) - centroid) < 0) outward = -outward;

            std::vector<Vec2> pts;
            const int samples = std::max(8, int(len));
            for (int s = 0; s < samples; ++s) {
                const double t = 0.12 + 0.76 * (s + 0.5) / samples;
                if (auto p = edge_point(frame, a + t * (b - a), outward)) pts.push_back(*p);
            }
            lines[side] = pts.size() >= 4 ? fit_line(pts) : Line{a, dir};
        }
        std::array<Vec2, 4> refined;
        for (int i = 0; i < 4; ++i) {
            auto p = intersect(lines[(i + 3) % 4], lines[i]);
            // keep the coarse corner if the fit wandered off
            refined[i] = (p && (*p - corners[i]).norm() < 4.0) ? *p : corners[i];
        }
        corners = refined;
    }
    return corners;
}

std::optional<Detection> detect_marker(const Frame& frame, const MarkerPattern& pattern, const CameraIntrinsics& k,
                                       double marker_side, const DetectorConfig& config) {
    if (frame.width < 16 || frame.height < 16 || frame.data.size() != std::size_t(frame.width) * frame.height)
        throw VisionError(VisionErrorKind::InvalidArgument, "frame must be at least 16x16 pixels");

    const BinaryImage binary = adaptive_threshold(frame, config.window, config.offset);
    const std::vector<Quad> quads = extract_quads(binary, config.min_area);

    // unit square -> marker interior
    const double bf = pattern.border_fraction;
    Mat3 interior;
    interior << 1 - 2 * bf, 0, bf,
                0, 1 - 2 * bf, bf,
                0, 0, 1;
    const std::array<Vec2, 4> unit_square{Vec2(0, 0), Vec2(0, 1), Vec2(1, 1), Vec2(1, 0)};

    struct Candidate {
        std::array<Vec2, 4> corners;
        PatternMatch match;
    };
    std::optional<Candidate> best;
    for (const Quad& quad : quads) {
        try {
            const auto corners = refine_quad_corners(frame, quad.corners);
            Homography h = homography_dlt(unit_square, corners);
            h.m = h.m * interior;
            const GridSamples samples = sample_grid(frame, h, pattern.n);
            auto match = match_pattern(samples, pattern, config.match_threshold);
            if (match && (!best || match->confidence > best->match.confidence)) best = Candidate{corners, *match};
        } catch (const VisionError&) {
            continue;
        }
    }
    if (!best) return std::nullopt;

    // Pattern top-left sits at quad corner `rotation_index`.
    Detection det;
    det.confidence = best->match.confidence;
    det.rotation_index = best->match.rotation_index;
    for (int i = 0; i < 4; ++i) det.corners[i] = best->corners[(i + det.rotation_index) % 4];

    std::array<Vec2, 4> plane;
    const auto model = marker_corners(marker_side);
    for (int i = 0; i < 4; ++i) plane[i] = model[i].head<2>();
    try {
        const Homography h = homography_dlt(plane, det.corners);
        const Pose initial = pose_from_homography(h, k, marker_side);
        const PoseRefinement refined = refine_pose(initial, det.corners, k, marker_side);
        det.pose = refined.pose;
        det.reprojection_rms = std::sqrt(refined.final_error / 4.0);
    } catch (const VisionError&) {
        return std::nullopt;
    }
    det.yaw = marker_yaw(det.pose.rotation);
    return det;
}

}  // namespace arvis
