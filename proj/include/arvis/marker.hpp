#pragma once

#include "arvis/camera.hpp"
#include "arvis/geometry.hpp"
#include "arvis/image.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace arvis {

enum class VisionErrorKind { DegenerateConfiguration, OutOfFrame, TooSmall, BehindCamera, Diverged, InvalidArgument };

class VisionError : public std::runtime_error {
public:
    VisionError(VisionErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    VisionErrorKind kind() const { return kind_; }

private:
    VisionErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Thresholding and quad extraction

inline constexpr int kDefaultThresholdWindow = 31;
inline constexpr double kDefaultThresholdOffset = 7.0;

// A pixel is foreground (dark) iff its value is below the mean of the
// window x window neighborhood minus `offset`. The window is cropped at the
// image border and the mean taken over the pixels that remain.
BinaryImage adaptive_threshold(const GrayImage& frame, int window = kDefaultThresholdWindow,
                               double offset = kDefaultThresholdOffset);

// Convex 4-gon in pixel coordinates (pixel centers at integer + 0.5).
// Corners run counter-clockwise as displayed (y down), starting from the
// topmost corner, leftmost on ties.
struct Quad {
    std::array<Vec2, 4> corners;
};

// Outer contour of every 8-connected foreground region, simplified by
// recursive splitting with a tolerance of 2% of the contour perimeter.
std::vector<Quad> extract_quads(const BinaryImage& binary, double min_area);

// Moore-neighbor trace of the outer boundary of the region containing
// `start`, which must be its topmost-leftmost pixel. Clockwise as displayed.
std::vector<std::array<int, 2>> trace_outer_contour(const BinaryImage& binary, int start_x, int start_y);

// ---------------------------------------------------------------------------
// Homography

struct Homography {
    Mat3 m = Mat3::Identity();  // normalized so m(2,2) == 1

    Vec2 map(const Vec2& p) const {
        Vec3 q = m * Vec3(p.x(), p.y(), 1.0);
        return q.head<2>() / q.z();
    }
};

// Exact four-point DLT on centroid/scale conditioned coordinates.
// Throws DegenerateConfiguration if any three src or dst points are collinear.
Homography homography_dlt(const std::array<Vec2, 4>& src, const std::array<Vec2, 4>& dst);

// ---------------------------------------------------------------------------
// Pattern training and matching

inline constexpr int kDefaultPatternGrid = 16;
inline constexpr double kDefaultBorderFraction = 0.25;

// n x n luminance samples of the marker interior, row-major, row 0 at the
// top of the marker.
struct MarkerPattern {
    int n = kDefaultPatternGrid;
    double border_fraction = kDefaultBorderFraction;
    std::vector<std::uint8_t> grid;

    std::uint8_t at(int row, int col) const { return grid[std::size_t(row) * n + col]; }
    bool operator==(const MarkerPattern&) const = default;
};

struct GridSamples {
    int n = 0;
    std::vector<double> values;  // row-major

    double at(int row, int col) const { return values[std::size_t(row) * n + col]; }
};

// Samples the center of each cell of the unit square mapped through H
// (the marker interior) with bilinear interpolation. Throws OutOfFrame.
GridSamples sample_grid(const GrayImage& frame, const Homography& h, int n);

// Area-weighted pooling of the region inside the border. Throws TooSmall if
// the image is narrower or shorter than 2n pixels.
MarkerPattern train_pattern(const GrayImage& image, int n = kDefaultPatternGrid,
                            double border_fraction = kDefaultBorderFraction);

// Rotates a row-major n x n grid by 90 degrees counter-clockwise, k times.
template <typename T>
std::vector<T> rotate_grid_ccw(const std::vector<T>& grid, int n, int k) {
    std::vector<T> cur = grid;
    for (int step = 0; step < ((k % 4) + 4) % 4; ++step) {
        std::vector<T> next(cur.size());
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) next[std::size_t(r) * n + c] = cur[std::size_t(c) * n + (n - 1 - r)];
        }
        cur = std::move(next);
    }
    return cur;
}

struct PatternMatch {
    double confidence = 0.0;  // (1 + ncc) / 2
    int rotation_index = 0;   // samples look like the pattern turned k * 90 degrees counter-clockwise
};

inline constexpr double kDefaultMatchThreshold = 0.75;

std::optional<PatternMatch> match_pattern(const GridSamples& samples, const MarkerPattern& pattern,
                                          double threshold = kDefaultMatchThreshold);

// Four-fold asymmetric marker shipped with the project.
MarkerPattern reference_pattern();

// Printable marker bitmap: black border around the pattern cells.
GrayImage render_marker_bitmap(const MarkerPattern& pattern, int size_px);

// "ARPAT 1" text format.
void write_pattern(std::ostream& out, const MarkerPattern& pattern);
MarkerPattern read_pattern(std::istream& in);

// ---------------------------------------------------------------------------
// Pose

// H maps marker-plane millimeters (corners at +-side/2, z = 0) to pixels.
Pose pose_from_homography(const Homography& h, const CameraIntrinsics& k, double marker_side);

// Sum of squared corner reprojection errors (px^2). Corners follow
// marker_corners() order.
double reprojection_error(const Pose& pose, const std::array<Vec2, 4>& corners, const CameraIntrinsics& k,
                          double marker_side);

struct PoseRefinement {
    Pose pose;
    double initial_error = 0.0;  // px^2
    double final_error = 0.0;    // px^2
    int iterations = 0;
};

// Gauss-Newton on the four corner reprojections with a multiplicative
// rotation update. final_error <= initial_error always holds.
PoseRefinement refine_pose(const Pose& initial, const std::array<Vec2, 4>& corners, const CameraIntrinsics& k,
                           double marker_side);

// ---------------------------------------------------------------------------
// Detection

struct DetectorConfig {
    int window = kDefaultThresholdWindow;
    double offset = kDefaultThresholdOffset;
    double min_area = 400.0;
    double match_threshold = kDefaultMatchThreshold;
};

struct Detection {
    Pose pose;
    double confidence = 0.0;
    int rotation_index = 0;
    std::array<Vec2, 4> corners;  // pattern top-left first, counter-clockwise as displayed
    double yaw = 0.0;
    double reprojection_rms = 0.0;  // px
};

// Fits straight lines to the gray-level edges of a coarse quad and
// returns their intersections.
std::array<Vec2, 4> refine_quad_corners(const GrayImage& frame, const std::array<Vec2, 4>& coarse);

std::optional<Detection> detect_marker(const Frame& frame, const MarkerPattern& pattern, const CameraIntrinsics& k,
                                       double marker_side, const DetectorConfig& config = {});

}  // namespace arvis
