#pragma once

#include "arvis/camera.hpp"
#include "arvis/geometry.hpp"
#include "arvis/image.hpp"
#include "arvis/marker.hpp"
#include "arvis/stl.hpp"

#include <array>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace arvis {

inline constexpr double kNearPlane = 1.0;  // mm
inline constexpr double kAmbient = 0.2;
inline constexpr std::array<std::uint8_t, 3> kModelColor{255, 170, 60};
inline constexpr std::array<std::uint8_t, 3> kWireColor{0, 255, 255};

enum class RenderErrorKind { DimensionMismatch, OutsideFrustum };

class RenderError : public std::runtime_error {
public:
    RenderError(RenderErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    RenderErrorKind kind() const { return kind_; }

private:
    RenderErrorKind kind_;
};

struct ProjectedPoint {
    Vec2 pixel = Vec2::Zero();
    double z = 0.0;        // camera-space depth, mm
    bool clipped = false;  // z <= near plane; pixel is meaningless
};

// p_cam = pose * model.to_marker(p), then pinhole projection.
std::vector<ProjectedPoint> project_points(std::span<const Vec3> points, const ModelTransform& model,
                                           const Pose& pose, const CameraIntrinsics& k);

struct ProjectedEdge {
    ProjectedPoint a;
    ProjectedPoint b;
};

struct RenderedImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> color;  // RGB, black where uncovered
    std::vector<float> depth;         // +inf where uncovered
    std::vector<ProjectedEdge> edges;  // mesh edges of the drawn faces, for wireframe overlays

    bool covered(int x, int y) const { return depth[std::size_t(y) * width + x] != std::numeric_limits<float>::infinity(); }
    std::size_t covered_count() const;
};

// Z-buffered flat shading lit from the camera, pixel centers at +0.5 and a
// top-left fill rule. Faces with a vertex on or behind the near plane are
// skipped.
RenderedImage rasterize(const IndexedMesh& mesh, const ModelTransform& model, const Pose& pose,
                        const CameraIntrinsics& k, int width, int height);

// Throws DimensionMismatch when sizes differ.
RgbImage composite_overlay(const Frame& frame, const RenderedImage& render, bool wireframe);

// Renders a marker at `pose` over a uniform background with 2x2
// supersampling. Cells are sharp, as on a printed marker. Throws
// OutsideFrustum unless all four corners project inside the frame.
Frame synthesize_marker_frame(const MarkerPattern& pattern, const Pose& pose, const CameraIntrinsics& k,
                              double marker_side, int width, int height, std::uint8_t background);

RgbImage render_to_rgb(const RenderedImage& render);

}  // namespace arvis
