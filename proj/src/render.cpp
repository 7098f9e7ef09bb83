#include "arvis/render.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace arvis {

namespace {

double edge_fn(const Vec2& a, const Vec2& b, const Vec2& p) {
    return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

// Top-left rule for triangles wound clockwise as displayed: left edges run
// upwards, top edges run to the right.
bool owns_boundary(const Vec2& a, const Vec2& b) {
    double dy = b.y() - a.y();
    return dy < 0 || (dy == 0 && b.x() > a.x());
}

void put_pixel(std::vector<std::uint8_t>& rgb, std::size_t idx, const std::array<std::uint8_t, 3>& c) {
    rgb[3 * idx] = c[0];
    rgb[3 * idx + 1] = c[1];
    rgb[3 * idx + 2] = c[2];
}

}  // namespace

std::vector<ProjectedPoint> project_points(std::span<const Vec3> points, const ModelTransform& model,
                                           const Pose& pose, const CameraIntrinsics& k) {
    std::vector<ProjectedPoint> out;
    out.reserve(points.size());
    for (const Vec3& p : points) {
        const Vec3 cam = pose.apply(model.to_marker(p));
        ProjectedPoint q;
        q.z = cam.z();
        q.clipped = !(cam.z() > kNearPlane);
        if (!q.clipped) q.pixel = k.project(cam);
        out.push_back(q);
    }
    return out;
}

std::size_t RenderedImage::covered_count() const {
    return std::size_t(std::count_if(depth.begin(), depth.end(),
                                     [](float d) { return d != std::numeric_limits<float>::infinity(); }));
}

RenderedImage rasterize(const IndexedMesh& mesh, const ModelTransform& model, const Pose& pose,
                        const CameraIntrinsics& k, int width, int height) {
    RenderedImage out;
    out.width = width;
    out.height = height;
    out.color.assign(std::size_t(width) * height * 3, 0);
    out.depth.assign(std::size_t(width) * height, std::numeric_limits<float>::infinity());

    std::vector<Vec3> cam;
    cam.reserve(mesh.vertices.size());
    for (const Vec3& p : mesh.vertices) cam.push_back(pose.apply(model.to_marker(p)));
    const std::vector<ProjectedPoint> proj = project_points(mesh.vertices, model, pose, k);

    std::set<std::pair<std::uint32_t, std::uint32_t>> seen_edges;

    for (const Face& f : mesh.faces) {
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) continue;
        if (proj[f[0]].clipped || proj[f[1]].clipped || proj[f[2]].clipped) continue;

        for (int e = 0; e < 3; ++e) {
            std::uint32_t a = f[e], b = f[(e + 1) % 3];
            if (seen_edges.emplace(std::min(a, b), std::max(a, b)).second) out.edges.push_back({proj[a], proj[b]});
        }

        Vec3 normal = (cam[f[1]] - cam[f[0]]).cross(cam[f[2]] - cam[f[0]]);
        const double len = normal.norm();
        if (!(len > 0.0)) continue;
        normal /= len;
        const double light = kAmbient + (1.0 - kAmbient) * std::max(0.0, -normal.z());
        std::array<std::uint8_t, 3> color;
        for (int c = 0; c < 3; ++c) color[c] = std::uint8_t(std::lround(kModelColor[c] * light));

        std::array<Vec2, 3> s{proj[f[0]].pixel, proj[f[1]].pixel, proj[f[2]].pixel};
        std::array<double, 3> inv_z{1.0 / proj[f[0]].z, 1.0 / proj[f[1]].z, 1.0 / proj[f[2]].z};
        double area = edge_fn(s[0], s[1], s[2]);
        if (area == 0.0 || !std::isfinite(area)) continue;
        if (area < 0) {
            std::swap(s[1], s[2]);
            std::swap(inv_z[1], inv_z[2]);
            area = -area;
        }

        const double min_x = std::min({s[0].x(), s[1].x(), s[2].x()});
        const double max_x = std::max({s[0].x(), s[1].x(), s[2].x()});
        const double min_y = std::min({s[0].y(), s[1].y(), s[2].y()});
        const double max_y = std::max({s[0].y(), s[1].y(), s[2].y()});
        const int x0 = int(std::max(0.0, std::ceil(min_x - 0.5)));
        const int x1 = int(std::min(double(width - 1), std::floor(max_x - 0.5)));
        const int y0 = int(std::max(0.0, std::ceil(min_y - 0.5)));
        const int y1 = int(std::min(double(height - 1), std::floor(max_y - 0.5)));

        const bool own0 = owns_boundary(s[1], s[2]);
        const bool own1 = owns_boundary(s[2], s[0]);
        const bool own2 = owns_boundary(s[0], s[1]);

        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const Vec2 p(x + 0.5, y + 0.5);
                const double w0 = edge_fn(s[1], s[2], p);
                const double w1 = edge_fn(s[2], s[0], p);
                const double w2 = edge_fn(s[0], s[1], p);
                if (w0 < 0 || w1 < 0 || w2 < 0) continue;
                if ((w0 == 0 && !own0) || (w1 == 0 && !own1) || (w2 == 0 && !own2)) continue;
                const double iz = (w0 * inv_z[0] + w1 * inv_z[1] + w2 * inv_z[2]) / area;
                const float z = float(1.0 / iz);
                const std::size_t idx = std::size_t(y) * width + x;
                if (z < out.depth[idx]) {
                    out.depth[idx] = z;
                    put_pixel(out.color, idx, color);
                }
            }
        }
    }
    return out;
}

RgbImage render_to_rgb(const RenderedImage& render) {
    RgbImage img(render.width, render.height);
    img.rgb = render.color;
    return img;
}

RgbImage composite_overlay(const Frame& frame, const RenderedImage& render, bool wireframe) {
    if (frame.width != render.width || frame.height != render.height)
        throw RenderError(RenderErrorKind::DimensionMismatch, "frame and render sizes differ");
    RgbImage out = to_rgb(frame);
    for (std::size_t i = 0; i < render.depth.size(); ++i) {
        if (render.depth[i] != std::numeric_limits<float>::infinity()) {
            put_pixel(out.rgb, i, {render.color[3 * i], render.color[3 * i + 1], render.color[3 * i + 2]});
        }
    }
    if (!wireframe) return out;

    for (const ProjectedEdge& e : render.edges) {
        const Vec2 d = e.b.pixel - e.a.pixel;
        const int steps = std::max(1, int(std::ceil(std::max(std::abs(d.x()), std::abs(d.y())))));
        if (steps > 4 * (render.width + render.height)) continue;  // degenerate projection
        for (int s = 0; s <= steps; ++s) {
            const double t = double(s) / steps;
            const Vec2 p = e.a.pixel + t * d;
            const int x = int(std::floor(p.x()));
            const int y = int(std::floor(p.y()));
            if (x < 0 || y < 0 || x >= render.width || y >= render.height) continue;
            const double z = 1.0 / ((1 - t) / e.a.z + t / e.b.z);
            const std::size_t idx = std::size_t(y) * render.width + x;
            if (z <= double(render.depth[idx]) * 1.001) put_pixel(out.rgb, idx, kWireColor);
        }
    }
    return out;
}

Frame synthesize_marker_frame(const MarkerPattern& pattern, const Pose& pose, const CameraIntrinsics& k,
                              double marker_side, int width, int height, std::uint8_t background) {
    for (const Vec3& c : marker_corners(marker_side)) {
        const Vec3 p = pose.apply(c);
        if (!(p.z() > 0.0)) throw RenderError(RenderErrorKind::OutsideFrustum, "marker corner behind the camera");
        const Vec2 px = k.project(p);
        if (px.x() < 0 || px.y() < 0 || px.x() > width || px.y() > height)
            throw RenderError(RenderErrorKind::OutsideFrustum, "marker corner outside the frame");
    }

    const Vec3 normal = pose.rotation.col(2);
    const double plane_offset = normal.dot(pose.translation);
    const Mat3 rt = pose.rotation.transpose();
    const double bf = pattern.border_fraction;
    const int n = pattern.n;

    auto shade = [&](double u, double v) -> int {
        const Vec3 ray = k.unproject(Vec2(u, v));
        const double denom = normal.dot(ray);
        if (std::abs(denom) < 1e-12) return background;
        const double lambda = plane_offset / denom;
        if (!(lambda > 0.0)) return background;
        const Vec3 m = rt * (lambda * ray - pose.translation);
        const double a = m.x() / marker_side + 0.5;
        const double b = m.y() / marker_side + 0.5;
        if (a < 0 || a >= 1 || b < 0 || b >= 1) return background;
        if (a < bf || a >= 1 - bf || b < bf || b >= 1 - bf) return 0;
        const int col = std::clamp(int(std::floor((a - bf) / (1 - 2 * bf) * n)), 0, n - 1);
        const int row = std::clamp(int(std::floor((b - bf) / (1 - 2 * bf) * n)), 0, n - 1);
        return pattern.at(row, col);
    };

    Frame frame(width, height, background);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int sum = shade(x + 0.25, y + 0.25) + shade(x + 0.75, y + 0.25) + shade(x + 0.25, y + 0.75) +
                            shade(x + 0.75, y + 0.75);
            frame.at(x, y) = std::uint8_t((sum + 2) / 4);
        }
    }
    return frame;
}

}  // namespace arvis
