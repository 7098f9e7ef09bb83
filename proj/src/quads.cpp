#include "arvis/marker.hpp"

#include <algorithm>
#include <cmath>

namespace arvis {

namespace {

// Clockwise as displayed, starting east.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(int dx, int dy) {
    for (int d = 0; d < 8; ++d) {
        if (kDx[d] == dx && kDy[d] == dy) return d;
    }
    return -1;
}

double point_line_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len = ab.norm();
    if (len == 0.0) return (p - a).norm();
    Vec2 ap = p - a;
    return std::abs(ab.x() * ap.y() - ab.y() * ap.x()) / len;
}

// Recursive split of the open chain pts[first..last] (indices modulo size).
void split_chain(const std::vector<Vec2>& pts, std::size_t first, std::size_t last, double tolerance,
                 std::vector<std::size_t>& keep) {
    const std::size_t n = pts.size();
    std::size_t span = (last + n - first) % n;
    if (span < 2) return;
    double best = -1.0;
    std::size_t best_idx = first;
    for (std::size_t s = 1; s < span; ++s) {
        std::size_t i = (first + s) % n;
        double d = point_line_distance(pts[i], pts[first], pts[last]);
        if (d > best) {
            best = d;
            best_idx = i;
        }
    }
    if (best > tolerance) {
        split_chain(pts, first, best_idx, tolerance, keep);
        keep.push_back(best_idx);
        split_chain(pts, best_idx, last, tolerance, keep);
    }
}

double signed_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

bool is_convex(const std::vector<Vec2>& poly) {
    int sign = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Vec2 e1 = poly[(i + 1) % poly.size()] - poly[i];
        Vec2 e2 = poly[(i + 2) % poly.size()] - poly[(i + 1) % poly.size()];
        double cross = e1.x() * e2.y() - e1.y() * e2.x();
        if (cross == 0.0) return false;
        int s = cross > 0 ? 1 : -1;
        if (sign != 0 && s != sign) return false;
        sign = s;
    }
    return true;
}

}  // namespace

std::vector<std::array<int, 2>> trace_outer_contour(const BinaryImage& binary, int start_x, int start_y) {
    auto fg = [&](int x, int y) { return x >= 0 && y >= 0 && x < binary.width && y < binary.height && binary.at(x, y); };

    std::vector<std::array<int, 2>> contour{{start_x, start_y}};
    int cx = start_x, cy = start_y;
    int back = 4;  // west neighbor is background for a topmost-leftmost pixel
    const std::size_t limit = 4 * binary.data.size() + 8;

    while (contour.size() < limit) {
        int found = -1;
        for (int s = 1; s <= 8; ++s) {
            int d = (back + s) % 8;
            if (fg(cx + kDx[d], cy + kDy[d])) {
                found = d;
                break;
            }
        }
        if (found < 0) break;  // isolated pixel
        int nx = cx + kDx[found], ny = cy + kDy[found];
        if (cx == start_x && cy == start_y && contour.size() > 1 && nx == contour[1][0] && ny == contour[1][1]) {
            contour.pop_back();  // drop the repeated start
            break;
        }
        // the neighbor scanned just before `found` is background; express it relative to the new pixel
        int pd = (found + 7) % 8;
        int bx = cx + kDx[pd], by = cy + kDy[pd];
        back = direction_of(bx - nx, by - ny);
        cx = nx;
        cy = ny;
        contour.push_back({cx, cy});
    }
    return contour;
}

std::vector<Quad> extract_quads(const BinaryImage& binary, double min_area) {
    const int w = binary.width;
    const int h = binary.height;
    std::vector<std::int32_t> label(binary.data.size(), -1);
    std::vector<Quad> quads;
    std::vector<int> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t idx = std::size_t(y) * w + x;
            if (!binary.data[idx] || label[idx] >= 0) continue;

            // flood fill the 8-connected region so it is traced only once
            label[idx] = 1;
            stack.assign(1, int(idx));
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                int px = cur % w, py = cur / w;
                for (int d = 0; d < 8; ++d) {
                    int qx = px + kDx[d], qy = py + kDy[d];
                    if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
                    std::size_t q = std::size_t(qy) * w + qx;
                    if (binary.data[q] && label[q] < 0) {
                        label[q] = 1;
                        stack.push_back(int(q));
                    }
                }
            }

            auto contour = trace_outer_contour(binary, x, y);
            if (contour.size() < 8) continue;
            std::vector<Vec2> pts;
            pts.reserve(contour.size());
            for (auto& c : contour) pts.emplace_back(c[0] + 0.5, c[1] + 0.5);

            double perimeter = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) perimeter += (pts[(i + 1) % pts.size()] - pts[i]).norm();

            // anchors: two mutually distant contour points
            auto farthest_from = [&](std::size_t from) {
                std::size_t best = from;
                double best_d = -1.0;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    double d = (pts[i] - pts[from]).squaredNorm();
                    if (d > best_d) {
                        best_d = d;
                        best = i;
                    }
                }
                return best;
            };
            std::size_t a = farthest_from(0);
            std::size_t b = farthest_from(a);
            if (a == b) continue;

            std::vector<std::size_t> keep{a};
            split_chain(pts, a, b, 0.02 * perimeter, keep);
            keep.push_back(b);
            split_chain(pts, b, a, 0.02 * perimeter, keep);
            if (keep.size() != 4) continue;

            std::vector<Vec2> poly;
            for (std::size_t i : keep) poly.push_back(pts[i]);
            if (!is_convex(poly) || std::abs(signed_area(poly)) < min_area) continue;

            // counter-clockwise as displayed is negative shoelace area with y down
            if (signed_area(poly) > 0) std::reverse(poly.begin(), poly.end());
            auto top = std::min_element(poly.begin(), poly.end(), [](const Vec2& p, const Vec2& q) {
                return p.y() < q.y() || (p.y() == q.y() && p.x() < q.x());
            });
            std::rotate(poly.begin(), top, poly.end());
            Quad quad;
            std::copy(poly.begin(), poly.end(), quad.corners.begin());
            quads.push_back(quad);
        }
    }
    return quads;
}

}  // namespace arvis
