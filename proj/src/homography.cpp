#include "arvis/marker.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>

namespace arvis {

namespace {

// Similarity moving the centroid to the origin with mean distance sqrt(2).
Mat3 conditioning(const std::array<Vec2, 4>& pts) {
    Vec2 centroid = Vec2::Zero();
    for (const Vec2& p : pts) centroid += p;
    centroid /= 4.0;
    double mean_dist = 0.0;
    for (const Vec2& p : pts) mean_dist += (p - centroid).norm();
    mean_dist /= 4.0;
    if (!(mean_dist > 0.0) || !std::isfinite(mean_dist))
        throw VisionError(VisionErrorKind::DegenerateConfiguration, "coincident points");
    double s = std::sqrt(2.0) / mean_dist;
    Mat3 t;
    t << s, 0, -s * centroid.x(),
         0, s, -s * centroid.y(),
         0, 0, 1;
    return t;
}

void require_no_collinear_triple(const std::array<Vec2, 4>& conditioned) {
    for (int skip = 0; skip < 4; ++skip) {
        std::array<Vec2, 3> tri;
        int j = 0;
        for (int i = 0; i < 4; ++i) {
            if (i != skip) tri[j++] = conditioned[i];
        }
        Vec2 u = tri[1] - tri[0];
        Vec2 v = tri[2] - tri[0];
        if (std::abs(u.x() * v.y() - u.y() * v.x()) < 1e-9)
            throw VisionError(VisionErrorKind::DegenerateConfiguration, "three of the four points are collinear");
    }
}

std::array<Vec2, 4> apply(const Mat3& t, const std::array<Vec2, 4>& pts) {
    std::array<Vec2, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = (t * pts[i].homogeneous()).head<2>();
    return out;
}

}  // namespace

Homography homography_dlt(const std::array<Vec2, 4>& src, const std::array<Vec2, 4>& dst) {
    const Mat3 ts = conditioning(src);
    const Mat3 td = conditioning(dst);
    const auto s = apply(ts, src);
    const auto d = apply(td, dst);
    require_no_collinear_triple(s);
    require_no_collinear_triple(d);

    Eigen::Matrix<double, 9, 9> a = Eigen::Matrix<double, 9, 9>::Zero();
    for (int i = 0; i < 4; ++i) {
        const double x = s[i].x(), y = s[i].y();
        const double u = d[i].x(), v = d[i].y();
        a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
        a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(a, Eigen::ComputeFullV);
    Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);

    Mat3 hn;
    hn << h(0), h(1), h(2),
          h(3), h(4), h(5),
          h(6), h(7), h(8);
    Mat3 m = td.inverse() * hn * ts;
    if (std::abs(m(2, 2)) < 1e-12 * m.norm())
        throw VisionError(VisionErrorKind::DegenerateConfiguration, "homography maps the origin to infinity");
    m /= m(2, 2);
    if (std::abs(m.determinant()) <= 1e-12)
        throw VisionError(VisionErrorKind::DegenerateConfiguration, "singular homography");
    return {m};
}

}  // namespace arvis
