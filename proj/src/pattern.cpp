#include "arvis/marker.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace arvis {

namespace {

double bilinear(const GrayImage& img, double x, double y) {
    double fx = std::clamp(x - 0.5, 0.0, double(img.width - 1));
    double fy = std::clamp(y - 0.5, 0.0, double(img.height - 1));
    int x0 = int(fx), y0 = int(fy);
    int x1 = std::min(x0 + 1, img.width - 1), y1 = std::min(y0 + 1, img.height - 1);
    double ax = fx - x0, ay = fy - y0;
    double top = (1 - ax) * img.at(x0, y0) + ax * img.at(x1, y0);
    double bottom = (1 - ax) * img.at(x0, y1) + ax * img.at(x1, y1);
    return (1 - ay) * top + ay * bottom;
}

// 1 = dark. Correlation between any two distinct rotations is zero.
constexpr int kReferenceBlocks[4][4] = {
    {1, 1, 1, 0},
    {0, 0, 1, 0},
    {1, 0, 1, 0},
    {1, 0, 0, 1},
};

double ncc(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = double(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

GridSamples sample_grid(const GrayImage& frame, const Homography& h, int n) {
    if (n < 1) throw VisionError(VisionErrorKind::InvalidArgument, "grid size must be positive");
    GridSamples out;
    out.n = n;
    out.values.reserve(std::size_t(n) * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            Vec2 p = h.map(Vec2((c + 0.5) / n, (r + 0.5) / n));
            if (!p.allFinite() || p.x() < 0 || p.y() < 0 || p.x() > frame.width || p.y() > frame.height)
                throw VisionError(VisionErrorKind::OutOfFrame, "grid sample falls outside the frame");
            out.values.push_back(bilinear(frame, p.x(), p.y()));
        }
    }
    return out;
}

MarkerPattern train_pattern(const GrayImage& image, int n, double border_fraction) {
    if (n < 4) throw VisionError(VisionErrorKind::InvalidArgument, "pattern grid must be at least 4");
    if (!(border_fraction > 0.0 && border_fraction < 0.5))
        throw VisionError(VisionErrorKind::InvalidArgument, "border fraction must lie in (0, 0.5)");
    if (image.width < 2 * n || image.height < 2 * n)
        throw VisionError(VisionErrorKind::TooSmall, "marker image is smaller than twice the grid size");

    MarkerPattern pattern;
    pattern.n = n;
    pattern.border_fraction = border_fraction;
    pattern.grid.resize(std::size_t(n) * n);

    const double x0 = border_fraction * image.width;
    const double y0 = border_fraction * image.height;
    const double cw = (1.0 - 2.0 * border_fraction) * image.width / n;
    const double ch = (1.0 - 2.0 * border_fraction) * image.height / n;

    for (int r = 0; r < n; ++r) {
        const double ya = y0 + r * ch, yb = ya + ch;
        for (int c = 0; c < n; ++c) {
            const double xa = x0 + c * cw, xb = xa + cw;
            double sum = 0.0, weight = 0.0;
            for (int y = int(std::floor(ya)); y < int(std::ceil(yb)); ++y) {
                double wy = std::min(yb, y + 1.0) - std::max(ya, double(y));
                if (wy <= 0) continue;
                for (int x = int(std::floor(xa)); x < int(std::ceil(xb)); ++x) {
                    double wx = std::min(xb, x + 1.0) - std::max(xa, double(x));
                    if (wx <= 0) continue;
                    sum += wx * wy * image.at(x, y);
                    weight += wx * wy;
                }
            }
            pattern.grid[std::size_t(r) * n + c] = std::uint8_t(std::lround(sum / weight));
        }
    }
    return pattern;
}

std::optional<PatternMatch> match_pattern(const GridSamples& samples, const MarkerPattern& pattern, double threshold) {
    if (samples.n != pattern.n) throw VisionError(VisionErrorKind::InvalidArgument, "grid sizes differ");
    std::vector<double> base(pattern.grid.begin(), pattern.grid.end());
    PatternMatch best{-1.0, 0};
    for (int k = 0; k < 4; ++k) {
        double confidence = 0.5 * (1.0 + ncc(samples.values, rotate_grid_ccw(base, pattern.n, k)));
        if (confidence > best.confidence) best = {confidence, k};
    }
    if (best.confidence < threshold) return std::nullopt;
    return best;
}

MarkerPattern reference_pattern() {
    MarkerPattern p;
    p.n = kDefaultPatternGrid;
    p.border_fraction = kDefaultBorderFraction;
    p.grid.resize(std::size_t(p.n) * p.n);
    for (int r = 0; r < p.n; ++r) {
        for (int c = 0; c < p.n; ++c) p.grid[std::size_t(r) * p.n + c] = kReferenceBlocks[r / 4][c / 4] ? 0 : 255;
    }
    return p;
}

GrayImage render_marker_bitmap(const MarkerPattern& pattern, int size_px) {
    GrayImage img(size_px, size_px, 0);
    const double lo = pattern.border_fraction * size_px;
    const double cell = (1.0 - 2.0 * pattern.border_fraction) * size_px / pattern.n;
    for (int y = 0; y < size_px; ++y) {
        for (int x = 0; x < size_px; ++x) {
            int c = int(std::floor((x + 0.5 - lo) / cell));
            int r = int(std::floor((y + 0.5 - lo) / cell));
            if (r >= 0 && c >= 0 && r < pattern.n && c < pattern.n) img.at(x, y) = pattern.at(r, c);
        }
    }
    return img;
}

void write_pattern(std::ostream& out, const MarkerPattern& pattern) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), pattern.border_fraction);
    out << "ARPAT 1\n" << pattern.n << ' ' << std::string_view(buf, std::size_t(end - buf)) << '\n';
    for (int r = 0; r < pattern.n; ++r) {
        for (int c = 0; c < pattern.n; ++c) out << (c ? " " : "") << int(pattern.at(r, c));
        out << '\n';
    }
}

MarkerPattern read_pattern(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty pattern file");
    {
        std::istringstream magic(line);
        std::string tag;
        int version = 0;
        if (!(magic >> tag >> version) || tag != "ARPAT" || version != 1) throw FormatError("expected 'ARPAT 1' header");
    }
    MarkerPattern p;
    if (!(in >> p.n >> p.border_fraction)) throw FormatError("pattern size line is malformed");
    if (p.n < 4 || p.n > 1024) throw FormatError("pattern grid size out of range");
    if (!(p.border_fraction > 0.0 && p.border_fraction < 0.5)) throw FormatError("border fraction out of range");
    p.grid.resize(std::size_t(p.n) * p.n);
    for (auto& v : p.grid) {
        int value = -1;
        if (!(in >> value) || value < 0 || value > 255) throw FormatError("pattern samples must be integers 0-255");
        v = std::uint8_t(value);
    }
    std::string extra;
    if (in >> extra) throw FormatError("unexpected data after pattern grid");
    return p;
}

}  // namespace arvis
