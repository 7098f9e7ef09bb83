#include "arvis/marker.hpp"

#include <algorithm>

namespace arvis {

BinaryImage adaptive_threshold(const GrayImage& frame, int window, double offset) {
    if (window < 3 || window % 2 == 0) throw VisionError(VisionErrorKind::InvalidArgument, "window must be odd and >= 3");
    const int w = frame.width;
    const int h = frame.height;
    const std::size_t stride = std::size_t(w) + 1;

    // integral[(y) * stride + x] = sum of pixels above and left of (x, y)
    std::vector<std::int64_t> integral(stride * (std::size_t(h) + 1), 0);
    for (int y = 0; y < h; ++y) {
        std::int64_t row = 0;
        for (int x = 0; x < w; ++x) {
            row += frame.at(x, y);
            integral[(std::size_t(y) + 1) * stride + x + 1] = integral[std::size_t(y) * stride + x + 1] + row;
        }
    }

    BinaryImage out(w, h);
    const int r = window / 2;
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - r);
        const int y1 = std::min(h, y + r + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - r);
            const int x1 = std::min(w, x + r + 1);
            const std::int64_t sum = integral[std::size_t(y1) * stride + x1] - integral[std::size_t(y0) * stride + x1] -
                                     integral[std::size_t(y1) * stride + x0] + integral[std::size_t(y0) * stride + x0];
            const double count = double(y1 - y0) * double(x1 - x0);
            // value < sum / count - offset, kept exact for integer inputs
            out.set(x, y, (double(frame.at(x, y)) + offset) * count < double(sum));
        }
    }
    return out;
}

}  // namespace arvis
