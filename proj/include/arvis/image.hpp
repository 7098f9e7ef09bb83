#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace arvis {

// Row-major 8-bit luminance.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0) : width(w), height(h), data(std::size_t(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[std::size_t(y) * width + x]; }
    bool operator==(const GrayImage&) const = default;
};

// Camera frames fed to the marker detector.
using Frame = GrayImage;

// 1 = foreground (dark), 0 = background.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryImage() = default;
    BinaryImage(int w, int h) : width(w), height(h), data(std::size_t(w) * h, 0) {}

    bool at(int x, int y) const { return data[std::size_t(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[std::size_t(y) * width + x] = v ? 1 : 0; }
    bool operator==(const BinaryImage&) const = default;
};

// Row-major interleaved RGB.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), rgb(std::size_t(w) * h * 3, 0) {}

    std::uint8_t* pixel(int x, int y) { return rgb.data() + (std::size_t(y) * width + x) * 3; }
    const std::uint8_t* pixel(int x, int y) const { return rgb.data() + (std::size_t(y) * width + x) * 3; }
    bool operator==(const RgbImage&) const = default;
};

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Binary PGM (P5, maxval <= 255) and PPM (P6).
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& image);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

RgbImage read_ppm(std::istream& in);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(std::ostream& out, const RgbImage& image);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

RgbImage to_rgb(const GrayImage& gray);

// Multiplies each pixel by a gain that rises linearly from lo/255 at the
// left column to hi/255 at the right column.
GrayImage apply_brightness_ramp(const GrayImage& frame, double lo, double hi);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace arvis
