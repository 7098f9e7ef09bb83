#include "arvis/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

namespace arvis {

namespace {

// Reads one header integer, skipping whitespace and '#' comments.
int read_header_int(std::istream& in) {
    int c = in.peek();
    while (c != EOF) {
        if (std::isspace(c)) {
            in.get();
        } else if (c == '#') {
            std::string discard;
            std::getline(in, discard);
        } else {
            break;
        }
        c = in.peek();
    }
    if (c == EOF || !std::isdigit(c)) throw FormatError("malformed PNM header");
    long value = 0;
    while (std::isdigit(in.peek())) {
        value = value * 10 + (in.get() - '0');
        if (value > 1 << 20) throw FormatError("PNM header value too large");
    }
    return int(value);
}

struct PnmHeader {
    int width = 0;
    int height = 0;
};

PnmHeader read_pnm_header(std::istream& in, const char* magic) {
    char m[2] = {0, 0};
    in.read(m, 2);
    if (!in || m[0] != magic[0] || m[1] != magic[1])
        throw FormatError(std::string("expected ") + magic + " image");
    PnmHeader h;
    h.width = read_header_int(in);
    h.height = read_header_int(in);
    int maxval = read_header_int(in);
    if (h.width <= 0 || h.height <= 0) throw FormatError("image has no pixels");
    if (maxval <= 0 || maxval > 255) throw FormatError("only 8-bit PNM images are supported");
    if (!std::isspace(in.get())) throw FormatError("malformed PNM header");
    return h;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
    PnmHeader h = read_pnm_header(in, "P5");
    GrayImage img(h.width, h.height);
    in.read(reinterpret_cast<char*>(img.data.data()), std::streamsize(img.data.size()));
    if (in.gcount() != std::streamsize(img.data.size())) throw FormatError("PGM pixel data truncated");
    return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data.data()), std::streamsize(image.data.size()));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    auto out = open_out(path);
    write_pgm(out, image);
}

RgbImage read_ppm(std::istream& in) {
    PnmHeader h = read_pnm_header(in, "P6");
    RgbImage img(h.width, h.height);
    in.read(reinterpret_cast<char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
    if (in.gcount() != std::streamsize(img.rgb.size())) throw FormatError("PPM pixel data truncated");
    return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_ppm(in);
}

void write_ppm(std::ostream& out, const RgbImage& image) {
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()), std::streamsize(image.rgb.size()));
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
    auto out = open_out(path);
    write_ppm(out, image);
}

RgbImage to_rgb(const GrayImage& gray) {
    RgbImage out(gray.width, gray.height);
    for (std::size_t i = 0; i < gray.data.size(); ++i) {
        out.rgb[3 * i] = out.rgb[3 * i + 1] = out.rgb[3 * i + 2] = gray.data[i];
    }
    return out;
}

GrayImage apply_brightness_ramp(const GrayImage& frame, double lo, double hi) {
    GrayImage out = frame;
    double span = frame.width > 1 ? double(frame.width - 1) : 1.0;
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            double gain = (lo + (hi - lo) * x / span) / 255.0;
            out.at(x, y) = std::uint8_t(std::clamp(std::lround(frame.at(x, y) * gain), 0l, 255l));
        }
    }
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    auto in = open_in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace arvis
