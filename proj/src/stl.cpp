#include "arvis/stl.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

namespace arvis {

namespace {

constexpr std::size_t kHeaderBytes = 80;
constexpr std::size_t kPreambleBytes = 84;
constexpr std::size_t kFacetBytes = 50;

std::uint32_t read_u32_le(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

float read_f32_le(const std::uint8_t* p) { return std::bit_cast<float>(read_u32_le(p)); }

void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t((v >> (8 * i)) & 0xffu));
}

void put_f32_le(std::vector<std::uint8_t>& out, float f) { put_u32_le(out, std::bit_cast<std::uint32_t>(f)); }

Vec3 read_vec3(const std::uint8_t* p) {
    return {double(read_f32_le(p)), double(read_f32_le(p + 4)), double(read_f32_le(p + 8))};
}

bool looks_like_text(std::span<const std::uint8_t> bytes) {
    return std::none_of(bytes.begin(), bytes.end(), [](std::uint8_t b) {
        return b < 32 && b != '\t' && b != '\n' && b != '\r' && b != '\f' && b != '\v';
    });
}

void require_finite(const StlFacet& f, std::optional<std::size_t> line) {
    auto finite = [](const Vec3& v) { return v.allFinite(); };
    if (!finite(f.normal) || !finite(f.v[0]) || !finite(f.v[1]) || !finite(f.v[2]))
        throw StlError(StlErrorKind::NonFiniteCoordinate, "non-finite coordinate in facet", line);
}

TriangleSoup parse_binary(std::span<const std::uint8_t> bytes, std::uint32_t count) {
    TriangleSoup soup;
    soup.source_format = StlFormat::Binary;

    std::string header(reinterpret_cast<const char*>(bytes.data()), kHeaderBytes);
    header.resize(std::min(header.find('\0'), header.size()));
    while (!header.empty() && (header.back() == ' ' || header.back() == '\0')) header.pop_back();
    soup.name = std::move(header);

    if (count == 0) throw StlError(StlErrorKind::EmptyModel, "binary STL declares zero facets");
    soup.triangles.reserve(count);
    const std::uint8_t* p = bytes.data() + kPreambleBytes;
    for (std::uint32_t i = 0; i < count; ++i, p += kFacetBytes) {
        StlFacet f;
        f.normal = read_vec3(p);
        for (int k = 0; k < 3; ++k) f.v[k] = read_vec3(p + 12 * (k + 1));
        require_finite(f, std::nullopt);
        soup.triangles.push_back(f);
    }
    return soup;
}

// Whitespace-separated tokens with line tracking.
class AsciiLexer {
public:
    explicit AsciiLexer(std::string_view text) : text_(text) {}

    struct Token {
        std::string_view text;
        std::size_t line = 0;
    };

    std::optional<Token> next() {
        skip_space();
        if (pos_ >= text_.size()) return std::nullopt;
        std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
        return Token{text_.substr(start, pos_ - start), line_};
    }

    // Remainder of the current line, trimmed; consumes the newline.
    std::string_view rest_of_line() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        std::string_view rest = text_.substr(start, pos_ - start);
        while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
        while (!rest.empty() && is_space(rest.back())) rest.remove_suffix(1);
        return rest;
    }

    std::size_t line() const { return line_; }

private:
    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

class AsciiParser {
public:
    explicit AsciiParser(std::string_view text) : lex_(text) {}

    TriangleSoup parse() {
        TriangleSoup soup;
        soup.source_format = StlFormat::Ascii;
        expect_keyword("solid");
        soup.name = std::string(lex_.rest_of_line());

        while (true) {
            auto tok = lex_.next();
            if (!tok) fail("unexpected end of file, missing 'endsolid'", lex_.line());
            if (iequals(tok->text, "endsolid")) {
                lex_.rest_of_line();
                if (auto extra = lex_.next()) fail("unexpected text after 'endsolid'", extra->line);
                break;
            }
            if (!iequals(tok->text, "facet")) fail("expected 'facet' or 'endsolid'", tok->line);
            StlFacet f;
            expect_keyword("normal");
            std::size_t line = lex_.line();
            f.normal = read_vec3();
            expect_keyword("outer");
            expect_keyword("loop");
            for (int k = 0; k < 3; ++k) {
                expect_keyword("vertex");
                f.v[k] = read_vec3();
            }
            expect_keyword("endloop");
            expect_keyword("endfacet");
            require_finite(f, line);
            soup.triangles.push_back(f);
        }
        if (soup.triangles.empty()) throw StlError(StlErrorKind::EmptyModel, "ASCII STL contains no facets");
        return soup;
    }

private:
    [[noreturn]] static void fail(const std::string& msg, std::size_t line) {
        throw StlError(StlErrorKind::SyntaxError, "line " + std::to_string(line) + ": " + msg, line);
    }

    void expect_keyword(std::string_view kw) {
        auto tok = lex_.next();
        if (!tok) fail("unexpected end of file, expected '" + std::string(kw) + "'", lex_.line());
        if (!iequals(tok->text, kw))
            fail("expected '" + std::string(kw) + "', found '" + std::string(tok->text) + "'", tok->line);
    }

    double read_number() {
        auto tok = lex_.next();
        if (!tok) fail("unexpected end of file, expected a number", lex_.line());
        std::string_view s = tok->text;
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec == std::errc::result_out_of_range) {
            throw StlError(StlErrorKind::NonFiniteCoordinate,
                           "line " + std::to_string(tok->line) + ": number out of range", tok->line);
        }
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            fail("malformed number '" + std::string(tok->text) + "'", tok->line);
        if (!std::isfinite(value)) {
            throw StlError(StlErrorKind::NonFiniteCoordinate,
                           "line " + std::to_string(tok->line) + ": non-finite coordinate", tok->line);
        }
        return value;
    }

    Vec3 read_vec3() {
        double x = read_number();
        double y = read_number();
        double z = read_number();
        return {x, y, z};
    }

    AsciiLexer lex_;
};

struct WeldKey {
    std::array<std::uint64_t, 3> bits;
    bool operator==(const WeldKey&) const = default;
};

struct WeldKeyHash {
    std::size_t operator()(const WeldKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::uint64_t b : k.bits) {
            h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return std::size_t(h);
    }
};

std::uint64_t canonical_bits(double x) { return std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x); }

}  // namespace

TriangleSoup parse_stl(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw StlError(StlErrorKind::EmptyModel, "empty input");
    if (bytes.size() >= kPreambleBytes) {
        std::uint32_t count = read_u32_le(bytes.data() + kHeaderBytes);
        std::uint64_t expected = kPreambleBytes + std::uint64_t(kFacetBytes) * count;
        if (expected == bytes.size()) return parse_binary(bytes, count);
        if (expected > bytes.size() && !looks_like_text(bytes)) {
            throw StlError(StlErrorKind::TruncatedFile, "binary STL declares " + std::to_string(count) +
                                                            " facets but holds only " + std::to_string(bytes.size()) +
                                                            " bytes");
        }
    }
    std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    return AsciiParser(text).parse();
}

TriangleSoup parse_stl(std::string_view text) {
    return parse_stl(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

IndexedMesh weld_vertices(const TriangleSoup& soup, WeldMode mode) {
    IndexedMesh mesh;
    mesh.faces.reserve(soup.triangles.size());
    std::unordered_map<WeldKey, std::uint32_t, WeldKeyHash> index;
    index.reserve(soup.triangles.size() * 2);

    auto key_of = [&](const Vec3& p) {
        WeldKey k;
        for (int i = 0; i < 3; ++i) {
            double c = p[i];
            if (mode.kind == WeldMode::Kind::Tolerance && mode.epsilon > 0.0) c = std::round(c / mode.epsilon);
            k.bits[i] = canonical_bits(c);
        }
        return k;
    };

    for (const StlFacet& f : soup.triangles) {
        Face face;
        for (int k = 0; k < 3; ++k) {
            auto [it, inserted] = index.try_emplace(key_of(f.v[k]), std::uint32_t(mesh.vertices.size()));
            if (inserted) mesh.vertices.push_back(f.v[k]);
            face[k] = it->second;
        }
        mesh.faces.push_back(face);
    }
    return mesh;
}

Vec3 face_area_vector(const IndexedMesh& mesh, std::size_t face) {
    const Face& f = mesh.faces[face];
    const Vec3& a = mesh.vertices[f[0]];
    return (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
}

namespace {

void validate_indices(const IndexedMesh& mesh) {
    for (const Face& f : mesh.faces) {
        for (std::uint32_t i : f) {
            if (i >= mesh.vertices.size()) throw std::invalid_argument("face index out of range");
        }
    }
}

Vec3 unit_normal(const IndexedMesh& mesh, std::size_t face) {
    Vec3 n = face_area_vector(mesh, face);
    double len = n.norm();
    if (!(len > 0.0) || !std::isfinite(len)) return Vec3::Zero();
    return n / len;
}

}  // namespace

std::vector<std::uint8_t> write_stl(const IndexedMesh& mesh, std::string_view header) {
    if (mesh.faces.empty()) throw StlError(StlErrorKind::EmptyModel, "cannot write a mesh without faces");
    if (mesh.faces.size() > std::numeric_limits<std::uint32_t>::max())
        throw StlError(StlErrorKind::TooManyFacets, "facet count exceeds the 32-bit STL limit");
    validate_indices(mesh);

    std::vector<std::uint8_t> out;
    out.reserve(kPreambleBytes + kFacetBytes * mesh.faces.size());
    out.resize(kHeaderBytes, 0);
    std::memcpy(out.data(), header.data(), std::min(header.size(), kHeaderBytes));
    put_u32_le(out, std::uint32_t(mesh.faces.size()));

    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        Vec3 n = unit_normal(mesh, i);
        for (int k = 0; k < 3; ++k) put_f32_le(out, float(n[k]));
        for (std::uint32_t vi : mesh.faces[i]) {
            for (int k = 0; k < 3; ++k) put_f32_le(out, float(mesh.vertices[vi][k]));
        }
        out.push_back(0);
        out.push_back(0);
    }
    return out;
}

std::string write_ascii_stl(const IndexedMesh& mesh, std::string_view name) {
    if (mesh.faces.empty()) throw StlError(StlErrorKind::EmptyModel, "cannot write a mesh without faces");
    validate_indices(mesh);

    std::string out;
    auto put_number = [&](double v) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), double(float(v)));
        out.push_back(' ');
        out.append(buf, ptr);
    };
    auto put_vec = [&](const Vec3& v) {
        for (int k = 0; k < 3; ++k) put_number(v[k]);
        out.push_back('\n');
    };

    out.append("solid ").append(name).append("\n");
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        out.append("  facet normal");
        put_vec(unit_normal(mesh, i));
        out.append("    outer loop\n");
        for (std::uint32_t vi : mesh.faces[i]) {
            out.append("      vertex");
            put_vec(mesh.vertices[vi]);
        }
        out.append("    endloop\n  endfacet\n");
    }
    out.append("endsolid ").append(name).append("\n");
    return out;
}

TriangleSoup to_soup(const IndexedMesh& mesh) {
    validate_indices(mesh);
    TriangleSoup soup;
    soup.triangles.reserve(mesh.faces.size());
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        StlFacet f;
        f.normal = unit_normal(mesh, i);
        for (int k = 0; k < 3; ++k) f.v[k] = mesh.vertices[mesh.faces[i][k]];
        soup.triangles.push_back(f);
    }
    return soup;
}

}  // namespace arvis
