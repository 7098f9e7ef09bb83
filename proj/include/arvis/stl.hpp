#pragma once

#include "arvis/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arvis {

enum class StlFormat { Binary, Ascii };

struct StlFacet {
    Vec3 normal = Vec3::Zero();  // as stored in the file, may be zero
    std::array<Vec3, 3> v;
};

// Facets exactly as read from an STL file, coordinates in mm.
struct TriangleSoup {
    std::vector<StlFacet> triangles;
    std::string name;
    StlFormat source_format = StlFormat::Binary;
};

using Face = std::array<std::uint32_t, 3>;

// Welded mesh. Face winding follows the source soup.
struct IndexedMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;

    bool operator==(const IndexedMesh&) const = default;
};

enum class StlErrorKind { TruncatedFile, SyntaxError, NonFiniteCoordinate, EmptyModel, TooManyFacets };

class StlError : public std::runtime_error {
public:
    StlError(StlErrorKind kind, const std::string& what, std::optional<std::size_t> line = std::nullopt)
        : std::runtime_error(what), kind_(kind), line_(line) {}

    StlErrorKind kind() const { return kind_; }
    // 1-based line of an ASCII syntax error.
    std::optional<std::size_t> line() const { return line_; }

private:
    StlErrorKind kind_;
    std::optional<std::size_t> line_;
};

// Exact merges bitwise-equal coordinates (+0 and -0 are treated as equal).
// Tolerance snaps every coordinate to the nearest multiple of `epsilon` and
// merges vertices falling in the same cell.
struct WeldMode {
    enum class Kind { Exact, Tolerance };
    Kind kind = Kind::Tolerance;
    double epsilon = 1e-6;

    static WeldMode exact() { return {Kind::Exact, 0.0}; }
    static WeldMode tolerance(double eps) { return {Kind::Tolerance, eps}; }
};

inline constexpr double kDefaultWeldEpsilon = 1e-6;

// Binary is chosen iff the byte count is exactly 84 + 50 * n, n being the
// little-endian facet count at offset 80. Everything else is parsed as ASCII,
// except data that is clearly binary and shorter than its declared count,
// which is reported as TruncatedFile.
TriangleSoup parse_stl(std::span<const std::uint8_t> bytes);
TriangleSoup parse_stl(std::string_view text);

// Vertices are numbered by first appearance. Faces whose welded corners
// coincide are kept.
IndexedMesh weld_vertices(const TriangleSoup& soup, WeldMode mode = WeldMode::tolerance(kDefaultWeldEpsilon));

// Binary STL with computed unit normals (zero for degenerate faces).
// Coordinates are narrowed to 32-bit floats.
std::vector<std::uint8_t> write_stl(const IndexedMesh& mesh, std::string_view header = "binary STL written by arvis");

// ASCII STL carrying the same coordinates as write_stl().
std::string write_ascii_stl(const IndexedMesh& mesh, std::string_view name = "arvis");

// Facet list of a mesh with computed normals.
TriangleSoup to_soup(const IndexedMesh& mesh);

// Unnormalized face normal (v1 - v0) x (v2 - v0); its length is twice the area.
Vec3 face_area_vector(const IndexedMesh& mesh, std::size_t face);

}  // namespace arvis
