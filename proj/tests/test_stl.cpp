#include "arvis/stl.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <limits>

using namespace arvis;

namespace {

std::vector<std::uint8_t> binary_with_facets(std::uint32_t declared, std::size_t stored, const char* header = "") {
    std::vector<std::uint8_t> out(80, 0);
    std::memcpy(out.data(), header, std::min<std::size_t>(std::strlen(header), 80));
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(declared >> (8 * i)));
    for (std::size_t f = 0; f < stored; ++f) {
        for (int k = 0; k < 12; ++k) {
            float v = float(k % 3 == 0 ? f : k);  // arbitrary finite values
            auto bits = std::bit_cast<std::uint32_t>(v);
            for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(bits >> (8 * i)));
        }
        out.push_back(0);
        out.push_back(0);
    }
    return out;
}

StlErrorKind error_kind(std::string_view text) {
    try {
        parse_stl(text);
    } catch (const StlError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for: " << text;
    return StlErrorKind::TooManyFacets;
}

constexpr const char* kOneFacet = R"(solid tri
  facet normal 0 0 1
    outer loop
      vertex 0 0 0
      vertex 1 0 0
      vertex 0 1 0
    endloop
  endfacet
endsolid tri
)";

}  // namespace

TEST(StlParse, AsciiSingleFacet) {
    TriangleSoup soup = parse_stl(std::string_view(kOneFacet));
    ASSERT_EQ(soup.triangles.size(), 1u);
    EXPECT_EQ(soup.source_format, StlFormat::Ascii);
    EXPECT_EQ(soup.name, "tri");
    EXPECT_EQ(soup.triangles[0].normal, Vec3(0, 0, 1));
    EXPECT_EQ(soup.triangles[0].v[1], Vec3(1, 0, 0));
}

TEST(StlParse, AsciiKeywordsAreCaseInsensitiveAndSignsAllowed) {
    auto soup = parse_stl(std::string_view(
        "SOLID\nFACET NORMAL 0 0 0\nOUTER LOOP\nVERTEX +1.5e1 -0 0\nVERTEX 1 1 0\nVERTEX 0 1 0\nENDLOOP\nENDFACET\nENDSOLID\n"));
    ASSERT_EQ(soup.triangles.size(), 1u);
    EXPECT_EQ(soup.triangles[0].v[0].x(), 15.0);
}

TEST(StlParse, AsciiErrorsCarryLineNumbers) {
    const char* bad = "solid x\n facet normal 0 0 1\n  outer loop\n   vertex 0 0\n";
    try {
        parse_stl(std::string_view(bad));
        FAIL();
    } catch (const StlError& e) {
        EXPECT_EQ(e.kind(), StlErrorKind::SyntaxError);
        ASSERT_TRUE(e.line().has_value());
        EXPECT_EQ(*e.line(), 5u);  // ran out of input after line 4
    }
}

TEST(StlParse, AsciiRejectsMissingEndsolidAndTrailingGarbage) {
    std::string text(kOneFacet);
    EXPECT_EQ(error_kind(text.substr(0, text.find("endsolid"))), StlErrorKind::SyntaxError);
    EXPECT_EQ(error_kind(text + "facet"), StlErrorKind::SyntaxError);
}

TEST(StlParse, NonFiniteCoordinates) {
    std::string text(kOneFacet);
    text.replace(text.find("vertex 1 0 0"), 12, "vertex nan 0 0");
    EXPECT_EQ(error_kind(text), StlErrorKind::NonFiniteCoordinate);
    std::string huge(kOneFacet);
    huge.replace(huge.find("vertex 1 0 0"), 12, "vertex 1e999 0 0");
    EXPECT_EQ(error_kind(huge), StlErrorKind::NonFiniteCoordinate);
}

TEST(StlParse, EmptyModels) {
    EXPECT_EQ(error_kind(""), StlErrorKind::EmptyModel);
    EXPECT_EQ(error_kind("solid empty\nendsolid empty\n"), StlErrorKind::EmptyModel);
    auto zero = binary_with_facets(0, 0);
    try {
        parse_stl(std::span<const std::uint8_t>(zero));
        FAIL();
    } catch (const StlError& e) {
        EXPECT_EQ(e.kind(), StlErrorKind::EmptyModel);
    }
}

TEST(StlParse, BinaryWithSolidHeaderIsStillBinary) {
    auto bytes = binary_with_facets(2, 2, "solid exported by some CAD tool");
    TriangleSoup soup = parse_stl(std::span<const std::uint8_t>(bytes));
    EXPECT_EQ(soup.source_format, StlFormat::Binary);
    EXPECT_EQ(soup.triangles.size(), 2u);
    EXPECT_EQ(soup.name, "solid exported by some CAD tool");
}

TEST(StlParse, TruncatedBinary) {
    auto bytes = binary_with_facets(5, 3);
    try {
        parse_stl(std::span<const std::uint8_t>(bytes));
        FAIL();
    } catch (const StlError& e) {
        EXPECT_EQ(e.kind(), StlErrorKind::TruncatedFile);
    }
}

TEST(StlParse, BinaryNonFinite) {
    auto bytes = binary_with_facets(1, 1);
    const float inf = std::numeric_limits<float>::infinity();
    std::memcpy(bytes.data() + 84 + 12, &inf, 4);
    try {
        parse_stl(std::span<const std::uint8_t>(bytes));
        FAIL();
    } catch (const StlError& e) {
        EXPECT_EQ(e.kind(), StlErrorKind::NonFiniteCoordinate);
    }
}

TEST(StlWeld, CubeWeldsToEightVertices) {
    IndexedMesh cube = fixtures::unit_cube();
    TriangleSoup soup = to_soup(cube);
    EXPECT_EQ(soup.triangles.size(), 12u);
    IndexedMesh welded = weld_vertices(soup);
    EXPECT_EQ(welded.vertices.size(), 8u);
    EXPECT_EQ(welded.faces.size(), 12u);
}

TEST(StlWeld, ToleranceMergesNearbyCopiesExactDoesNot) {
    TriangleSoup soup;
    StlFacet a;
    a.v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    StlFacet b;
    b.v = {Vec3(1 + 2e-7, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
    soup.triangles = {a, b};
    EXPECT_EQ(weld_vertices(soup).vertices.size(), 4u);
    EXPECT_EQ(weld_vertices(soup, WeldMode::exact()).vertices.size(), 5u);
}

TEST(StlWeld, NegativeZeroMatchesZero) {
    TriangleSoup soup;
    StlFacet a;
    a.v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    StlFacet b;
    b.v = {Vec3(-0.0, -0.0, -0.0), Vec3(0, 1, 0), Vec3(-1, 0, 0)};
    soup.triangles = {a, b};
    EXPECT_EQ(weld_vertices(soup, WeldMode::exact()).vertices.size(), 4u);
}

TEST(StlWeld, CollapsedFacesAreKept) {
    TriangleSoup soup;
    StlFacet a;
    a.v = {Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 1, 0)};
    soup.triangles = {a};
    IndexedMesh m = weld_vertices(soup);
    ASSERT_EQ(m.faces.size(), 1u);
    EXPECT_EQ(m.faces[0][0], m.faces[0][1]);
}

TEST(StlWrite, BinaryLayoutAndNormals) {
    IndexedMesh cube = fixtures::unit_cube();
    auto bytes = write_stl(cube);
    ASSERT_EQ(bytes.size(), 84u + 50u * 12u);
    TriangleSoup soup = parse_stl(std::span<const std::uint8_t>(bytes));
    for (std::size_t i = 0; i < soup.triangles.size(); ++i) {
        const Vec3 expected = face_area_vector(cube, i).normalized();
        EXPECT_NEAR((soup.triangles[i].normal - expected).norm(), 0.0, 1e-7) << "facet " << i;
    }
}

TEST(StlWrite, RoundTripBinaryAndAscii) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        IndexedMesh m = fixtures::canonical_random_mesh(1 + trial * 37, rng);
        auto bytes = write_stl(m);
        EXPECT_EQ(weld_vertices(parse_stl(std::span<const std::uint8_t>(bytes))), m);
        EXPECT_EQ(weld_vertices(parse_stl(std::string_view(write_ascii_stl(m, "rt")))), m);
    }
}

TEST(StlWrite, RejectsBadMeshes) {
    EXPECT_THROW(write_stl(IndexedMesh{}), StlError);
    IndexedMesh bad = fixtures::unit_cube();
    bad.faces[0][0] = 99;
    EXPECT_THROW(write_stl(bad), std::invalid_argument);
}
