#include "arvis/mesh_analysis.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace arvis;

namespace {

PrintabilityReport analyze_mesh(const IndexedMesh& m) { return analyze(m, to_soup(m)); }

void expect_matches_oracle(const IndexedMesh& m, const std::string& what) {
    SCOPED_TRACE(what);
    const auto counts = fixtures::count_edges(m);
    const EdgeReport r = edge_classification(m);
    EXPECT_EQ(r.boundary_edges.size(), counts.with(1));
    EXPECT_EQ(r.interior_edges, counts.with(2));
    EXPECT_EQ(r.nonmanifold_edges.size(), counts.at_least(3));
    for (const auto& e : r.nonmanifold_edges) EXPECT_EQ(e.multiplicity, counts.multiplicity.at({e.edge.a, e.edge.b}));
    EXPECT_EQ(connected_components(m).count, fixtures::count_components(m));
}

}  // namespace

TEST(MeshAnalysis, ClosedCube) {
    const auto r = analyze_mesh(fixtures::unit_cube());
    EXPECT_TRUE(r.watertight);
    EXPECT_EQ(r.boundary_loops.size(), 0u);
    EXPECT_EQ(r.component_count, 1u);
    EXPECT_EQ(r.interior_edge_count, 18u);
    EXPECT_FALSE(r.component_axis_gaps.has_value());
    EXPECT_DOUBLE_EQ(r.signed_volume, 1.0);
    EXPECT_FALSE(r.orientation_inverted);
    EXPECT_NEAR(r.max_normal_deviation, 0.0, 1e-4);
}

TEST(MeshAnalysis, CubeMissingAFace) {
    const auto r = analyze_mesh(fixtures::open_cube());
    EXPECT_FALSE(r.watertight);
    ASSERT_EQ(r.boundary_loops.size(), 1u);
    EXPECT_EQ(r.boundary_loops[0].vertices.size(), 4u);
    EXPECT_TRUE(r.boundary_loops[0].closed);
    EXPECT_EQ(r.boundary_edge_count, 4u);
    EXPECT_FALSE(r.orientation_inverted);
}

TEST(MeshAnalysis, ChessSurrogateHasTwoShells) {
    const auto r = analyze_mesh(fixtures::chess_surrogate());
    EXPECT_TRUE(r.watertight);
    EXPECT_EQ(r.component_count, 2u);
    EXPECT_TRUE(r.multi_shell());
    ASSERT_TRUE(r.component_axis_gaps.has_value());
    EXPECT_DOUBLE_EQ(r.component_axis_gaps->z(), 0.5);
    EXPECT_DOUBLE_EQ(r.component_axis_gaps->x(), 0.0);
    ASSERT_EQ(r.components.size(), 2u);
    EXPECT_EQ(r.components[0].face_count, 12u);
}

TEST(MeshAnalysis, GluedTetrahedraAreNonmanifold) {
    const IndexedMesh m = fixtures::glued_tetrahedra();
    const EdgeReport e = edge_classification(m);
    ASSERT_EQ(e.nonmanifold_edges.size(), 1u);
    EXPECT_EQ(e.nonmanifold_edges[0].edge, (UndirectedEdge{0, 1}));
    EXPECT_EQ(e.nonmanifold_edges[0].multiplicity, 4u);
    EXPECT_FALSE(analyze_mesh(m).watertight);
}

TEST(MeshAnalysis, FlippedFaceIsAnOrientationConflict) {
    IndexedMesh m = fixtures::unit_cube();
    std::swap(m.faces[5][1], m.faces[5][2]);
    const auto r = analyze_mesh(m);
    EXPECT_EQ(r.orientation_conflicts, 3u);
    EXPECT_FALSE(r.watertight);
}

TEST(MeshAnalysis, InsideOutCubeIsInverted) {
    IndexedMesh m = fixtures::unit_cube();
    for (auto& f : m.faces) std::swap(f[1], f[2]);
    const auto r = analyze_mesh(m);
    EXPECT_TRUE(r.watertight);
    EXPECT_TRUE(r.orientation_inverted);
    EXPECT_DOUBLE_EQ(r.signed_volume, -1.0);
}

TEST(MeshAnalysis, DegenerateFaces) {
    IndexedMesh m = fixtures::unit_cube();
    m.vertices.emplace_back(0.5, 0, 0);  // on the edge 0-1
    m.faces.push_back({0, 1, 8});        // zero area
    m.faces.push_back({2, 2, 3});        // repeated index
    EXPECT_EQ(degenerate_faces(m), (std::vector<std::size_t>{12, 13}));
}

TEST(MeshAnalysis, StoredNormalDeviation) {
    TriangleSoup soup = to_soup(fixtures::unit_cube());
    soup.triangles[0].normal = -soup.triangles[0].normal;
    EXPECT_NEAR(normal_deviation(soup).max_degrees, 180.0, 1e-6);
    for (auto& t : soup.triangles) t.normal = Vec3::Zero();
    EXPECT_TRUE(normal_deviation(soup).normals_absent);
}

TEST(MeshAnalysis, BoundaryLoopsOfHoleyGrids) {
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        const IndexedMesh m = fixtures::holey_grid(12, 0.3, seed);
        if (m.faces.empty()) continue;
        const auto counts = fixtures::count_edges(m);
        const auto loops = boundary_loops(edge_classification(m));
        // every boundary edge is walked exactly once
        std::map<std::pair<std::uint32_t, std::uint32_t>, int> walked;
        for (const auto& l : loops) {
            const std::size_t n = l.vertices.size();
            const std::size_t steps = l.closed ? n : n - 1;
            for (std::size_t i = 0; i < steps; ++i) {
                auto a = l.vertices[i], b = l.vertices[(i + 1) % n];
                ++walked[{std::min(a, b), std::max(a, b)}];
            }
        }
        EXPECT_EQ(walked.size(), counts.with(1)) << "seed " << seed;
        for (const auto& [e, k] : walked) {
            EXPECT_EQ(k, 1);
            EXPECT_EQ(counts.multiplicity.at(e), 1u);
        }
        if (fixtures::boundary_vertices_have_degree_two(counts)) {
            EXPECT_EQ(loops.size(), fixtures::count_boundary_pieces(counts)) << "seed " << seed;
        }
    }
}

TEST(MeshAnalysis, OracleAgreementOnAssortedMeshes) {
    expect_matches_oracle(fixtures::unit_cube(), "cube");
    expect_matches_oracle(fixtures::open_cube(), "open cube");
    expect_matches_oracle(fixtures::chess_surrogate(), "chess");
    expect_matches_oracle(fixtures::glued_tetrahedra(), "tets");
    expect_matches_oracle(fixtures::uv_sphere(20, 30), "sphere");
    for (std::uint32_t seed = 0; seed < 10; ++seed) {
        expect_matches_oracle(fixtures::random_soup(40, 200, seed), "soup " + std::to_string(seed));
        expect_matches_oracle(fixtures::holey_grid(10, 0.4, seed), "grid " + std::to_string(seed));
    }
}

TEST(MeshAnalysis, SignedVolumeMatchesFluxForm) {
    for (const auto& m : {fixtures::uv_sphere(12, 16), fixtures::chess_surrogate(), fixtures::unit_cube()}) {
        EXPECT_NEAR(signed_volume(m), fixtures::flux_volume(m), 1e-9 * std::abs(signed_volume(m)));
    }
}

TEST(MeshAnalysis, FitTransform) {
    const IndexedMesh m = fixtures::box(Vec3(10, 0, 0), Vec3(30, 5, 2));
    const ModelTransform t = fit_transform(m, 80.0);
    EXPECT_DOUBLE_EQ(t.scale, 4.0);
    const Bbox b = bounding_box(std::vector<Vec3>{t.apply(m.vertices.front()), t.apply(m.vertices.back())});
    EXPECT_NEAR(b.center().norm(), 0.0, 1e-12);
    EXPECT_NEAR(b.extent().maxCoeff(), 80.0, 1e-12);

    IndexedMesh flat;
    flat.vertices = {Vec3(1, 1, 1), Vec3(1, 1, 1), Vec3(1, 1, 1)};
    flat.faces = {{0, 1, 2}};
    EXPECT_THROW(fit_transform(flat, 80.0), GeometryError);
    EXPECT_THROW(fit_transform(m, 0.0), std::invalid_argument);
}

TEST(MeshAnalysis, EmptyMeshIsNotWatertight) {
    const IndexedMesh empty;
    const auto r = analyze(empty, TriangleSoup{});
    EXPECT_FALSE(r.watertight);
    EXPECT_EQ(r.component_count, 0u);
}
