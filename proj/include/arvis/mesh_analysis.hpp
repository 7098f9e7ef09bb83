#pragma once

#include "arvis/geometry.hpp"
#include "arvis/stl.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace arvis {

// Undirected edge, a < b.
struct UndirectedEdge {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    auto operator<=>(const UndirectedEdge&) const = default;
};

struct NonmanifoldEdge {
    UndirectedEdge edge;
    std::size_t multiplicity = 0;
    bool operator==(const NonmanifoldEdge&) const = default;
};

// Every distinct undirected edge lands in exactly one class, by the number
// of faces using it: 1 = boundary, 2 = interior, 3+ = nonmanifold. Edges
// joining a vertex to itself (collapsed faces) are not edges and are skipped.
struct EdgeReport {
    std::size_t interior_edges = 0;
    std::vector<UndirectedEdge> boundary_edges;       // sorted
    std::vector<NonmanifoldEdge> nonmanifold_edges;   // sorted by edge
    // Interior edges whose two faces traverse them in the same direction.
    std::size_t orientation_conflicts = 0;

    std::size_t edge_count() const { return interior_edges + boundary_edges.size() + nonmanifold_edges.size(); }
};

EdgeReport edge_classification(const IndexedMesh& mesh);

// A chain of boundary vertices. Closed chains do not repeat their first
// vertex; open chains end at vertices touching more or fewer than two
// boundary edges.
struct BoundaryLoop {
    std::vector<std::uint32_t> vertices;
    bool closed = true;
    bool operator==(const BoundaryLoop&) const = default;
};

std::vector<BoundaryLoop> boundary_loops(const EdgeReport& report);

// Faces sharing at least one vertex belong to the same component.
// Labels are dense and numbered by first face.
struct ComponentLabels {
    std::size_t count = 0;
    std::vector<std::uint32_t> face_labels;
};

ComponentLabels connected_components(const IndexedMesh& mesh);

inline constexpr double kDefaultAreaEpsilon = 1e-8;

// Faces with repeated indices or area below eps_area (mm^2).
std::vector<std::size_t> degenerate_faces(const IndexedMesh& mesh, double eps_area = kDefaultAreaEpsilon);

// Sum of det(v0, v1, v2) / 6 in face order (mm^3).
double signed_volume(const IndexedMesh& mesh);

struct NormalDeviation {
    double max_degrees = 0.0;
    bool normals_absent = false;  // no facet carried a nonzero stored normal
};

NormalDeviation normal_deviation(const TriangleSoup& soup);

struct ComponentSummary {
    std::size_t face_count = 0;
    Bbox bbox;
};

struct PrintabilityReport {
    bool watertight = false;
    std::size_t vertex_count = 0;
    std::size_t face_count = 0;

    std::size_t interior_edge_count = 0;
    std::size_t boundary_edge_count = 0;
    std::vector<BoundaryLoop> boundary_loops;
    std::size_t nonmanifold_edge_count = 0;
    std::size_t orientation_conflicts = 0;

    std::size_t component_count = 0;
    std::vector<ComponentSummary> components;
    // Per axis, the smallest separation between the bboxes of any two
    // components (0 when they overlap along that axis). Only set when
    // component_count > 1.
    std::optional<Vec3> component_axis_gaps;

    std::vector<std::size_t> degenerate_face_indices;
    double signed_volume = 0.0;
    bool orientation_inverted = false;
    double max_normal_deviation = 0.0;  // degrees
    bool normals_absent = false;
    Bbox bbox;

    bool multi_shell() const { return component_count > 1; }
};

struct AnalysisOptions {
    double eps_area = kDefaultAreaEpsilon;
};

PrintabilityReport analyze(const IndexedMesh& mesh, const TriangleSoup& soup, const AnalysisOptions& options = {});

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Uniform scale mapping the largest bbox extent to target_extent, with the
// bbox centered at the origin. Throws GeometryError on a degenerate extent.
ModelTransform fit_transform(const IndexedMesh& mesh, double target_extent);

}  // namespace arvis
