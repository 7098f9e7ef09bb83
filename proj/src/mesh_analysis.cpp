#include "arvis/mesh_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace arvis {

namespace {

struct HalfEdge {
    UndirectedEdge edge;
    bool forward = true;  // traversed a -> b by its face

    bool operator<(const HalfEdge& o) const { return edge < o.edge || (edge == o.edge && forward < o.forward); }
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

double axis_gap(const Bbox& a, const Bbox& b, int axis) {
    return std::max({0.0, b.min[axis] - a.max[axis], a.min[axis] - b.max[axis]});
}

}  // namespace

EdgeReport edge_classification(const IndexedMesh& mesh) {
    std::vector<HalfEdge> half_edges;
    half_edges.reserve(mesh.faces.size() * 3);
    for (const Face& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            std::uint32_t u = f[k];
            std::uint32_t v = f[(k + 1) % 3];
            if (u == v) continue;
            half_edges.push_back({{std::min(u, v), std::max(u, v)}, u < v});
        }
    }
    std::sort(half_edges.begin(), half_edges.end());

    EdgeReport report;
    for (std::size_t i = 0; i < half_edges.size();) {
        std::size_t j = i;
        while (j < half_edges.size() && half_edges[j].edge == half_edges[i].edge) ++j;
        std::size_t multiplicity = j - i;
        const UndirectedEdge& e = half_edges[i].edge;
        if (multiplicity == 1) {
            report.boundary_edges.push_back(e);
        } else if (multiplicity == 2) {
            ++report.interior_edges;
            if (half_edges[i].forward == half_edges[i + 1].forward) ++report.orientation_conflicts;
        } else {
            report.nonmanifold_edges.push_back({e, multiplicity});
        }
        i = j;
    }
    return report;
}

std::vector<BoundaryLoop> boundary_loops(const EdgeReport& report) {
    const auto& edges = report.boundary_edges;
    std::vector<BoundaryLoop> loops;
    if (edges.empty()) return loops;

    // vertex -> incident boundary edge ids, vertices visited in ascending order
    std::vector<std::pair<std::uint32_t, std::size_t>> incidence;
    incidence.reserve(edges.size() * 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        incidence.emplace_back(edges[i].a, i);
        incidence.emplace_back(edges[i].b, i);
    }
    std::sort(incidence.begin(), incidence.end());

    auto incident = [&](std::uint32_t v) {
        auto lo = std::lower_bound(incidence.begin(), incidence.end(), std::make_pair(v, std::size_t(0)));
        auto hi = std::lower_bound(lo, incidence.end(), std::make_pair(v + 1, std::size_t(0)));
        return std::make_pair(lo, hi);
    };
    auto degree = [&](std::uint32_t v) {
        auto [lo, hi] = incident(v);
        return std::size_t(hi - lo);
    };
    auto other_end = [&](std::size_t e, std::uint32_t v) { return edges[e].a == v ? edges[e].b : edges[e].a; };

    std::vector<bool> used(edges.size(), false);

    // Walk from `start` along edge `first` until a branch/end vertex or an
    // already used edge is reached.
    auto walk = [&](std::uint32_t start, std::size_t first) {
        BoundaryLoop chain;
        chain.vertices.push_back(start);
        used[first] = true;
        std::uint32_t v = other_end(first, start);
        while (true) {
            if (v == start) {
                chain.closed = true;
                return chain;
            }
            chain.vertices.push_back(v);
            if (degree(v) != 2) {
                chain.closed = false;
                return chain;
            }
            auto [lo, hi] = incident(v);
            std::size_t next = used[lo->second] ? (lo + 1)->second : lo->second;
            if (used[next]) {
                chain.closed = false;
                return chain;
            }
            used[next] = true;
            v = other_end(next, v);
        }
    };

    // Chains anchored at branch or dangling vertices first.
    for (std::size_t i = 0; i < incidence.size(); ++i) {
        std::uint32_t v = incidence[i].first;
        if (degree(v) == 2) continue;
        std::size_t e = incidence[i].second;
        if (!used[e]) loops.push_back(walk(v, e));
    }
    // Remaining edges form simple cycles through degree-2 vertices.
    for (std::size_t i = 0; i < incidence.size(); ++i) {
        std::size_t e = incidence[i].second;
        if (!used[e]) loops.push_back(walk(incidence[i].first, e));
    }
    return loops;
}

ComponentLabels connected_components(const IndexedMesh& mesh) {
    UnionFind uf(mesh.vertices.size());
    for (const Face& f : mesh.faces) {
        uf.unite(f[0], f[1]);
        uf.unite(f[1], f[2]);
    }
    ComponentLabels out;
    out.face_labels.reserve(mesh.faces.size());
    std::vector<std::int64_t> label_of_root(mesh.vertices.size(), -1);
    for (const Face& f : mesh.faces) {
        std::uint32_t root = uf.find(f[0]);
        if (label_of_root[root] < 0) label_of_root[root] = std::int64_t(out.count++);
        out.face_labels.push_back(std::uint32_t(label_of_root[root]));
    }
    return out;
}

std::vector<std::size_t> degenerate_faces(const IndexedMesh& mesh, double eps_area) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        const Face& f = mesh.faces[i];
        bool repeated = f[0] == f[1] || f[1] == f[2] || f[0] == f[2];
        if (repeated || face_area_vector(mesh, i).norm() < 2.0 * eps_area) out.push_back(i);
    }
    return out;
}

double signed_volume(const IndexedMesh& mesh) {
    double sum = 0.0;
    for (const Face& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        sum += a.dot(b.cross(c));
    }
    return sum / 6.0;
}

NormalDeviation normal_deviation(const TriangleSoup& soup) {
    NormalDeviation out;
    bool any_stored = false;
    for (const StlFacet& f : soup.triangles) {
        double stored_len = f.normal.norm();
        if (stored_len == 0.0) continue;
        any_stored = true;
        Vec3 computed = (f.v[1] - f.v[0]).cross(f.v[2] - f.v[0]);
        double computed_len = computed.norm();
        if (!(computed_len > 0.0)) continue;
        double c = std::clamp(f.normal.dot(computed) / (stored_len * computed_len), -1.0, 1.0);
        out.max_degrees = std::max(out.max_degrees, std::acos(c) * 180.0 / std::numbers::pi);
    }
    out.normals_absent = !any_stored;
    return out;
}

PrintabilityReport analyze(const IndexedMesh& mesh, const TriangleSoup& soup, const AnalysisOptions& options) {
    PrintabilityReport r;
    r.vertex_count = mesh.vertices.size();
    r.face_count = mesh.faces.size();

    EdgeReport edges = edge_classification(mesh);
    r.interior_edge_count = edges.interior_edges;
    r.boundary_edge_count = edges.boundary_edges.size();
    r.nonmanifold_edge_count = edges.nonmanifold_edges.size();
    r.orientation_conflicts = edges.orientation_conflicts;
    r.boundary_loops = boundary_loops(edges);
    r.watertight = !mesh.faces.empty() && r.boundary_edge_count == 0 && r.nonmanifold_edge_count == 0 &&
                   r.orientation_conflicts == 0;

    ComponentLabels labels = connected_components(mesh);
    r.component_count = labels.count;
    r.components.resize(labels.count);
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        ComponentSummary& c = r.components[labels.face_labels[i]];
        ++c.face_count;
        for (std::uint32_t v : mesh.faces[i]) c.bbox.extend(mesh.vertices[v]);
    }
    if (labels.count > 1) {
        Vec3 gaps = Vec3::Constant(std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < r.components.size(); ++i) {
            for (std::size_t j = i + 1; j < r.components.size(); ++j) {
                for (int axis = 0; axis < 3; ++axis) {
                    gaps[axis] = std::min(gaps[axis], axis_gap(r.components[i].bbox, r.components[j].bbox, axis));
                }
            }
        }
        r.component_axis_gaps = gaps;
    }

    r.degenerate_face_indices = degenerate_faces(mesh, options.eps_area);
    r.signed_volume = signed_volume(mesh);
    r.orientation_inverted = r.watertight && r.signed_volume < 0.0;

    NormalDeviation nd = normal_deviation(soup);
    r.max_normal_deviation = nd.max_degrees;
    r.normals_absent = nd.normals_absent;

    for (const Face& f : mesh.faces) {
        for (std::uint32_t v : f) r.bbox.extend(mesh.vertices[v]);
    }
    return r;
}

ModelTransform fit_transform(const IndexedMesh& mesh, double target_extent) {
    if (!(target_extent > 0.0)) throw std::invalid_argument("target extent must be positive");
    Bbox box = bounding_box(mesh.vertices);
    double extent = box.extent().maxCoeff();
    if (box.empty() || !(extent > 0.0)) throw GeometryError("model bounding box is degenerate");
    ModelTransform t;
    t.scale = target_extent / extent;
    t.pivot = box.center();
    t.translation = -t.pivot;
    return t;
}

}  // namespace arvis
