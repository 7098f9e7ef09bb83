// Meshes and brute-force reference computations shared by the tests.
#pragma once

#include "arvis/stl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace fixtures {

using arvis::Face;
using arvis::IndexedMesh;
using arvis::Vec3;

// Axis-aligned box with outward-facing triangles.
inline IndexedMesh box(const Vec3& lo, const Vec3& hi) {
    IndexedMesh m;
    for (int i = 0; i < 8; ++i) {
        m.vertices.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(), i & 4 ? hi.z() : lo.z());
    }
    // quads listed counter-clockwise seen from outside
    const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (const auto& q : quads) {
        m.faces.push_back({std::uint32_t(q[0]), std::uint32_t(q[1]), std::uint32_t(q[2])});
        m.faces.push_back({std::uint32_t(q[0]), std::uint32_t(q[2]), std::uint32_t(q[3])});
    }
    return m;
}

inline IndexedMesh unit_cube() { return box(Vec3(0, 0, 0), Vec3(1, 1, 1)); }

// Unit cube with its top (z = 1) face removed.
inline IndexedMesh open_cube() {
    IndexedMesh m = unit_cube();
    m.faces.erase(m.faces.begin() + 2, m.faces.begin() + 4);
    return m;
}

inline IndexedMesh append(IndexedMesh a, const IndexedMesh& b) {
    const auto offset = std::uint32_t(a.vertices.size());
    a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
    for (Face f : b.faces) a.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    return a;
}

// A pawn-like piece whose head was modelled as a separate shell floating
// 0.5 mm above the base.
inline IndexedMesh chess_surrogate() {
    return append(box(Vec3(-10, -10, 0), Vec3(10, 10, 30)), box(Vec3(-6, -6, 30.5), Vec3(6, 6, 42)));
}

// Two tetrahedra sharing one edge: that edge is used by four faces.
inline IndexedMesh glued_tetrahedra() {
    IndexedMesh m;
    m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(0, -1, 0), Vec3(0, 0, -1)};
    m.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}, {0, 1, 4}, {0, 5, 1}, {0, 4, 5}, {1, 5, 4}};
    return m;
}

// UV sphere; closed and consistently oriented outward.
inline IndexedMesh uv_sphere(int stacks, int slices, double radius = 10.0, Vec3 center = Vec3::Zero()) {
    IndexedMesh m;
    m.vertices.push_back(center + Vec3(0, 0, radius));
    for (int i = 1; i < stacks; ++i) {
        const double phi = std::numbers::pi * i / stacks;
        for (int j = 0; j < slices; ++j) {
            const double theta = 2 * std::numbers::pi * j / slices;
            m.vertices.push_back(center + radius * Vec3(std::sin(phi) * std::cos(theta),
                                                        std::sin(phi) * std::sin(theta), std::cos(phi)));
        }
    }
    m.vertices.push_back(center + Vec3(0, 0, -radius));
    const auto south = std::uint32_t(m.vertices.size() - 1);
    auto ring = [&](int i, int j) { return std::uint32_t(1 + (i - 1) * slices + (j % slices)); };
    for (int j = 0; j < slices; ++j) m.faces.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i < stacks - 1; ++i) {
        for (int j = 0; j < slices; ++j) {
            m.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            m.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    }
    for (int j = 0; j < slices; ++j) m.faces.push_back({south, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
    return m;
}

// Height-field grid of (n x n) cells with cells removed at random.
inline IndexedMesh holey_grid(int n, double hole_rate, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution hole(hole_rate);
    IndexedMesh m;
    for (int y = 0; y <= n; ++y) {
        for (int x = 0; x <= n; ++x) m.vertices.emplace_back(x, y, 0.1 * ((x * 7 + y * 3) % 5));
    }
    auto id = [&](int x, int y) { return std::uint32_t(y * (n + 1) + x); };
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (hole(rng)) continue;
            m.faces.push_back({id(x, y), id(x + 1, y), id(x + 1, y + 1)});
            m.faces.push_back({id(x, y), id(x + 1, y + 1), id(x, y + 1)});
        }
    }
    return m;
}

// Random faces over a small vertex pool: lots of nonmanifold edges,
// flipped pairs and collapsed faces.
inline IndexedMesh random_soup(std::size_t vertices, std::size_t faces, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coord(-500, 500);
    std::uniform_int_distribution<std::uint32_t> pick(0, std::uint32_t(vertices - 1));
    IndexedMesh m;
    for (std::size_t i = 0; i < vertices; ++i) m.vertices.emplace_back(coord(rng) / 8.0, coord(rng) / 8.0, coord(rng) / 8.0);
    for (std::size_t i = 0; i < faces; ++i) m.faces.push_back({pick(rng), pick(rng), pick(rng)});
    return m;
}

// Mesh that survives write -> parse -> weld unchanged: float-exact,
// pairwise distinct coordinates, every vertex used, vertices numbered by
// first appearance in the face list.
inline IndexedMesh canonical_random_mesh(std::size_t face_count, std::mt19937& rng) {
    const std::size_t vertex_pool = std::max<std::size_t>(3, face_count / 2 + 3);
    std::uniform_int_distribution<int> coord(-40000, 40000);
    std::set<std::array<int, 3>> used;
    std::vector<Vec3> pool;
    while (pool.size() < vertex_pool) {
        std::array<int, 3> c{coord(rng), coord(rng), coord(rng)};
        if (used.insert(c).second) pool.emplace_back(c[0] / 64.0, c[1] / 64.0, c[2] / 64.0);
    }
    std::uniform_int_distribution<std::uint32_t> pick(0, std::uint32_t(vertex_pool - 1));
    std::vector<Face> raw;
    for (std::size_t i = 0; i < face_count; ++i) {
        Face f;
        do {
            f = {pick(rng), pick(rng), pick(rng)};
        } while (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]);
        raw.push_back(f);
    }
    IndexedMesh m;
    std::map<std::uint32_t, std::uint32_t> renumber;
    for (Face f : raw) {
        for (auto& v : f) {
            auto [it, fresh] = renumber.emplace(v, std::uint32_t(m.vertices.size()));
            if (fresh) m.vertices.push_back(pool[v]);
            v = it->second;
        }
        m.faces.push_back(f);
    }
    return m;
}

// ---- reference computations ----

struct EdgeCounts {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> multiplicity;

    std::size_t with(std::size_t k) const {
        return std::size_t(std::count_if(multiplicity.begin(), multiplicity.end(), [&](auto& e) { return e.second == k; }));
    }
    std::size_t at_least(std::size_t k) const {
        return std::size_t(std::count_if(multiplicity.begin(), multiplicity.end(), [&](auto& e) { return e.second >= k; }));
    }
};

inline EdgeCounts count_edges(const IndexedMesh& m) {
    EdgeCounts out;
    for (const Face& f : m.faces) {
        for (int k = 0; k < 3; ++k) {
            std::uint32_t a = f[k], b = f[(k + 1) % 3];
            if (a != b) ++out.multiplicity[{std::min(a, b), std::max(a, b)}];
        }
    }
    return out;
}

// Component label per face by breadth-first search over faces that share
// a vertex, numbered by first face.
inline std::vector<std::size_t> component_labels(const IndexedMesh& m) {
    std::vector<std::vector<std::size_t>> faces_of(m.vertices.size());
    for (std::size_t i = 0; i < m.faces.size(); ++i) {
        for (auto v : m.faces[i]) faces_of[v].push_back(i);
    }
    const std::size_t unset = std::size_t(-1);
    std::vector<std::size_t> label(m.faces.size(), unset);
    std::size_t next = 0;
    for (std::size_t start = 0; start < m.faces.size(); ++start) {
        if (label[start] != unset) continue;
        std::queue<std::size_t> q;
        q.push(start);
        label[start] = next;
        while (!q.empty()) {
            std::size_t f = q.front();
            q.pop();
            for (auto v : m.faces[f]) {
                for (std::size_t g : faces_of[v]) {
                    if (label[g] == unset) {
                        label[g] = next;
                        q.push(g);
                    }
                }
            }
        }
        ++next;
    }
    return label;
}

inline std::size_t count_components(const IndexedMesh& m) {
    const auto labels = component_labels(m);
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

// Connected pieces of the graph formed by edges used exactly once.
inline std::size_t count_boundary_pieces(const EdgeCounts& counts) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> adj;
    for (const auto& [e, k] : counts.multiplicity) {
        if (k != 1) continue;
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::set<std::uint32_t> seen;
    std::size_t pieces = 0;
    for (const auto& [v, _] : adj) {
        if (seen.count(v)) continue;
        ++pieces;
        std::vector<std::uint32_t> stack{v};
        seen.insert(v);
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto w : adj[u]) {
                if (seen.insert(w).second) stack.push_back(w);
            }
        }
    }
    return pieces;
}

inline bool boundary_vertices_have_degree_two(const EdgeCounts& counts) {
    std::map<std::uint32_t, int> degree;
    for (const auto& [e, k] : counts.multiplicity) {
        if (k != 1) continue;
        ++degree[e.first];
        ++degree[e.second];
    }
    return std::all_of(degree.begin(), degree.end(), [](auto& d) { return d.second == 2; });
}

// Volume from the divergence theorem applied face by face, written
// independently of the library (x-component flux form).
inline double flux_volume(const IndexedMesh& m) {
    double v = 0.0;
    for (const Face& f : m.faces) {
        const Vec3& a = m.vertices[f[0]];
        const Vec3& b = m.vertices[f[1]];
        const Vec3& c = m.vertices[f[2]];
        const Vec3 n = (b - a).cross(c - a);  // twice the area, outward
        v += n.x() * (a.x() + b.x() + c.x()) / 3.0 / 2.0;
    }
    return v;
}

}  // namespace fixtures
