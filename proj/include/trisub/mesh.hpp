#pragma once

// Indexed triangle mesh, undirected edge keys, vertex welding and the
// shared-midpoint cache that keeps subdivision conforming across triangles.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace trisub {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Point3& o) const { return x * o.x + y * o.y + z * o.z; }

    Point3 cross(const Point3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    double norm() const { return std::sqrt(x * x + y * y + z * z); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    bool operator==(const Point3& o) const { return x == o.x && y == o.y && z == o.z; }
};

using VertexIndex = std::uint32_t;

struct Triangle {
    std::array<VertexIndex, 3> v{};

    Triangle() = default;
    Triangle(VertexIndex a, VertexIndex b, VertexIndex c) : v{a, b, c} {}

    VertexIndex operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    bool operator==(const Triangle& o) const { return v == o.v; }
};

// Canonical undirected edge: a < b regardless of construction order.
struct EdgeKey {
    VertexIndex a = 0;
    VertexIndex b = 0;

    EdgeKey() = default;
    EdgeKey(VertexIndex i, VertexIndex j) : a(std::min(i, j)), b(std::max(i, j)) {
        assert(i != j && "degenerate edge");
    }

    bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
    bool operator<(const EdgeKey& o) const {
        return a != o.a ? a < o.a : b < o.b;
    }
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.a) << 32) | k.b);
    }
};

struct TriangleMesh {
    std::vector<Point3> vertices;
    std::vector<Triangle> triangles;

    VertexIndex add_vertex(const Point3& p) {
        vertices.push_back(p);
        return static_cast<VertexIndex>(vertices.size() - 1);
    }

    void add_triangle(VertexIndex a, VertexIndex b, VertexIndex c) {
        triangles.emplace_back(a, b, c);
    }

    bool empty() const { return triangles.empty(); }
};

struct BoundingBox {
    Point3 min{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
               std::numeric_limits<double>::max()};
    Point3 max{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
               std::numeric_limits<double>::lowest()};

    void include(const Point3& p) {
        min.x = std::min(min.x, p.x);
        min.y = std::min(min.y, p.y);
        min.z = std::min(min.z, p.z);
        max.x = std::max(max.x, p.x);
        max.y = std::max(max.y, p.y);
        max.z = std::max(max.z, p.z);
    }

    double diagonal() const {
        if (min.x > max.x) return 0.0;  // empty box
        return (max - min).norm();
    }
};

inline BoundingBox bounding_box(const TriangleMesh& mesh) {
    BoundingBox box;
    for (const Point3& p : mesh.vertices) box.include(p);
    return box;
}

inline double bbox_diagonal(const TriangleMesh& mesh) { return bounding_box(mesh).diagonal(); }

inline bool mesh_is_finite(const TriangleMesh& mesh) {
    for (const Point3& p : mesh.vertices)
        if (!p.finite()) return false;
    return true;
}

inline double edge_length(const TriangleMesh& mesh, const EdgeKey& e) {
    if (e.a >= mesh.vertices.size() || e.b >= mesh.vertices.size())
        throw std::out_of_range("edge_length: vertex index out of range");
    return (mesh.vertices[e.b] - mesh.vertices[e.a]).norm();
}

// Midpoints are created once per undirected edge and reused by every triangle
// that shares it; this is what makes length-driven splits conforming.
struct MidpointCache {
    std::unordered_map<EdgeKey, VertexIndex, EdgeKeyHash> entries;
};

// The average is taken with endpoints in canonical key order, so the midpoint
// is bit-identical no matter which incident triangle asks first.
inline VertexIndex get_or_create_midpoint(TriangleMesh& mesh, MidpointCache& cache,
                                          const EdgeKey& e) {
    if (e.a >= mesh.vertices.size() || e.b >= mesh.vertices.size())
        throw std::out_of_range("get_or_create_midpoint: vertex index out of range");
    auto it = cache.entries.find(e);
    if (it != cache.entries.end()) return it->second;
    const Point3& pa = mesh.vertices[e.a];
    const Point3& pb = mesh.vertices[e.b];
    VertexIndex idx = mesh.add_vertex({(pa.x + pb.x) * 0.5, (pa.y + pb.y) * 0.5,
                                       (pa.z + pb.z) * 0.5});
    cache.entries.emplace(e, idx);
    return idx;
}

struct WeldResult {
    TriangleMesh mesh;
    std::size_t dropped_triangles = 0;  // collapsed to fewer than 3 distinct corners
};

inline double default_weld_tolerance(const TriangleMesh& mesh) {
    return 1e-9 * bbox_diagonal(mesh);
}

namespace detail {

struct GridCell {
    std::int64_t x, y, z;
    bool operator==(const GridCell& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct GridCellHash {
    std::size_t operator()(const GridCell& c) const {
        std::uint64_t h = static_cast<std::uint64_t>(c.x) * 0x9e3779b97f4a7c15ull;
        h ^= static_cast<std::uint64_t>(c.y) * 0xc2b2ae3d27d4eb4full;
        h ^= static_cast<std::uint64_t>(c.z) * 0x165667b19e3779f9ull;
        return std::hash<std::uint64_t>{}(h);
    }
};

struct BitKey {
    std::array<std::uint64_t, 3> bits;
    bool operator==(const BitKey& o) const { return bits == o.bits; }
};

struct BitKeyHash {
    std::size_t operator()(const BitKey& k) const {
        std::uint64_t h = k.bits[0];
        h = h * 0x100000001b3ull ^ k.bits[1];
        h = h * 0x100000001b3ull ^ k.bits[2];
        return std::hash<std::uint64_t>{}(h);
    }
};

inline BitKey point_bits(const Point3& p) {
    BitKey k{};
    std::memcpy(&k.bits[0], &p.x, sizeof(double));
    std::memcpy(&k.bits[1], &p.y, sizeof(double));
    std::memcpy(&k.bits[2], &p.z, sizeof(double));
    return k;
}

}  // namespace detail

// Merge vertices closer than `tolerance` (first-seen index wins), remap
// triangle indices and drop triangles that collapse. tolerance == 0 still
// merges bit-identical duplicates.
inline WeldResult weld_vertices(const TriangleMesh& input, double tolerance) {
    if (tolerance < 0.0) throw std::invalid_argument("weld_vertices: tolerance must be >= 0");

    WeldResult result;
    std::vector<VertexIndex> remap(input.vertices.size());

    if (tolerance == 0.0) {
        std::unordered_map<detail::BitKey, VertexIndex, detail::BitKeyHash> seen;
        for (std::size_t i = 0; i < input.vertices.size(); ++i) {
            auto [it, inserted] = seen.emplace(detail::point_bits(input.vertices[i]),
                                               static_cast<VertexIndex>(result.mesh.vertices.size()));
            if (inserted) result.mesh.vertices.push_back(input.vertices[i]);
            remap[i] = it->second;
        }
    } else {
        const double cell = tolerance;
        const double tol2 = tolerance * tolerance;
        std::unordered_map<detail::GridCell, std::vector<VertexIndex>, detail::GridCellHash> grid;
        auto cell_of = [cell](double v) {
            return static_cast<std::int64_t>(std::floor(v / cell));
        };
        for (std::size_t i = 0; i < input.vertices.size(); ++i) {
            const Point3& p = input.vertices[i];
            detail::GridCell c{cell_of(p.x), cell_of(p.y), cell_of(p.z)};
            // first-seen wins: pick the lowest kept index within tolerance
            VertexIndex best = std::numeric_limits<VertexIndex>::max();
            for (std::int64_t dx = -1; dx <= 1; ++dx)
                for (std::int64_t dy = -1; dy <= 1; ++dy)
                    for (std::int64_t dz = -1; dz <= 1; ++dz) {
                        auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
                        if (it == grid.end()) continue;
                        for (VertexIndex cand : it->second) {
                            Point3 d = result.mesh.vertices[cand] - p;
                            if (d.dot(d) <= tol2) best = std::min(best, cand);
                        }
                    }
            if (best == std::numeric_limits<VertexIndex>::max()) {
                best = result.mesh.add_vertex(p);
                grid[c].push_back(best);
            }
            remap[i] = best;
        }
    }

    for (const Triangle& t : input.triangles) {
        Triangle mapped(remap[t[0]], remap[t[1]], remap[t[2]]);
        if (mapped[0] == mapped[1] || mapped[1] == mapped[2] || mapped[0] == mapped[2]) {
            ++result.dropped_triangles;
            continue;
        }
        result.mesh.triangles.push_back(mapped);
    }
    return result;
}

// Incident-triangle count per undirected edge. On a welded closed 2-manifold
// every edge must come out exactly 2; boundary edges (and T-vertex halves)
// show up as count 1.
inline std::unordered_map<EdgeKey, int, EdgeKeyHash> undirected_edge_uses(
    const TriangleMesh& mesh) {
    std::unordered_map<EdgeKey, int, EdgeKeyHash> uses;
    for (const Triangle& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            VertexIndex i = t[e];
            VertexIndex j = t[(e + 1) % 3];
            if (i == j) continue;
            ++uses[EdgeKey(i, j)];
        }
    }
    return uses;
}

}  // namespace trisub
