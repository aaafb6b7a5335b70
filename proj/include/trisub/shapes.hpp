#pragma once

// Synthetic test corpora: a hexagon fan (regular or skewed), icospheres,
// closed cylinders, random needle soups and stretched planar panels. All
// generators are deterministic for a given spec.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "trisub/mesh.hpp"

namespace trisub {

struct CorpusSpec {
    std::string shape;       // hexagon | icosphere | cylinder | needle_soup | stretched_panel
    double radius = 1.0;     // hexagon, icosphere, cylinder
    double skew = 0.0;       // hexagon: 0 = regular, > 0 stretches alternate ring vertices
    int level = 1;           // icosphere subdivision level
    double height = 2.0;     // cylinder
    int segments = 16;       // cylinder
    int count = 100;         // needle_soup / stretched_panel triangle count
    double aspect = 10.0;    // needle_soup / stretched_panel max aspect ratio
    std::uint32_t seed = 0;  // randomized corpora
};

namespace detail {

// mt19937 output mapped to [0,1) without std::uniform_real_distribution,
// whose stream is not pinned down by the standard.
inline double uniform01(std::mt19937& rng) {
    std::uint64_t hi = rng();
    std::uint64_t lo = rng();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

}  // namespace detail

// Six triangles fanned around a center vertex. With skew == 0 every triangle
// is equilateral with side == radius; skew > 0 pushes every other ring vertex
// outward, which makes the 1- and 2-long-edge classes reachable.
inline TriangleMesh make_hexagon(double radius, double skew = 0.0) {
    if (!(radius > 0.0)) throw std::invalid_argument("hexagon: radius must be > 0");
    if (skew < 0.0) throw std::invalid_argument("hexagon: skew must be >= 0");
    TriangleMesh mesh;
    mesh.add_vertex({0.0, 0.0, 0.0});
    constexpr double pi = 3.14159265358979323846;
    for (int i = 0; i < 6; ++i) {
        double ang = pi / 3.0 * i;
        double r = radius * (1.0 + (i % 2 == 0 ? 0.0 : skew));
        mesh.add_vertex({r * std::cos(ang), r * std::sin(ang), 0.0});
    }
    for (VertexIndex i = 1; i <= 6; ++i)
        mesh.add_triangle(0, i, i % 6 + 1);
    return mesh;
}

// Icosahedron quartered `level` times with midpoints pushed back onto the
// sphere. Closed 2-manifold at every level, 20 * 4^level faces.
inline TriangleMesh make_icosphere(int level, double radius = 1.0) {
    if (level < 0) throw std::invalid_argument("icosphere: level must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("icosphere: radius must be > 0");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh mesh;
    const double xs[12][3] = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (const auto& p : xs) {
        Point3 v{p[0], p[1], p[2]};
        double n = v.norm();
        mesh.add_vertex(v * (radius / n));
    }
    const int faces[20][3] = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (const auto& f : faces)
        mesh.add_triangle(static_cast<VertexIndex>(f[0]), static_cast<VertexIndex>(f[1]),
                          static_cast<VertexIndex>(f[2]));

    for (int l = 0; l < level; ++l) {
        std::unordered_map<EdgeKey, VertexIndex, EdgeKeyHash> midpoint;
        auto mid = [&](VertexIndex a, VertexIndex b) {
            EdgeKey k(a, b);
            auto it = midpoint.find(k);
            if (it != midpoint.end()) return it->second;
            Point3 m = (mesh.vertices[k.a] + mesh.vertices[k.b]) * 0.5;
            m = m * (radius / m.norm());
            VertexIndex idx = mesh.add_vertex(m);
            midpoint.emplace(k, idx);
            return idx;
        };
        std::vector<Triangle> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const Triangle& tr : mesh.triangles) {
            VertexIndex m01 = mid(tr[0], tr[1]);
            VertexIndex m12 = mid(tr[1], tr[2]);
            VertexIndex m20 = mid(tr[2], tr[0]);
            next.emplace_back(tr[0], m01, m20);
            next.emplace_back(m01, tr[1], m12);
            next.emplace_back(m20, m12, tr[2]);
            next.emplace_back(m01, m12, m20);
        }
        mesh.triangles = std::move(next);
    }
    return mesh;
}

// Closed cylinder: triangulated side wall plus cap fans. Outward winding.
inline TriangleMesh make_cylinder(double radius, double height, int segments) {
    if (!(radius > 0.0) || !(height > 0.0))
        throw std::invalid_argument("cylinder: radius and height must be > 0");
    if (segments < 3) throw std::invalid_argument("cylinder: segments must be >= 3");
    TriangleMesh mesh;
    constexpr double pi = 3.14159265358979323846;
    for (int ring = 0; ring < 2; ++ring) {
        double z = ring == 0 ? 0.0 : height;
        for (int i = 0; i < segments; ++i) {
            double ang = 2.0 * pi * i / segments;
            mesh.add_vertex({radius * std::cos(ang), radius * std::sin(ang), z});
        }
    }
    VertexIndex bottom_center = mesh.add_vertex({0.0, 0.0, 0.0});
    VertexIndex top_center = mesh.add_vertex({0.0, 0.0, height});

    auto bot = [&](int i) { return static_cast<VertexIndex>(i % segments); };
    auto top = [&](int i) { return static_cast<VertexIndex>(segments + i % segments); };
    for (int i = 0; i < segments; ++i) {
        mesh.add_triangle(bot(i), bot(i + 1), top(i));
        mesh.add_triangle(bot(i + 1), top(i + 1), top(i));
        mesh.add_triangle(bottom_center, bot(i + 1), bot(i));  // cap faces -z
        mesh.add_triangle(top_center, top(i), top(i + 1));     // cap faces +z
    }
    return mesh;
}

// Independent thin triangles scattered in a box, aspect ratios (long edge
// over height) drawn uniformly from [1, max_aspect].
inline TriangleMesh make_needle_soup(int count, double max_aspect, std::uint32_t seed) {
    if (count < 1) throw std::invalid_argument("needle_soup: count must be >= 1");
    if (!(max_aspect >= 1.0)) throw std::invalid_argument("needle_soup: aspect must be >= 1");
    TriangleMesh mesh;
    std::mt19937 rng(seed);
    for (int n = 0; n < count; ++n) {
        Point3 center{detail::uniform_range(rng, 0.0, 10.0),
                      detail::uniform_range(rng, 0.0, 10.0),
                      detail::uniform_range(rng, 0.0, 10.0)};
        // random orthonormal pair
        Point3 u, w;
        do {
            u = {detail::uniform_range(rng, -1.0, 1.0), detail::uniform_range(rng, -1.0, 1.0),
                 detail::uniform_range(rng, -1.0, 1.0)};
        } while (u.norm() < 1e-3);
        u = u * (1.0 / u.norm());
        do {
            Point3 r{detail::uniform_range(rng, -1.0, 1.0), detail::uniform_range(rng, -1.0, 1.0),
                     detail::uniform_range(rng, -1.0, 1.0)};
            w = u.cross(r);
        } while (w.norm() < 1e-3);
        w = w * (1.0 / w.norm());

        double base = detail::uniform_range(rng, 0.5, 2.0);
        double aspect = detail::uniform_range(rng, 1.0, max_aspect);
        double h = base / aspect;
        VertexIndex a = mesh.add_vertex(center - u * (base * 0.5));
        VertexIndex b = mesh.add_vertex(center + u * (base * 0.5));
        VertexIndex c = mesh.add_vertex(center + w * h);
        mesh.add_triangle(a, b, c);
    }
    return mesh;
}

// Planar strips of unit-height cells with seeded widths in [1, max_aspect].
// Alternating cells mimic the two sliver families CAD exporters produce:
// diagonal-split cells give stretched right triangles, apex cells give
// obtuse needles whose two base angles are both acute. Strips are separated
// by a gap so the panel stays free of built-in T-vertices. Emits exactly
// `count` triangles.
inline TriangleMesh make_stretched_panel(int count, double max_aspect, std::uint32_t seed) {
    if (count < 2) throw std::invalid_argument("stretched_panel: count must be >= 2");
    if (!(max_aspect >= 1.0)) throw std::invalid_argument("stretched_panel: aspect must be >= 1");

    const int cells = (count + 1) / 2;
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cells))));

    std::mt19937 rng(seed);
    TriangleMesh mesh;
    std::unordered_map<std::uint64_t, VertexIndex> node;

    int emitted = 0;
    for (int row = 0; emitted < count; ++row) {
        const double y0 = 1.5 * row;  // 0.5 gap between strips
        const double y1 = y0 + 1.0;
        double x = 0.0;
        auto corner = [&](int j, int top, double at_x) {
            std::uint64_t key = (static_cast<std::uint64_t>(row) << 34) |
                                (static_cast<std::uint64_t>(j) << 2) |
                                static_cast<std::uint64_t>(top);
            auto it = node.find(key);
            if (it != node.end()) return it->second;
            VertexIndex idx = mesh.add_vertex({at_x, top ? y1 : y0, 0.0});
            node.emplace(key, idx);
            return idx;
        };
        for (int j = 0; j < cols && emitted < count; ++j) {
            const double w = detail::uniform_range(rng, 1.0, max_aspect);
            VertexIndex a = corner(j, 0, x);
            VertexIndex b = corner(j + 1, 0, x + w);
            if (j % 2 == 0) {
                VertexIndex c = corner(j + 1, 1, x + w);
                VertexIndex d = corner(j, 1, x);
                mesh.add_triangle(a, b, c);
                ++emitted;
                if (emitted < count) {
                    mesh.add_triangle(a, c, d);
                    ++emitted;
                }
            } else {
                const double frac = detail::uniform_range(rng, 0.35, 0.65);
                VertexIndex apex = mesh.add_vertex({x + frac * w, y1, 0.0});
                mesh.add_triangle(a, b, apex);
                ++emitted;
            }
            x += w;
        }
    }
    return mesh;
}

inline TriangleMesh generate_corpus(const CorpusSpec& spec) {
    if (spec.shape == "hexagon") return make_hexagon(spec.radius, spec.skew);
    if (spec.shape == "icosphere") return make_icosphere(spec.level, spec.radius);
    if (spec.shape == "cylinder") return make_cylinder(spec.radius, spec.height, spec.segments);
    if (spec.shape == "needle_soup") return make_needle_soup(spec.count, spec.aspect, spec.seed);
    if (spec.shape == "stretched_panel")
        return make_stretched_panel(spec.count, spec.aspect, spec.seed);
    throw std::invalid_argument("generate_corpus: unknown shape '" + spec.shape + "'");
}

}  // namespace trisub
