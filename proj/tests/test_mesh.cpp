#include <gtest/gtest.h>

#include <random>

#include "trisub/mesh.hpp"
#include "trisub/shapes.hpp"

using namespace trisub;

namespace {

TriangleMesh single_triangle(Point3 a, Point3 b, Point3 c) {
    TriangleMesh m;
    m.add_vertex(a);
    m.add_vertex(b);
    m.add_vertex(c);
    m.add_triangle(0, 1, 2);
    return m;
}

// two triangles sharing edge (0,1)-(4,0), stored as six soup vertices
TriangleMesh shared_edge_soup() {
    TriangleMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({4, 0, 0});
    m.add_vertex({2, 3, 0});
    m.add_triangle(0, 1, 2);
    m.add_vertex({4, 0, 0});
    m.add_vertex({0, 0, 0});
    m.add_vertex({2, -3, 0});
    m.add_triangle(3, 4, 5);
    return m;
}

}  // namespace

TEST(EdgeKey, CanonicalOrdering) {
    std::mt19937 rng(42);
    for (int n = 0; n < 200; ++n) {
        VertexIndex i = rng() % 1000;
        VertexIndex j = rng() % 1000;
        if (i == j) continue;
        EdgeKey forward(i, j);
        EdgeKey backward(j, i);
        EXPECT_EQ(forward, backward);
        EXPECT_LT(forward.a, forward.b);
    }
}

TEST(EdgeLength, AxisAlignedSegment) {
    TriangleMesh m = single_triangle({0, 0, 0}, {2, 0, 0}, {0, 1, 0});
    EXPECT_DOUBLE_EQ(edge_length(m, EdgeKey(0, 1)), 2.0);
}

TEST(EdgeLength, DiagonalSegment) {
    TriangleMesh m = single_triangle({0, 0, 0}, {1, 1, 1}, {0, 1, 0});
    EXPECT_DOUBLE_EQ(edge_length(m, EdgeKey(0, 1)), std::sqrt(3.0));
}

TEST(EdgeLength, CoincidentEndpointsGiveZero) {
    TriangleMesh m;
    m.add_vertex({1, 2, 3});
    m.add_vertex({1, 2, 3});
    EXPECT_EQ(edge_length(m, EdgeKey(0, 1)), 0.0);
}

TEST(EdgeLength, IndexOutOfRange) {
    TriangleMesh m = single_triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    EXPECT_THROW(edge_length(m, EdgeKey(0, 9)), std::out_of_range);
}

TEST(MidpointCache, FirstQueryAppendsMidpoint) {
    TriangleMesh m = single_triangle({0, 0, 0}, {4, 0, 0}, {0, 4, 0});
    MidpointCache cache;
    VertexIndex idx = get_or_create_midpoint(m, cache, EdgeKey(0, 1));
    EXPECT_EQ(idx, 3u);  // appended after the original three
    EXPECT_EQ(m.vertices.size(), 4u);
    EXPECT_EQ(m.vertices[idx], (Point3{2, 0, 0}));
}

TEST(MidpointCache, SecondQueryHitsCache) {
    TriangleMesh m = single_triangle({0, 0, 0}, {4, 0, 0}, {0, 4, 0});
    MidpointCache cache;
    VertexIndex first = get_or_create_midpoint(m, cache, EdgeKey(0, 1));
    VertexIndex second = get_or_create_midpoint(m, cache, EdgeKey(1, 0));
    EXPECT_EQ(first, second);
    EXPECT_EQ(m.vertices.size(), 4u);
}

TEST(MidpointCache, SharedEdgeCreatesSingleVertex) {
    TriangleMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({4, 0, 0});
    m.add_vertex({2, 3, 0});
    m.add_vertex({2, -3, 0});
    m.add_triangle(0, 1, 2);
    m.add_triangle(1, 0, 3);
    MidpointCache cache;
    // each triangle asks for the shared edge with its own vertex order
    VertexIndex from_first = get_or_create_midpoint(m, cache, EdgeKey(0, 1));
    VertexIndex from_second = get_or_create_midpoint(m, cache, EdgeKey(1, 0));
    EXPECT_EQ(from_first, from_second);
    EXPECT_EQ(m.vertices.size(), 5u);
}

TEST(MidpointCache, MidpointIsPureFunctionOfEndpoints) {
    const Point3 a{0.1234567890123, -7.5, 3.25};
    const Point3 b{9.87, 2.5e-3, -1.0 / 3.0};

    TriangleMesh m1;
    m1.add_vertex(a);
    m1.add_vertex(b);
    m1.add_vertex({5, 5, 5});
    MidpointCache c1;
    Point3 first = m1.vertices[get_or_create_midpoint(m1, c1, EdgeKey(0, 1))];

    // same endpoints at different indices, queried in flipped order
    TriangleMesh m2;
    m2.add_vertex({5, 5, 5});
    m2.add_vertex(b);
    m2.add_vertex(a);
    MidpointCache c2;
    Point3 second = m2.vertices[get_or_create_midpoint(m2, c2, EdgeKey(1, 2))];

    EXPECT_EQ(first, second);  // bitwise
}

TEST(Weld, MergesSoupIntoSharedVertices) {
    WeldResult r = weld_vertices(shared_edge_soup(), 1e-9);
    EXPECT_EQ(r.mesh.vertices.size(), 4u);
    EXPECT_EQ(r.mesh.triangles.size(), 2u);
    EXPECT_EQ(r.dropped_triangles, 0u);
}

TEST(Weld, ZeroToleranceMergesExactDuplicates) {
    WeldResult r = weld_vertices(shared_edge_soup(), 0.0);
    EXPECT_EQ(r.mesh.vertices.size(), 4u);
    EXPECT_EQ(r.mesh.triangles.size(), 2u);
}

TEST(Weld, NeedleCollapsesAndIsCounted) {
    TriangleMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({1e-12, 0, 0});  // within weld tolerance of vertex 0
    m.add_vertex({1, 1, 0});
    m.add_triangle(0, 1, 2);
    WeldResult r = weld_vertices(m, 1e-9);
    EXPECT_EQ(r.dropped_triangles, 1u);
    EXPECT_EQ(r.mesh.triangles.size(), 0u);
}

TEST(Weld, FirstSeenIndexWins) {
    TriangleMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({5, 0, 0});
    m.add_vertex({0, 5, 0});
    m.add_triangle(0, 1, 2);
    m.add_vertex({0, 0, 1e-12});  // near-duplicate of vertex 0
    m.add_vertex({5, 5, 0});
    m.add_vertex({9, 9, 0});
    m.add_triangle(3, 4, 5);
    WeldResult r = weld_vertices(m, 1e-9);
    EXPECT_EQ(r.mesh.vertices.size(), 5u);
    EXPECT_EQ(r.mesh.triangles[1][0], 0u);
    EXPECT_EQ(r.mesh.vertices[0], (Point3{0, 0, 0}));
}

TEST(Weld, Idempotent) {
    std::mt19937 rng(7);
    auto coord = [&] { return (rng() % 2000) / 100.0 - 10.0; };
    TriangleMesh soup;
    for (int t = 0; t < 60; ++t) {
        VertexIndex base = static_cast<VertexIndex>(soup.vertices.size());
        for (int v = 0; v < 3; ++v) soup.add_vertex({coord(), coord(), coord()});
        soup.add_triangle(base, base + 1, base + 2);
    }
    // duplicate some triangles verbatim so the weld has work to do
    for (int t = 0; t < 20; ++t) {
        const Triangle& src = soup.triangles[static_cast<std::size_t>(t)];
        VertexIndex base = static_cast<VertexIndex>(soup.vertices.size());
        for (int v = 0; v < 3; ++v) soup.add_vertex(soup.vertices[src[v]]);
        soup.add_triangle(base, base + 1, base + 2);
    }
    const double tol = 1e-9 * bbox_diagonal(soup);
    WeldResult once = weld_vertices(soup, tol);
    WeldResult twice = weld_vertices(once.mesh, tol);
    EXPECT_EQ(once.mesh.vertices.size(), twice.mesh.vertices.size());
    EXPECT_EQ(once.mesh.triangles.size(), twice.mesh.triangles.size());
    EXPECT_EQ(twice.dropped_triangles, 0u);
}

TEST(EdgeUses, SingleTriangle) {
    TriangleMesh m = single_triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    auto uses = undirected_edge_uses(m);
    EXPECT_EQ(uses.size(), 3u);
    for (const auto& [key, count] : uses) EXPECT_EQ(count, 1);
}

TEST(EdgeUses, ClosedIcosphereIsTwoManifold) {
    TriangleMesh m = make_icosphere(2);
    auto uses = undirected_edge_uses(m);
    for (const auto& [key, count] : uses) EXPECT_EQ(count, 2);
}

TEST(EdgeUses, TVertexShowsUpAsBoundaryEdges) {
    // one big triangle abutting two half-size ones across its long edge
    TriangleMesh m;
    VertexIndex a = m.add_vertex({0, 0, 0});
    VertexIndex b = m.add_vertex({4, 0, 0});
    VertexIndex c = m.add_vertex({2, -2, 0});
    VertexIndex mid = m.add_vertex({2, 0, 0});  // T-vertex on edge a-b
    VertexIndex d = m.add_vertex({2, 2, 0});
    m.add_triangle(a, b, c);
    m.add_triangle(a, mid, d);
    m.add_triangle(mid, b, d);
    auto uses = undirected_edge_uses(m);
    EXPECT_EQ(uses.at(EdgeKey(a, b)), 1);    // the long edge
    EXPECT_EQ(uses.at(EdgeKey(a, mid)), 1);  // its halves
    EXPECT_EQ(uses.at(EdgeKey(mid, b)), 1);
}
