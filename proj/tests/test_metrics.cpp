#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "trisub/metrics.hpp"

using namespace trisub;

namespace {

// random non-degenerate triangle side lengths, built from actual points so
// the triangle inequality holds by construction
std::array<double, 3> random_sides(std::mt19937& rng) {
    auto coord = [&] { return (rng() % 100000) / 5000.0 - 10.0; };
    for (;;) {
        Point3 p0{coord(), coord(), coord()};
        Point3 p1{coord(), coord(), coord()};
        Point3 p2{coord(), coord(), coord()};
        double a = (p1 - p0).norm();
        double b = (p2 - p1).norm();
        double c = (p0 - p2).norm();
        if (a > 1e-6 && b > 1e-6 && c > 1e-6 &&
            detail::quality_q_raw(a, b, c) > 1e-9)
            return {a, b, c};
    }
}

}  // namespace

TEST(QualityQ, EquilateralIsOne) { EXPECT_EQ(quality_q(1, 1, 1), 1.0); }

TEST(QualityQ, DegenerateIsZero) { EXPECT_EQ(quality_q(2, 1, 1), 0.0); }

TEST(QualityQ, RightIsoceles) {
    // (1, 1, sqrt 2): (2 - s)(s)(s) / s = 2 sqrt(2) - 2
    EXPECT_NEAR(quality_q(1, 1, std::sqrt(2.0)), 2.0 * std::sqrt(2.0) - 2.0, 1e-12);
}

TEST(QualityQ, RejectsNonPositiveSides) {
    EXPECT_THROW(quality_q(0, 1, 1), std::domain_error);
    EXPECT_THROW(quality_q(1, -1, 1), std::domain_error);
}

TEST(QualityQ, RejectsImpossibleTriangle) {
    EXPECT_THROW(quality_q(5, 1, 1), std::domain_error);
}

TEST(QualityQ, PermutationInvariant) {
    std::mt19937 rng(11);
    for (int n = 0; n < 1000; ++n) {
        auto [a, b, c] = random_sides(rng);
        double q = quality_q(a, b, c);
        EXPECT_NEAR(quality_q(a, c, b), q, 1e-12);
        EXPECT_NEAR(quality_q(b, a, c), q, 1e-12);
        EXPECT_NEAR(quality_q(b, c, a), q, 1e-12);
        EXPECT_NEAR(quality_q(c, a, b), q, 1e-12);
        EXPECT_NEAR(quality_q(c, b, a), q, 1e-12);
    }
}

TEST(QualityQ, ScaleInvariant) {
    std::mt19937 rng(12);
    for (int n = 0; n < 1000; ++n) {
        auto [a, b, c] = random_sides(rng);
        double q = quality_q(a, b, c);
        for (double k : {0.001, 0.37, 42.0, 1e6}) {
            EXPECT_NEAR(quality_q(k * a, k * b, k * c), q, 1e-12);
        }
    }
}

TEST(QualityQ, StaysInUnitInterval) {
    std::mt19937 rng(13);
    for (int n = 0; n < 1000; ++n) {
        auto [a, b, c] = random_sides(rng);
        double q = quality_q(a, b, c);
        EXPECT_GE(q, 0.0);
        EXPECT_LE(q, 1.0);
    }
}

TEST(TriangleAngles, Equilateral) {
    auto ang = triangle_angles({0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0});
    for (double a : ang) EXPECT_NEAR(a, 60.0, 1e-9);
}

TEST(TriangleAngles, RightIsoceles) {
    auto ang = triangle_angles({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    EXPECT_NEAR(ang[0], 90.0, 1e-9);
    EXPECT_NEAR(ang[1], 45.0, 1e-9);
    EXPECT_NEAR(ang[2], 45.0, 1e-9);
}

TEST(TriangleAngles, Needle) {
    // base angles atan(0.5 / 5), apex the rest of 180
    const double base_deg = std::atan(0.1) * 180.0 / 3.14159265358979323846;
    auto ang = triangle_angles({0, 0, 0}, {10, 0, 0}, {5, 0.5, 0});
    EXPECT_NEAR(ang[0], base_deg, 1e-9);         // ~5.71
    EXPECT_NEAR(ang[1], base_deg, 1e-9);
    EXPECT_NEAR(ang[2], 180.0 - 2.0 * base_deg, 1e-9);  // ~168.58
    EXPECT_NEAR(ang[2], 168.579, 1e-3);
}

TEST(TriangleAngles, SumIs180) {
    std::mt19937 rng(14);
    auto coord = [&] { return (rng() % 100000) / 5000.0 - 10.0; };
    for (int n = 0; n < 1000; ++n) {
        Point3 p0{coord(), coord(), coord()};
        Point3 p1{coord(), coord(), coord()};
        Point3 p2{coord(), coord(), coord()};
        double area2 = (p1 - p0).cross(p2 - p0).norm();
        if (area2 < 1e-9) continue;
        auto ang = triangle_angles(p0, p1, p2);
        EXPECT_NEAR(ang[0] + ang[1] + ang[2], 180.0, 1e-6);
        for (double a : ang) EXPECT_GT(a, 0.0);
    }
}

TEST(TriangleAngles, DegenerateThrows) {
    EXPECT_THROW(triangle_angles({0, 0, 0}, {1, 0, 0}, {2, 0, 0}), std::domain_error);
    EXPECT_THROW(triangle_angles({0, 0, 0}, {0, 0, 0}, {1, 0, 0}), std::domain_error);
}

namespace {

TriangleMesh equilateral_mesh(double side) {
    TriangleMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({side, 0, 0});
    m.add_vertex({side / 2.0, side * std::sqrt(3.0) / 2.0, 0});
    m.add_triangle(0, 1, 2);
    return m;
}

}  // namespace

TEST(VertexBValues, EquilateralAtItsOwnLimit) {
    auto b = vertex_b_values(equilateral_mesh(1.0), 1.0);
    ASSERT_EQ(b.size(), 3u);
    for (double v : b) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(VertexBValues, LinearInInverseLimit) {
    auto b = vertex_b_values(equilateral_mesh(1.0), 2.0);
    for (double v : b) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(VertexBValues, UnreferencedVertexIsFlagged) {
    TriangleMesh m = equilateral_mesh(1.0);
    m.add_vertex({9, 9, 9});
    auto b = vertex_b_values(m, 1.0);
    ASSERT_EQ(b.size(), 4u);
    EXPECT_LT(b[3], 0.0);
}

TEST(VertexBValues, RejectsBadLimit) {
    EXPECT_THROW(vertex_b_values(equilateral_mesh(1.0), 0.0), std::domain_error);
    EXPECT_THROW(vertex_b_values(equilateral_mesh(1.0), -2.0), std::domain_error);
}

TEST(BuildReport, SingleEquilateral) {
    QualityReport rep = build_report(equilateral_mesh(1.0), 1.0, 0.0, "test");
    EXPECT_EQ(rep.triangles, 1u);
    EXPECT_EQ(rep.vertices, 3u);
    EXPECT_DOUBLE_EQ(rep.angle_ideal_40_80, 1.0);
    EXPECT_DOUBLE_EQ(rep.q_gt08, 1.0);
    EXPECT_DOUBLE_EQ(rep.angle_lt15, 0.0);
    EXPECT_DOUBLE_EQ(rep.q_lt05, 0.0);
    // all b values are 1.0, landing in the last bin
    ASSERT_EQ(rep.b_histogram.size(), 20u);
    EXPECT_DOUBLE_EQ(rep.b_histogram.back(), 1.0);
}

TEST(BuildReport, NeedleAngleBins) {
    TriangleMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({10, 0, 0});
    m.add_vertex({5, 0.5, 0});
    m.add_triangle(0, 1, 2);
    QualityReport rep = build_report(m, 10.0, 0.0, "needle");
    EXPECT_NEAR(rep.angle_lt15, 2.0 / 3.0, 1e-12);  // the two base angles
    EXPECT_NEAR(rep.angle_lt30, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(rep.angle_gt120, 1.0 / 3.0, 1e-12);  // the apex
    EXPECT_NEAR(rep.angle_gt90, 1.0 / 3.0, 1e-12);
}

TEST(BuildReport, EmptyMeshIsAllZero) {
    TriangleMesh m;
    QualityReport rep = build_report(m, 1.0, 0.0, "empty");
    EXPECT_EQ(rep.triangles, 0u);
    EXPECT_EQ(rep.vertices, 0u);
    EXPECT_DOUBLE_EQ(rep.angle_lt15, 0.0);
    EXPECT_DOUBLE_EQ(rep.q_gt08, 0.0);
    for (double v : rep.b_histogram) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(BuildReport, DegenerateExcludedFromBinsButCounted) {
    TriangleMesh m = equilateral_mesh(1.0);
    VertexIndex a = m.add_vertex({5, 5, 0});
    VertexIndex b = m.add_vertex({6, 5, 0});
    VertexIndex c = m.add_vertex({7, 5, 0});  // collinear
    m.add_triangle(a, b, c);
    QualityReport rep = build_report(m, 1.0, 0.0, "mixed");
    EXPECT_EQ(rep.degenerate, 1u);
    EXPECT_EQ(rep.triangles, 2u);
    EXPECT_DOUBLE_EQ(rep.angle_ideal_40_80, 1.0);  // only the equilateral counts
}

TEST(BuildReport, CumulativeBinsAreOrdered) {
    std::mt19937 rng(15);
    auto coord = [&] { return (rng() % 100000) / 5000.0 - 10.0; };
    TriangleMesh m;
    for (int t = 0; t < 50; ++t) {
        VertexIndex base = static_cast<VertexIndex>(m.vertices.size());
        for (int v = 0; v < 3; ++v) m.add_vertex({coord(), coord(), coord()});
        m.add_triangle(base, base + 1, base + 2);
    }
    QualityReport rep = build_report(m, 5.0, 0.0, "random");
    EXPECT_LE(rep.angle_lt15, rep.angle_lt30);
    EXPECT_LE(rep.angle_gt120, rep.angle_gt90);
    EXPECT_LE(rep.q_lt03, rep.q_lt05);
}
