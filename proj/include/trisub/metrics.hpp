#pragma once

// Per-triangle and per-vertex quality metrics plus the histogram report used
// by the benchmark harness and the CLI stats command.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "trisub/mesh.hpp"

namespace trisub {

inline constexpr double kDegenerateQ = 1e-12;
inline constexpr double kDegenerateSideScale = 1e-12;  // times bbox diagonal

namespace detail {

// q = (a+b-c)(a+c-b)(b+c-a)/abc without domain checks; tiny negative factors
// from rounding clamp to zero so near-degenerate inputs land at q == 0.
inline double quality_q_raw(double a, double b, double c) {
    double f1 = a + b - c;
    double f2 = a + c - b;
    double f3 = b + c - a;
    if (f1 < 0.0) f1 = 0.0;
    if (f2 < 0.0) f2 = 0.0;
    if (f3 < 0.0) f3 = 0.0;
    double q = (f1 * f2 * f3) / (a * b * c);
    if (q > 1.0) q = 1.0;
    return q;
}

}  // namespace detail

// Inscribed-circle shape quality: 1 for equilateral, 0 for degenerate.
inline double quality_q(double a, double b, double c) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw std::domain_error("quality_q: sides must be positive");
    const double tol = 1e-9 * (a + b + c);
    if (a + b - c < -tol || a + c - b < -tol || b + c - a < -tol)
        throw std::domain_error("quality_q: triangle inequality violated");
    return detail::quality_q_raw(a, b, c);
}

// Interior angles in degrees, angle[i] at corner i. Uses atan2 of
// (cross magnitude, dot) which stays accurate near 0 and 180 degrees.
inline std::array<double, 3> triangle_angles(const Point3& p0, const Point3& p1,
                                             const Point3& p2) {
    const std::array<const Point3*, 3> p{&p0, &p1, &p2};
    std::array<double, 3> deg{};
    constexpr double to_deg = 180.0 / 3.14159265358979323846;
    for (int i = 0; i < 3; ++i) {
        Point3 u = *p[(i + 1) % 3] - *p[i];
        Point3 v = *p[(i + 2) % 3] - *p[i];
        double cross = u.cross(v).norm();
        double dot = u.dot(v);
        if (cross == 0.0 && dot <= 0.0)
            throw std::domain_error("triangle_angles: degenerate triangle");
        deg[i] = std::atan2(cross, dot) * to_deg;
    }
    if (deg[0] == 0.0 && deg[1] == 0.0 && deg[2] == 0.0)
        throw std::domain_error("triangle_angles: degenerate triangle");
    return deg;
}

// b_i = (shortest edge incident to vertex i) / L_limit. Entries for vertices
// referenced by no triangle are -1.
inline std::vector<double> vertex_b_values(const TriangleMesh& mesh, double L_limit) {
    if (!(L_limit > 0.0)) throw std::domain_error("vertex_b_values: L_limit must be > 0");
    std::vector<double> shortest(mesh.vertices.size(), -1.0);
    for (const Triangle& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            VertexIndex i = t[e];
            VertexIndex j = t[(e + 1) % 3];
            double len = (mesh.vertices[j] - mesh.vertices[i]).norm();
            for (VertexIndex k : {i, j}) {
                if (shortest[k] < 0.0 || len < shortest[k]) shortest[k] = len;
            }
        }
    }
    for (double& s : shortest)
        if (s >= 0.0) s /= L_limit;
    return shortest;
}

// Mirrors the benchmark table columns: element counts, cumulative angle and
// quality bins, ideal-range fraction, b histogram, timing.
struct QualityReport {
    std::string method;
    double limit = 0.0;
    std::uint64_t vertices = 0;
    std::uint64_t triangles = 0;
    std::uint64_t degenerate = 0;   // excluded from angle/quality bins
    double angle_lt15 = 0.0;        // fractions over all 3*T angles
    double angle_lt30 = 0.0;
    double angle_gt90 = 0.0;
    double angle_gt120 = 0.0;
    double angle_ideal_40_80 = 0.0;
    double q_lt03 = 0.0;            // fractions over T triangles
    double q_lt05 = 0.0;
    double q_gt08 = 0.0;
    std::vector<double> b_histogram;  // fractions per uniform bin over [0,1]
    double time_sec = 0.0;
    std::uint64_t created_total = 0;
    std::uint64_t stack_high_water = 0;
};

inline QualityReport build_report(const TriangleMesh& mesh, double L_limit, double time_sec,
                                  const std::string& label, int b_bins = 20) {
    if (b_bins < 1) throw std::invalid_argument("build_report: b_bins must be >= 1");
    QualityReport rep;
    rep.method = label;
    rep.limit = L_limit;
    rep.time_sec = time_sec;
    rep.vertices = mesh.vertices.size();
    rep.triangles = mesh.triangles.size();
    rep.b_histogram.assign(static_cast<std::size_t>(b_bins), 0.0);

    const double side_eps = kDegenerateSideScale * bbox_diagonal(mesh);

    std::uint64_t lt15 = 0, lt30 = 0, gt90 = 0, gt120 = 0, ideal = 0;
    std::uint64_t qlt03 = 0, qlt05 = 0, qgt08 = 0;
    std::uint64_t valid = 0;
    for (const Triangle& t : mesh.triangles) {
        const Point3& p0 = mesh.vertices[t[0]];
        const Point3& p1 = mesh.vertices[t[1]];
        const Point3& p2 = mesh.vertices[t[2]];
        double a = (p1 - p0).norm();
        double b = (p2 - p1).norm();
        double c = (p0 - p2).norm();
        // !(q >= eps) also catches the NaN a zero side would produce
        if (a <= side_eps || b <= side_eps || c <= side_eps ||
            !(detail::quality_q_raw(a, b, c) >= kDegenerateQ)) {
            ++rep.degenerate;
            continue;
        }
        ++valid;
        double q = detail::quality_q_raw(a, b, c);
        if (q < 0.3) ++qlt03;
        if (q < 0.5) ++qlt05;
        if (q > 0.8) ++qgt08;
        for (double ang : triangle_angles(p0, p1, p2)) {
            if (ang < 15.0) ++lt15;
            if (ang < 30.0) ++lt30;
            if (ang > 90.0) ++gt90;
            if (ang > 120.0) ++gt120;
            if (ang >= 40.0 && ang <= 80.0) ++ideal;
        }
    }
    if (valid > 0) {
        const double na = 3.0 * static_cast<double>(valid);
        rep.angle_lt15 = static_cast<double>(lt15) / na;
        rep.angle_lt30 = static_cast<double>(lt30) / na;
        rep.angle_gt90 = static_cast<double>(gt90) / na;
        rep.angle_gt120 = static_cast<double>(gt120) / na;
        rep.angle_ideal_40_80 = static_cast<double>(ideal) / na;
        rep.q_lt03 = static_cast<double>(qlt03) / static_cast<double>(valid);
        rep.q_lt05 = static_cast<double>(qlt05) / static_cast<double>(valid);
        rep.q_gt08 = static_cast<double>(qgt08) / static_cast<double>(valid);
    }

    if (L_limit > 0.0 && !mesh.triangles.empty()) {
        std::vector<double> b = vertex_b_values(mesh, L_limit);
        std::uint64_t referenced = 0;
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(b_bins), 0);
        for (double bi : b) {
            if (bi < 0.0) continue;
            ++referenced;
            auto bin = static_cast<std::size_t>(bi * b_bins);
            if (bin >= counts.size()) bin = counts.size() - 1;  // b == 1 and coarse-mesh b > 1
            ++counts[bin];
        }
        if (referenced > 0)
            for (std::size_t i = 0; i < counts.size(); ++i)
                rep.b_histogram[i] =
                    static_cast<double>(counts[i]) / static_cast<double>(referenced);
    }
    return rep;
}

}  // namespace trisub
