#pragma once

// Edge-length-driven local subdivision. Triangles are classified by how many
// edges exceed the active limit; the classic scheme always quarters, the
// novel scheme picks a bisection / three-way / quartering stencil so that no
// edge already under the limit is ever cut. Two auxiliary schemes refine the
// all-edges-long case: a multistage schedule of shrinking limits, and an
// angle-restricted quartering for thin triangles that stops the parent shape
// from being inherited by every child.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "trisub/mesh.hpp"
#include "trisub/metrics.hpp"

namespace trisub {

enum class Method { classic, novel, multistage, angle_restricted };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::classic: return "classic";
        case Method::novel: return "novel";
        case Method::multistage: return "multistage";
        case Method::angle_restricted: return "angle-restricted";
    }
    return "unknown";
}

inline Method parse_method(const std::string& s) {
    if (s == "classic") return Method::classic;
    if (s == "novel") return Method::novel;
    if (s == "multistage") return Method::multistage;
    if (s == "angle-restricted" || s == "angle_restricted") return Method::angle_restricted;
    throw std::invalid_argument("unknown method: " + s);
}

struct SubdivisionConfig {
    Method method = Method::novel;
    double max_edge = 0.0;             // final edge-length limit, > 0
    double initial_limit = 0.0;        // multistage L0; 0 selects 4 * max_edge
    double fold_factor = 2.0;          // multistage divisor, > 1
    double angle_threshold_deg = 30.0; // angle-restricted theta0, in (0, 60)

    double effective_initial_limit() const {
        return initial_limit > 0.0 ? initial_limit : 4.0 * max_edge;
    }

    void validate() const {
        if (!(max_edge > 0.0))
            throw std::invalid_argument("subdivision config: max_edge must be > 0");
        if (method == Method::multistage) {
            if (!(fold_factor > 1.0))
                throw std::invalid_argument("subdivision config: fold_factor must be > 1");
            if (effective_initial_limit() < max_edge)
                throw std::invalid_argument(
                    "subdivision config: initial_limit must be >= max_edge");
        }
        if (method == Method::angle_restricted) {
            if (!(angle_threshold_deg > 0.0) || !(angle_threshold_deg < 60.0))
                throw std::invalid_argument(
                    "subdivision config: angle_threshold must be in (0, 60) degrees");
        }
    }
};

// Edge slot e of a triangle is (v[e], v[(e+1)%3]); the opposite corner is
// (e+2)%3. Slots in `edges_by_length` are ordered by (length desc, EdgeKey
// asc); the first `unqualified_count` of them are the over-limit edges.
struct TriangleClass {
    int unqualified_count = 0;
    std::array<int, 3> edges_by_length{0, 1, 2};
    bool two_acute_below_theta0 = false;
    bool degenerate = false;
};

struct StageStats {
    double limit = 0.0;
    std::uint64_t input_triangles = 0;
    std::uint64_t final_triangles = 0;
    std::uint64_t created_total = 0;  // inputs + children of this stage
    double seconds = 0.0;
};

struct SubdivisionOutcome {
    TriangleMesh mesh;
    std::uint64_t triangles_created_total = 0;  // every triangle ever materialized
    std::uint64_t final_triangles = 0;
    std::uint64_t new_vertices = 0;
    std::uint64_t stack_high_water = 0;
    std::uint64_t degenerate_passed = 0;
    std::uint64_t bisect_splits = 0;
    std::uint64_t three_splits = 0;
    std::uint64_t quarter_splits = 0;
    std::uint64_t angle_restricted_splits = 0;
    double seconds = 0.0;
    std::vector<StageStats> stages;  // filled by the multistage driver
};

// Qualified means length does not exceed the limit; strictly longer edges are
// unqualified. theta0_deg <= 0 skips the acute-pair test.
inline TriangleClass classify(const TriangleMesh& mesh, const Triangle& tri, double limit,
                              double theta0_deg = 0.0, double degeneracy_eps = 0.0) {
    if (!(limit > 0.0)) throw std::invalid_argument("classify: limit must be > 0");
    TriangleClass cls;

    std::array<double, 3> len{};
    std::array<EdgeKey, 3> key{};
    for (int e = 0; e < 3; ++e) {
        key[e] = EdgeKey(tri[e], tri[(e + 1) % 3]);
        len[e] = edge_length(mesh, key[e]);
    }

    std::sort(cls.edges_by_length.begin(), cls.edges_by_length.end(), [&](int lhs, int rhs) {
        if (len[lhs] != len[rhs]) return len[lhs] > len[rhs];
        return key[lhs] < key[rhs];
    });

    double min_len = std::min({len[0], len[1], len[2]});
    if (min_len <= degeneracy_eps ||
        detail::quality_q_raw(len[0], len[1], len[2]) < kDegenerateQ) {
        cls.degenerate = true;
        return cls;
    }

    for (double l : len)
        if (l > limit) ++cls.unqualified_count;

    if (theta0_deg > 0.0) {
        std::array<double, 3> ang = triangle_angles(
            mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        std::sort(ang.begin(), ang.end());
        cls.two_acute_below_theta0 = ang[0] < theta0_deg && ang[1] < theta0_deg;
    }
    return cls;
}

// All stencils preserve the parent winding; children are listed in a fixed
// order so runs are reproducible.

inline std::array<Triangle, 4> split_quarter(TriangleMesh& mesh, MidpointCache& cache,
                                             const Triangle& tri) {
    VertexIndex m01 = get_or_create_midpoint(mesh, cache, EdgeKey(tri[0], tri[1]));
    VertexIndex m12 = get_or_create_midpoint(mesh, cache, EdgeKey(tri[1], tri[2]));
    VertexIndex m20 = get_or_create_midpoint(mesh, cache, EdgeKey(tri[2], tri[0]));
    return {Triangle(tri[0], m01, m20), Triangle(m01, tri[1], m12),
            Triangle(m20, m12, tri[2]), Triangle(m01, m12, m20)};
}

// Two over-limit edges: cut both at their midpoints, connect the midpoints,
// and join the longest edge's midpoint to its opposite corner. The qualified
// edge survives intact.
inline std::array<Triangle, 3> split_three(TriangleMesh& mesh, MidpointCache& cache,
                                           const Triangle& tri, const TriangleClass& cls) {
    if (cls.unqualified_count != 2)
        throw std::logic_error("split_three: classification is not 2 unqualified edges");
    const int e0 = cls.edges_by_length[0];  // longest, over limit
    const int e1 = cls.edges_by_length[1];  // second, over limit
    const VertexIndex opp = tri[(e0 + 2) % 3];
    const VertexIndex x = tri[e0];
    const VertexIndex y = tri[(e0 + 1) % 3];
    VertexIndex m_long = get_or_create_midpoint(mesh, cache, EdgeKey(x, y));

    if (e1 == (e0 + 2) % 3) {
        // second unqualified edge is opp -> x
        VertexIndex m_second = get_or_create_midpoint(mesh, cache, EdgeKey(opp, x));
        return {Triangle(opp, m_second, m_long), Triangle(m_second, x, m_long),
                Triangle(opp, m_long, y)};
    }
    // second unqualified edge is y -> opp
    VertexIndex m_second = get_or_create_midpoint(mesh, cache, EdgeKey(y, opp));
    return {Triangle(opp, x, m_long), Triangle(opp, m_long, m_second),
            Triangle(m_long, y, m_second)};
}

// One over-limit edge: connect its midpoint to the opposite corner. The new
// median is at most (a+b)/2 <= limit, so it never becomes a fresh long edge.
inline std::array<Triangle, 2> split_bisect(TriangleMesh& mesh, MidpointCache& cache,
                                            const Triangle& tri, const TriangleClass& cls) {
    if (cls.unqualified_count != 1)
        throw std::logic_error("split_bisect: classification is not 1 unqualified edge");
    const int e = cls.edges_by_length[0];
    const VertexIndex u = tri[e];
    const VertexIndex v = tri[(e + 1) % 3];
    const VertexIndex w = tri[(e + 2) % 3];
    VertexIndex m = get_or_create_midpoint(mesh, cache, EdgeKey(u, v));
    return {Triangle(u, m, w), Triangle(m, v, w)};
}

// Thin triangle with three long edges and two acute angles under theta0:
// quarter through the same three midpoints, but fan the two side midpoints
// into the longest edge's midpoint. Only the two corner children keep the
// parent shape; the diagonal to the apex splits the middle quad.
inline std::array<Triangle, 4> split_angle_restricted(TriangleMesh& mesh, MidpointCache& cache,
                                                      const Triangle& tri,
                                                      const TriangleClass& cls) {
    if (cls.unqualified_count != 3 || !cls.two_acute_below_theta0)
        throw std::logic_error("split_angle_restricted: gate not satisfied");
    const int e0 = cls.edges_by_length[0];  // longest edge, opposite the largest angle
    const VertexIndex a = tri[e0];
    const VertexIndex b = tri[(e0 + 1) % 3];
    const VertexIndex c = tri[(e0 + 2) % 3];
    VertexIndex m3 = get_or_create_midpoint(mesh, cache, EdgeKey(a, b));
    VertexIndex m2 = get_or_create_midpoint(mesh, cache, EdgeKey(b, c));
    VertexIndex m1 = get_or_create_midpoint(mesh, cache, EdgeKey(c, a));
    return {Triangle(a, m3, m1), Triangle(m3, b, m2), Triangle(m3, m2, c),
            Triangle(m3, c, m1)};
}

inline SubdivisionOutcome subdivide_multistage(const TriangleMesh& input,
                                               const SubdivisionConfig& config);

// Stack-driven refinement loop. Pops a triangle, classifies it against the
// limit, emits it when all edges qualify, otherwise applies the stencil
// selected by method and class and pushes the children.
inline SubdivisionOutcome subdivide(const TriangleMesh& input, const SubdivisionConfig& config) {
    config.validate();
    if (config.method == Method::multistage) return subdivide_multistage(input, config);
    if (!mesh_is_finite(input))
        throw std::invalid_argument("subdivide: mesh contains non-finite coordinates");

    const auto t_start = std::chrono::steady_clock::now();

    SubdivisionOutcome out;
    out.mesh.vertices = input.vertices;
    out.mesh.triangles.reserve(input.triangles.size());

    const double limit = config.max_edge;
    const double theta0 =
        config.method == Method::angle_restricted ? config.angle_threshold_deg : 0.0;
    const double degeneracy_eps = kDegenerateSideScale * bbox_diagonal(input);

    // LIFO work list, seeded in reverse so a fully qualified mesh comes out
    // in input order.
    std::vector<Triangle> stack(input.triangles.rbegin(), input.triangles.rend());
    MidpointCache cache;

    out.triangles_created_total = stack.size();
    out.stack_high_water = stack.size();

    while (!stack.empty()) {
        Triangle tri = stack.back();
        stack.pop_back();

        TriangleClass cls = classify(out.mesh, tri, limit, theta0, degeneracy_eps);
        if (cls.degenerate) {
            ++out.degenerate_passed;
            out.mesh.triangles.push_back(tri);
            continue;
        }
        if (cls.unqualified_count == 0) {
            out.mesh.triangles.push_back(tri);
            continue;
        }

        if (config.method == Method::classic) {
            for (const Triangle& child : split_quarter(out.mesh, cache, tri))
                stack.push_back(child);
            ++out.quarter_splits;
            out.triangles_created_total += 4;
        } else {
            switch (cls.unqualified_count) {
                case 1:
                    for (const Triangle& child : split_bisect(out.mesh, cache, tri, cls))
                        stack.push_back(child);
                    ++out.bisect_splits;
                    out.triangles_created_total += 2;
                    break;
                case 2:
                    for (const Triangle& child : split_three(out.mesh, cache, tri, cls))
                        stack.push_back(child);
                    ++out.three_splits;
                    out.triangles_created_total += 3;
                    break;
                default:
                    if (config.method == Method::angle_restricted &&
                        cls.two_acute_below_theta0) {
                        for (const Triangle& child :
                             split_angle_restricted(out.mesh, cache, tri, cls))
                            stack.push_back(child);
                        ++out.angle_restricted_splits;
                    } else {
                        for (const Triangle& child : split_quarter(out.mesh, cache, tri))
                            stack.push_back(child);
                        ++out.quarter_splits;
                    }
                    out.triangles_created_total += 4;
                    break;
            }
        }
        out.stack_high_water = std::max(out.stack_high_water,
                                        static_cast<std::uint64_t>(stack.size()));
    }

    out.final_triangles = out.mesh.triangles.size();
    out.new_vertices = out.mesh.vertices.size() - input.vertices.size();
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

// Runs the novel scheme at limits L0/f^k, clamped to the final limit, each
// stage feeding the next. Early loose stages break long edges with the cheap
// stencils before the tight final limit is applied.
inline SubdivisionOutcome subdivide_multistage(const TriangleMesh& input,
                                               const SubdivisionConfig& config) {
    if (config.method != Method::multistage)
        throw std::invalid_argument("subdivide_multistage: config.method must be multistage");
    config.validate();

    const double l_final = config.max_edge;
    const double l0 = config.effective_initial_limit();
    const double f = config.fold_factor;

    SubdivisionOutcome total;
    const TriangleMesh* stage_input = &input;
    SubdivisionOutcome stage_out;
    const std::uint64_t input_vertices = input.vertices.size();

    for (int k = 0;; ++k) {
        const double raw = l0 / std::pow(f, k);
        const double stage_limit = std::max(raw, l_final);

        SubdivisionConfig stage_cfg;
        stage_cfg.method = Method::novel;
        stage_cfg.max_edge = stage_limit;

        const std::uint64_t stage_inputs = stage_input->triangles.size();
        stage_out = subdivide(*stage_input, stage_cfg);

        StageStats stats;
        stats.limit = stage_limit;
        stats.input_triangles = stage_inputs;
        stats.final_triangles = stage_out.final_triangles;
        stats.created_total = stage_out.triangles_created_total;
        stats.seconds = stage_out.seconds;
        total.stages.push_back(stats);

        // created_total counts each triangle once: stage k's inputs were
        // already materialized by stage k-1.
        total.triangles_created_total +=
            k == 0 ? stage_out.triangles_created_total
                   : stage_out.triangles_created_total - stage_inputs;
        total.seconds += stage_out.seconds;
        total.stack_high_water = std::max(total.stack_high_water, stage_out.stack_high_water);
        total.bisect_splits += stage_out.bisect_splits;
        total.three_splits += stage_out.three_splits;
        total.quarter_splits += stage_out.quarter_splits;
        total.degenerate_passed = stage_out.degenerate_passed;

        if (raw <= l_final) break;  // this stage ran at the final limit
        stage_input = &stage_out.mesh;
    }

    total.mesh = std::move(stage_out.mesh);
    total.final_triangles = total.mesh.triangles.size();
    total.new_vertices = total.mesh.vertices.size() - input_vertices;
    return total;
}

struct ClassicPrediction {
    std::uint64_t n_total = 0;   // root + every intermediate + leaves
    std::uint64_t n_leaves = 0;  // triangles remaining after refinement
    std::vector<int> k;          // quartering depth per input triangle
};

// Closed-form element count for the classic scheme: each triangle quarters
// k = ceil(log2(max_edge / limit)) times, contributing sum_{u=0..k} 4^u
// materialized triangles and 4^k leaves.
inline ClassicPrediction predict_classic_count(const TriangleMesh& mesh, double L_threshold) {
    if (!(L_threshold > 0.0))
        throw std::domain_error("predict_classic_count: L_threshold must be > 0");
    ClassicPrediction pred;
    pred.k.reserve(mesh.triangles.size());
    for (const Triangle& t : mesh.triangles) {
        double max_len = 0.0;
        for (int e = 0; e < 3; ++e) {
            double len = (mesh.vertices[t[(e + 1) % 3]] - mesh.vertices[t[e]]).norm();
            max_len = std::max(max_len, len);
        }
        int k = 0;
        if (max_len > L_threshold)
            k = static_cast<int>(std::ceil(std::log2(max_len / L_threshold)));
        if (k < 0) k = 0;
        pred.k.push_back(k);
        std::uint64_t leaves = std::uint64_t{1} << (2 * k);  // 4^k
        pred.n_leaves += leaves;
        pred.n_total += (leaves * 4 - 1) / 3;  // sum of 4^u for u = 0..k
    }
    return pred;
}

}  // namespace trisub
