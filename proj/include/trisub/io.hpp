#pragma once

// STL (binary and ASCII) and Wavefront OBJ reading/writing, plus report
// serialization to JSON and CSV. Binary STL writes are byte-deterministic;
// coordinates go through the format's 32-bit floats.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "trisub/mesh.hpp"
#include "trisub/metrics.hpp"

namespace trisub {

enum class MeshFormat { stl_binary, stl_ascii, obj };

class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f32(std::string& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    put_u32(out, bits);
}

inline std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline float get_f32(const unsigned char* p) {
    std::uint32_t bits = get_u32(p);
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
}

inline Point3 face_normal(const Point3& p0, const Point3& p1, const Point3& p2) {
    Point3 n = (p1 - p0).cross(p2 - p0);
    double len = n.norm();
    if (len == 0.0) return {0.0, 0.0, 0.0};
    return n * (1.0 / len);
}

// shortest text that round-trips the 32-bit value
inline std::string fmt_f32(float v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
    return buf;
}

inline std::string fmt_f64(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// STL
// ---------------------------------------------------------------------------

inline constexpr std::size_t kStlHeaderSize = 84;  // 80-byte comment + u32 count
inline constexpr std::size_t kStlRecordSize = 50;

inline TriangleMesh read_stl_binary(std::string_view data, const std::string& name = "<stl>") {
    if (data.size() < kStlHeaderSize)
        throw parse_error(name + ": binary STL truncated, need 84 header bytes, have " +
                          std::to_string(data.size()));
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    std::uint32_t count = detail::get_u32(bytes + 80);
    std::size_t declared = kStlHeaderSize + static_cast<std::size_t>(count) * kStlRecordSize;
    if (data.size() < declared) {
        std::size_t full = (data.size() - kStlHeaderSize) / kStlRecordSize;
        std::size_t offset = kStlHeaderSize + full * kStlRecordSize;
        throw parse_error(name + ": binary STL truncated at byte offset " +
                          std::to_string(offset) + " (declares " + std::to_string(count) +
                          " triangles, payload holds " + std::to_string(full) + ")");
    }
    TriangleMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(count) * 3);
    mesh.triangles.reserve(count);
    const unsigned char* rec = bytes + kStlHeaderSize;
    for (std::uint32_t i = 0; i < count; ++i, rec += kStlRecordSize) {
        // 12 bytes of stored normal skipped; normals are recomputed on write
        VertexIndex base = static_cast<VertexIndex>(mesh.vertices.size());
        for (int v = 0; v < 3; ++v) {
            const unsigned char* p = rec + 12 + v * 12;
            Point3 pt{static_cast<double>(detail::get_f32(p)),
                      static_cast<double>(detail::get_f32(p + 4)),
                      static_cast<double>(detail::get_f32(p + 8))};
            if (!pt.finite())
                throw parse_error(name + ": non-finite vertex in triangle " + std::to_string(i));
            mesh.vertices.push_back(pt);
        }
        mesh.add_triangle(base, base + 1, base + 2);
    }
    return mesh;
}

namespace detail {

struct AsciiScanner {
    std::string_view data;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::string name;

    bool next(std::string& tok) {
        while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) {
            if (data[pos] == '\n') ++line;
            ++pos;
        }
        if (pos >= data.size()) return false;
        std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        tok.assign(data.substr(start, pos - start));
        return true;
    }

    void expect(const char* word) {
        std::string tok;
        if (!next(tok) || tok != word)
            throw parse_error(name + ":" + std::to_string(line) + ": expected '" + word +
                              "', got '" + tok + "'");
    }

    double number() {
        std::string tok;
        if (!next(tok))
            throw parse_error(name + ":" + std::to_string(line) + ": expected number, got EOF");
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size())
            throw parse_error(name + ":" + std::to_string(line) + ": malformed number '" + tok +
                              "'");
        return v;
    }

    void skip_line() {
        while (pos < data.size() && data[pos] != '\n') ++pos;
    }
};

}  // namespace detail

inline TriangleMesh read_stl_ascii(std::string_view data, const std::string& name = "<stl>") {
    detail::AsciiScanner sc{data, 0, 1, name};
    sc.expect("solid");
    sc.skip_line();  // solid name is free text
    TriangleMesh mesh;
    std::string tok;
    for (;;) {
        if (!sc.next(tok))
            throw parse_error(name + ":" + std::to_string(sc.line) +
                              ": unexpected EOF, missing 'endsolid'");
        if (tok == "endsolid") {
            sc.skip_line();
            std::string tail;
            if (sc.next(tail) && tail == "solid") {  // concatenated solids
                sc.skip_line();
                continue;
            }
            return mesh;
        }
        if (tok != "facet")
            throw parse_error(name + ":" + std::to_string(sc.line) +
                              ": expected 'facet' or 'endsolid', got '" + tok + "'");
        sc.expect("normal");
        sc.number();
        sc.number();
        sc.number();  // stored normal discarded
        sc.expect("outer");
        sc.expect("loop");
        VertexIndex base = static_cast<VertexIndex>(mesh.vertices.size());
        for (int v = 0; v < 3; ++v) {
            sc.expect("vertex");
            double x = sc.number();
            double y = sc.number();
            double z = sc.number();
            mesh.vertices.push_back({x, y, z});
        }
        sc.expect("endloop");
        sc.expect("endfacet");
        mesh.add_triangle(base, base + 1, base + 2);
    }
}

inline std::string write_stl_binary(const TriangleMesh& mesh) {
    std::string out;
    out.reserve(kStlHeaderSize + mesh.triangles.size() * kStlRecordSize);
    const char magic[] = "trisub binary stl";
    out.append(magic, sizeof(magic) - 1);
    out.append(80 - (sizeof(magic) - 1), '\0');
    detail::put_u32(out, static_cast<std::uint32_t>(mesh.triangles.size()));
    for (const Triangle& t : mesh.triangles) {
        const Point3& p0 = mesh.vertices[t[0]];
        const Point3& p1 = mesh.vertices[t[1]];
        const Point3& p2 = mesh.vertices[t[2]];
        Point3 n = detail::face_normal(p0, p1, p2);
        detail::put_f32(out, static_cast<float>(n.x));
        detail::put_f32(out, static_cast<float>(n.y));
        detail::put_f32(out, static_cast<float>(n.z));
        for (const Point3* p : {&p0, &p1, &p2}) {
            detail::put_f32(out, static_cast<float>(p->x));
            detail::put_f32(out, static_cast<float>(p->y));
            detail::put_f32(out, static_cast<float>(p->z));
        }
        detail::put_u16(out, 0);
    }
    return out;
}

inline std::string write_stl_ascii(const TriangleMesh& mesh) {
    std::string out = "solid trisub\n";
    for (const Triangle& t : mesh.triangles) {
        const Point3& p0 = mesh.vertices[t[0]];
        const Point3& p1 = mesh.vertices[t[1]];
        const Point3& p2 = mesh.vertices[t[2]];
        Point3 n = detail::face_normal(p0, p1, p2);
        out += "  facet normal " + detail::fmt_f32(static_cast<float>(n.x)) + " " +
               detail::fmt_f32(static_cast<float>(n.y)) + " " +
               detail::fmt_f32(static_cast<float>(n.z)) + "\n";
        out += "    outer loop\n";
        for (const Point3* p : {&p0, &p1, &p2}) {
            out += "      vertex " + detail::fmt_f32(static_cast<float>(p->x)) + " " +
                   detail::fmt_f32(static_cast<float>(p->y)) + " " +
                   detail::fmt_f32(static_cast<float>(p->z)) + "\n";
        }
        out += "    endloop\n  endfacet\n";
    }
    out += "endsolid trisub\n";
    return out;
}

// ---------------------------------------------------------------------------
// OBJ
// ---------------------------------------------------------------------------

inline TriangleMesh read_obj(std::string_view data, const std::string& name = "<obj>") {
    TriangleMesh mesh;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    std::vector<long> face;  // reused per f-line
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string_view::npos) eol = data.size();
        std::string_view line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_no;

        std::istringstream ls{std::string(line)};
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        if (head == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z))
                throw parse_error(name + ":" + std::to_string(line_no) +
                                  ": malformed vertex line");
            mesh.vertices.push_back({x, y, z});
        } else if (head == "f") {
            face.clear();
            std::string tok;
            while (ls >> tok) {
                // index is the part before the first '/'
                std::size_t slash = tok.find('/');
                std::string idx = slash == std::string::npos ? tok : tok.substr(0, slash);
                char* end = nullptr;
                long v = std::strtol(idx.c_str(), &end, 10);
                if (end != idx.c_str() + idx.size() || v == 0)
                    throw parse_error(name + ":" + std::to_string(line_no) +
                                      ": malformed face index '" + tok + "'");
                if (v < 0) v = static_cast<long>(mesh.vertices.size()) + v + 1;
                if (v < 1 || v > static_cast<long>(mesh.vertices.size()))
                    throw parse_error(name + ":" + std::to_string(line_no) +
                                      ": face index " + idx + " out of range");
                face.push_back(v - 1);
            }
            if (face.size() < 3)
                throw parse_error(name + ":" + std::to_string(line_no) +
                                  ": face needs at least 3 vertices");
            for (std::size_t i = 1; i + 1 < face.size(); ++i)  // fan from first vertex
                mesh.add_triangle(static_cast<VertexIndex>(face[0]),
                                  static_cast<VertexIndex>(face[i]),
                                  static_cast<VertexIndex>(face[i + 1]));
        }
        // vn/vt/o/g/s/usemtl/mtllib and anything else: ignored
    }
    return mesh;
}

inline std::string write_obj(const TriangleMesh& mesh) {
    std::string out;
    for (const Point3& p : mesh.vertices)
        out += "v " + detail::fmt_f64(p.x) + " " + detail::fmt_f64(p.y) + " " +
               detail::fmt_f64(p.z) + "\n";
    for (const Triangle& t : mesh.triangles)
        out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " +
               std::to_string(t[2] + 1) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Dispatch and files
// ---------------------------------------------------------------------------

// "solid"-prefixed binary files exist in the wild: try the ASCII grammar
// first and fall back to the binary layout on the first grammar failure.
inline TriangleMesh read_mesh_data(std::string_view data, const std::string& name = "<mesh>") {
    if (data.size() >= 5 && data.substr(0, 5) == "solid") {
        try {
            return read_stl_ascii(data, name);
        } catch (const parse_error&) {
            return read_stl_binary(data, name);
        }
    }
    return read_stl_binary(data, name);
}

inline bool has_extension(const std::string& path, const char* ext) {
    std::string e = ext;
    if (path.size() < e.size()) return false;
    std::string tail = path.substr(path.size() - e.size());
    for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return tail == e;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

inline void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline TriangleMesh read_mesh(const std::string& path) {
    std::string data = read_file(path);
    if (has_extension(path, ".obj")) return read_obj(data, path);
    return read_mesh_data(data, path);
}

inline std::string write_mesh_data(const TriangleMesh& mesh, MeshFormat format) {
    switch (format) {
        case MeshFormat::stl_binary: return write_stl_binary(mesh);
        case MeshFormat::stl_ascii: return write_stl_ascii(mesh);
        case MeshFormat::obj: return write_obj(mesh);
    }
    throw std::invalid_argument("write_mesh_data: bad format");
}

inline void write_mesh(const TriangleMesh& mesh, const std::string& path, MeshFormat format) {
    write_file(path, write_mesh_data(mesh, format));
}

inline MeshFormat format_for_path(const std::string& path) {
    return has_extension(path, ".obj") ? MeshFormat::obj : MeshFormat::stl_binary;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_to_json(const QualityReport& r) {
    nlohmann::ordered_json j;
    j["method"] = r.method;
    j["limit"] = r.limit;
    j["vertices"] = r.vertices;
    j["meshes"] = r.triangles;
    j["angle_lt15"] = r.angle_lt15;
    j["angle_lt30"] = r.angle_lt30;
    j["angle_gt90"] = r.angle_gt90;
    j["angle_gt120"] = r.angle_gt120;
    j["angle_ideal_40_80"] = r.angle_ideal_40_80;
    j["q_lt03"] = r.q_lt03;
    j["q_lt05"] = r.q_lt05;
    j["q_gt08"] = r.q_gt08;
    j["b_histogram"] = r.b_histogram;
    j["time_sec"] = r.time_sec;
    j["created_total"] = r.created_total;
    j["stack_high_water"] = r.stack_high_water;
    j["degenerate_triangles"] = r.degenerate;
    j["angle_basis"] = "all_angles";  // fractions are over all 3*T angles
    return j;
}

inline std::string report_json_string(const QualityReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

inline std::string report_json_string(const std::vector<QualityReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const QualityReport& r : reports) arr.push_back(report_to_json(r));
    return arr.dump(2) + "\n";
}

inline const char* kReportCsvHeader =
    "method,limit,vertices,meshes,angle_lt15,angle_lt30,angle_gt90,angle_gt120,"
    "angle_ideal_40_80,q_lt03,q_lt05,q_gt08,b_histogram,time_sec,created_total,"
    "stack_high_water";

inline std::string report_csv_string(const std::vector<QualityReport>& reports) {
    std::string out = kReportCsvHeader;
    out += "\n";
    for (const QualityReport& r : reports) {
        out += r.method + "," + detail::fmt_f64(r.limit) + "," + std::to_string(r.vertices) +
               "," + std::to_string(r.triangles) + "," + detail::fmt_f64(r.angle_lt15) + "," +
               detail::fmt_f64(r.angle_lt30) + "," + detail::fmt_f64(r.angle_gt90) + "," +
               detail::fmt_f64(r.angle_gt120) + "," + detail::fmt_f64(r.angle_ideal_40_80) +
               "," + detail::fmt_f64(r.q_lt03) + "," + detail::fmt_f64(r.q_lt05) + "," +
               detail::fmt_f64(r.q_gt08) + ",";
        for (std::size_t i = 0; i < r.b_histogram.size(); ++i) {
            if (i) out += ";";
            out += detail::fmt_f64(r.b_histogram[i]);
        }
        out += "," + detail::fmt_f64(r.time_sec) + "," + std::to_string(r.created_total) + "," +
               std::to_string(r.stack_high_water) + "\n";
    }
    return out;
}

inline void write_report(const QualityReport& report, const std::string& path) {
    if (has_extension(path, ".csv"))
        write_file(path, report_csv_string({report}));
    else
        write_file(path, report_json_string(report));
}

inline void write_report(const std::vector<QualityReport>& reports, const std::string& path) {
    if (has_extension(path, ".csv"))
        write_file(path, report_csv_string(reports));
    else
        write_file(path, report_json_string(reports));
}

}  // namespace trisub
